//! Time steppers for `u_t + u_x = 0` with `V = 1` and unit cells.

mod reconstruct;

pub use reconstruct::{
    half_cell_integrals, reconstruct, reconstruct_cell, CellProfile, Convention, ReconstructionProfile,
};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Cfl, Scalar};
use crate::state::{GridState, Phase};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    Upwind,
    LaxWendroff,
    DlFixed,
    DlShifted,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 4] =
        [SchemeKind::Upwind, SchemeKind::LaxWendroff, SchemeKind::DlFixed, SchemeKind::DlShifted];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Upwind => "upwind",
            SchemeKind::LaxWendroff => "lax_wendroff",
            SchemeKind::DlFixed => "dl_fixed",
            SchemeKind::DlShifted => "dl_shifted",
        }
    }

    /// Upwind and both reconstruction schemes preserve monotone data.
    pub fn is_monotone(self) -> bool {
        !matches!(self, SchemeKind::LaxWendroff)
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "upwind" => Ok(SchemeKind::Upwind),
            "lax_wendroff" | "lw" => Ok(SchemeKind::LaxWendroff),
            "dl_fixed" | "dl" => Ok(SchemeKind::DlFixed),
            "dl_shifted" | "shifted" => Ok(SchemeKind::DlShifted),
            other => Err(Error::Config(format!("unknown scheme `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeParams {
    pub kind: SchemeKind,
    pub lambda: Cfl,
}

impl SchemeParams {
    pub fn new(kind: SchemeKind, lambda: Cfl) -> Result<Self> {
        let p = SchemeParams { kind, lambda };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind == SchemeKind::DlShifted && self.lambda > Cfl::half() {
            return Err(Error::ShiftedLambda(self.lambda.to_string()));
        }
        Ok(())
    }
}

fn require_integer<S: Scalar>(state: &GridState<S>, scheme: &'static str) -> Result<()> {
    match state.phase() {
        Phase::Integer => Ok(()),
        Phase::ShiftedLeft => Err(Error::PhaseMismatch { scheme }),
    }
}

/// Applies `f` to every cell that can differ from the tail extrapolation,
/// i.e. the window grown by two cells per side, and trims the result.
fn map_cells<S: Scalar>(state: &GridState<S>, phase: Phase, lambda: Cfl, f: impl Fn(i64) -> S) -> GridState<S> {
    let (lo, hi) = if state.is_periodic() {
        (state.start(), state.end())
    } else {
        (state.start() - 2, state.end() + 2)
    };
    let values = (lo..=hi).map(f).collect();
    state.rebuilt(lo, values, phase, lambda)
}

pub fn upwind_step<S: Scalar>(state: &GridState<S>, lambda: Cfl) -> Result<GridState<S>> {
    require_integer(state, "upwind")?;
    let lam: S = lambda.to_scalar();
    Ok(map_cells(state, Phase::Integer, lambda, |j| {
        let u = state.cell_value(j);
        u.clone() - lam.clone() * (u - state.cell_value(j - 1))
    }))
}

pub fn lax_wendroff_step<S: Scalar>(state: &GridState<S>, lambda: Cfl) -> Result<GridState<S>> {
    require_integer(state, "lax_wendroff")?;
    let lam: S = lambda.to_scalar();
    let two = S::from_int(2);
    let a = lam.clone() / two.clone();
    let b = lam.clone() * lam / two.clone();
    Ok(map_cells(state, Phase::Integer, lambda, |j| {
        let (um, u, up) = (state.cell_value(j - 1), state.cell_value(j), state.cell_value(j + 1));
        u.clone() - a.clone() * (up.clone() - um.clone()) + b.clone() * (up - two.clone() * u.clone() + um)
    }))
}

/// Integral of the reconstruction over `[j - 1/2 - lambda, j + 1/2 - lambda]`
/// in the state's own cell coordinates: the tail of cell `j - 1` and the
/// head of cell `j`.
fn shifted_left_average<S: Scalar>(profile: &ReconstructionProfile<'_, S>, j: i64, lam: &S) -> S {
    let one = S::one();
    let cut = one.clone() - lam.clone();
    profile.cell(j - 1).integrate_offsets(&cut, &one) + profile.cell(j).integrate_offsets(&S::zero(), &cut)
}

/// Integral over `[j - 1/2 + lambda, j + 1/2 + lambda]`: the tail of cell `j`
/// and the head of cell `j + 1`.
fn shifted_right_average<S: Scalar>(profile: &ReconstructionProfile<'_, S>, j: i64, lam: &S) -> S {
    profile.cell(j).integrate_offsets(lam, &S::one()) + profile.cell(j + 1).integrate_offsets(&S::zero(), lam)
}

/// Fixed-grid anti-diffusive step: reconstruct, translate by `lambda`,
/// average back onto the same cells.
pub fn dl_fixed_step<S: Scalar>(state: &GridState<S>, lambda: Cfl) -> Result<GridState<S>> {
    require_integer(state, "dl_fixed")?;
    let lam: S = lambda.to_scalar();
    let profile = reconstruct(state, Convention::FromLeft);
    Ok(map_cells(state, Phase::Integer, lambda, |j| shifted_left_average(&profile, j, &lam)))
}

/// One step of the alternating scheme. From the integer grid the cells are
/// averaged onto the grid shifted left by `lambda`; from the shifted grid
/// back onto the integer grid.
///
/// Cell `j` of the shifted grid is centered at `j - lambda`, so a shifted
/// state keeps the index of the integer cell it overlaps most.
pub fn shifted_step<S: Scalar>(state: &GridState<S>, lambda: Cfl) -> Result<GridState<S>> {
    if lambda > Cfl::half() {
        return Err(Error::ShiftedLambda(lambda.to_string()));
    }
    let lam: S = lambda.to_scalar();
    match state.phase() {
        Phase::Integer => {
            let profile = reconstruct(state, Convention::FromRight);
            Ok(map_cells(state, Phase::ShiftedLeft, lambda, |j| shifted_left_average(&profile, j, &lam)))
        }
        Phase::ShiftedLeft => {
            if state.lambda() != lambda {
                return Err(Error::InvalidState(format!(
                    "state is shifted by {}, scheme uses {lambda}",
                    state.lambda()
                )));
            }
            let profile = reconstruct(state, Convention::FromLeft);
            Ok(map_cells(state, Phase::Integer, lambda, |j| shifted_right_average(&profile, j, &lam)))
        }
    }
}

pub fn step<S: Scalar>(state: &GridState<S>, params: &SchemeParams) -> Result<GridState<S>> {
    match params.kind {
        SchemeKind::Upwind => upwind_step(state, params.lambda),
        SchemeKind::LaxWendroff => lax_wendroff_step(state, params.lambda),
        SchemeKind::DlFixed => dl_fixed_step(state, params.lambda),
        SchemeKind::DlShifted => shifted_step(state, params.lambda),
    }
}

/// Reconstruction convention the given scheme uses on this state.
pub fn convention_for<S: Scalar>(kind: SchemeKind, state: &GridState<S>) -> Option<Convention> {
    match (kind, state.phase()) {
        (SchemeKind::DlFixed, _) => Some(Convention::FromLeft),
        (SchemeKind::DlShifted, Phase::Integer) => Some(Convention::FromRight),
        (SchemeKind::DlShifted, Phase::ShiftedLeft) => Some(Convention::FromLeft),
        _ => None,
    }
}

/// Applies `n_steps` steps, handing each new state to `observer` together
/// with its step number (1-based).
pub fn run<S: Scalar>(
    state: &GridState<S>,
    params: &SchemeParams,
    n_steps: usize,
    mut observer: impl FnMut(usize, &GridState<S>),
) -> Result<GridState<S>> {
    params.validate()?;
    let mut cur = state.clone();
    for n in 1..=n_steps {
        cur = step(&cur, params)?;
        observer(n, &cur);
    }
    Ok(cur)
}

/// States `u^0, ..., u^n`.
pub fn trajectory<S: Scalar>(state: &GridState<S>, params: &SchemeParams, n_steps: usize) -> Result<Vec<GridState<S>>> {
    let mut out = Vec::with_capacity(n_steps + 1);
    out.push(state.clone());
    run(state, params, n_steps, |_, s| out.push(s.clone()))?;
    Ok(out)
}
