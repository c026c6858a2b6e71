use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::state::{GridState, Phase, PiecewiseDatum};

/// Placement of a periodic grid of `m` cells on one period of a datum:
/// cell `k` is `[origin + k dx, origin + (k + 1) dx)` on the integer grid,
/// moved left by `lambda dx` on the shifted grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Layout {
    pub origin: Rational,
    pub dx: Rational,
    pub cells: usize,
}

impl Layout {
    pub fn for_datum(datum: &PiecewiseDatum, cells: usize) -> Result<Self> {
        let period = datum
            .period
            .clone()
            .ok_or_else(|| Error::InvalidDatum("periodic layout needs a periodic datum".into()))?;
        if cells == 0 {
            return Err(Error::Config("a periodic grid needs at least one cell".into()));
        }
        Ok(Layout {
            origin: datum.span_start().clone(),
            dx: period / <Rational as Scalar>::from_int(cells as i64),
            cells,
        })
    }

    pub fn dx<S: Scalar>(&self) -> S {
        S::from_rational(&self.dx)
    }

    /// Center of cell `k` of a state with the given phase.
    pub fn center<S: Scalar>(&self, k: i64, shift: &S) -> S {
        let half = S::one() / S::from_int(2);
        S::from_rational(&self.origin) + (S::from_int(k) + half - shift.clone()) * self.dx::<S>()
    }

    fn check<S: Scalar>(&self, state: &GridState<S>) -> Result<()> {
        if !state.is_periodic() {
            return Err(Error::Precondition("error norms need a periodic state".into()));
        }
        if state.len() != self.cells {
            return Err(Error::Precondition(format!(
                "state has {} cells, layout expects {}",
                state.len(),
                self.cells
            )));
        }
        Ok(())
    }
}

fn shift_of<S: Scalar>(state: &GridState<S>) -> S {
    match state.phase() {
        Phase::Integer => S::zero(),
        Phase::ShiftedLeft => state.lambda().to_scalar(),
    }
}

/// `max_j |u_j - u0(x_j - t)|` with `x_j` the cell centers.
pub fn linf_error_pointwise<S: Scalar>(state: &GridState<S>, datum: &PiecewiseDatum, t: &S) -> Result<S> {
    let layout = Layout::for_datum(datum, state.len())?;
    layout.check(state)?;
    let shift = shift_of(state);
    let mut worst = S::zero();
    for (k, u) in state.values().iter().enumerate() {
        let x = layout.center(state.start() + k as i64, &shift);
        let e = (u.clone() - datum.eval(&(x - t.clone()))?).abs();
        if e > worst {
            worst = e;
        }
    }
    Ok(worst)
}

/// `dx sum_j |u_j - mean of u0(. - t) over cell j|`.
pub fn l1_error_cell_averaged<S: Scalar>(state: &GridState<S>, datum: &PiecewiseDatum, t: &S) -> Result<S> {
    let layout = Layout::for_datum(datum, state.len())?;
    layout.check(state)?;
    let shift = shift_of(state);
    let dx: S = layout.dx();
    let mut total = S::zero();
    for (k, u) in state.values().iter().enumerate() {
        let x = layout.center(state.start() + k as i64, &shift);
        let exact = datum.cell_average(&(x - t.clone()), &dx)?;
        total = total + (u.clone() - exact).abs();
    }
    Ok(dx * total)
}

/// `sum_j min(|u_{j-1} - u_j|, |u_j - u_{j+1}|, |u_{j+1} - u_{j+2}|)`.
///
/// Zero exactly when every intermediate value sits between plateaus of at
/// least three cells. Periodic states sum over one period; infinite states
/// over the cells whose stencil touches the window.
pub fn plateau_metric_i<S: Scalar>(state: &GridState<S>) -> S {
    let (lo, hi) = if state.is_periodic() {
        (state.start(), state.end())
    } else {
        (state.start() - 2, state.end() + 1)
    };
    let d = |j: i64| (state.cell_value(j + 1) - state.cell_value(j)).abs();
    (lo..=hi).fold(S::zero(), |acc, j| {
        let (a, b, c) = (d(j - 1), d(j), d(j + 1));
        let m = if a < b { a } else { b };
        acc + if c < m { c } else { m }
    })
}
