//! Grid states: finite windows of cell values with arithmetic tails, or
//! periodic cell arrays.
//!
//! Cells have unit width. At [`Phase::Integer`] cell `j` is centered at `j`;
//! at [`Phase::ShiftedLeft`] (odd iterations of the shifted process) cell `j`
//! is centered at `j - lambda`.

mod datum;
mod decompose;
mod jumps;
pub mod json;

pub use datum::{Expr, Piece, PiecewiseDatum};
pub use decompose::{monotone_decomposition, Decomposition};
pub use jumps::JumpSequence;
pub use json::AnyState;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{min_max, Cfl, Scalar};

/// Arithmetic extrapolation of an infinite state beyond its window.
///
/// `anchor` is the value of the window edge cell and `step` the increment
/// per cell moving away from the window (so a left tail that decreases
/// leftwards has a negative step).
#[derive(Clone, Debug, PartialEq)]
pub struct Tail<S> {
    pub anchor: S,
    pub step: S,
}

impl<S: Scalar> Tail<S> {
    pub fn constant(anchor: S) -> Self {
        Tail { anchor, step: S::zero() }
    }

    pub fn is_constant(&self) -> bool {
        self.step.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Extent<S> {
    /// Index arithmetic modulo the number of stored values.
    Periodic,
    Infinite { left: Tail<S>, right: Tail<S> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    Integer,
    ShiftedLeft,
}

impl Phase {
    pub fn toggled(self) -> Self {
        match self {
            Phase::Integer => Phase::ShiftedLeft,
            Phase::ShiftedLeft => Phase::Integer,
        }
    }
}

/// A sequence of cell averages `(u_j)`.
#[derive(Clone, Debug)]
pub struct GridState<S> {
    extent: Extent<S>,
    values: Vec<S>,
    start: i64,
    phase: Phase,
    lambda: Cfl,
}

impl<S: Scalar> GridState<S> {
    pub fn periodic(values: Vec<S>, lambda: Cfl) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidState("periodic state needs at least one cell".into()));
        }
        Ok(GridState { extent: Extent::Periodic, values, start: 0, phase: Phase::Integer, lambda })
    }

    /// Infinite state whose tails continue the window edges with the given
    /// per-cell steps.
    pub fn infinite(start: i64, values: Vec<S>, left_step: S, right_step: S, lambda: Cfl) -> Result<Self> {
        let (first, last) = match (values.first(), values.last()) {
            (Some(f), Some(l)) => (f.clone(), l.clone()),
            _ => return Err(Error::InvalidState("infinite state needs a non-empty window".into())),
        };
        Ok(GridState {
            extent: Extent::Infinite {
                left: Tail { anchor: first, step: left_step },
                right: Tail { anchor: last, step: right_step },
            },
            values,
            start,
            phase: Phase::Integer,
            lambda,
        })
    }

    /// Infinite state with constant tails equal to the window edge values.
    pub fn with_constant_tails(start: i64, values: Vec<S>, lambda: Cfl) -> Result<Self> {
        Self::infinite(start, values, S::zero(), S::zero(), lambda)
    }

    pub fn constant(value: S, lambda: Cfl) -> Self {
        Self::with_constant_tails(0, vec![value], lambda).expect("non-empty window")
    }

    /// General constructor; rejects tails whose anchors contradict the window.
    pub fn from_parts(extent: Extent<S>, values: Vec<S>, start: i64, phase: Phase, lambda: Cfl) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidState("empty window".into()));
        }
        if let Extent::Infinite { left, right } = &extent {
            if left.anchor != values[0] {
                return Err(Error::InvalidState(format!(
                    "left tail anchor {} differs from window edge value {}",
                    left.anchor, values[0]
                )));
            }
            if right.anchor != values[values.len() - 1] {
                return Err(Error::InvalidState(format!(
                    "right tail anchor {} differs from window edge value {}",
                    right.anchor,
                    values[values.len() - 1]
                )));
            }
        }
        Ok(GridState { extent, values, start, phase, lambda })
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    pub fn with_lambda(mut self, lambda: Cfl) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn extent(&self) -> &Extent<S> {
        &self.extent
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    /// Index of the first stored cell.
    pub fn start(&self) -> i64 {
        self.start
    }

    /// Index of the last stored cell.
    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn lambda(&self) -> Cfl {
        self.lambda
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.extent, Extent::Periodic)
    }

    pub fn tails(&self) -> Option<(&Tail<S>, &Tail<S>)> {
        match &self.extent {
            Extent::Infinite { left, right } => Some((left, right)),
            Extent::Periodic => None,
        }
    }

    /// Offset of cell centers from the integers: `lambda` when shifted.
    pub fn center_shift(&self) -> S {
        match self.phase {
            Phase::Integer => S::zero(),
            Phase::ShiftedLeft => self.lambda.to_scalar(),
        }
    }

    /// Value of cell `j`, extrapolating through the tails or wrapping
    /// periodically.
    pub fn cell_value(&self, j: i64) -> S {
        match &self.extent {
            Extent::Periodic => {
                let m = self.values.len() as i64;
                self.values[(j - self.start).rem_euclid(m) as usize].clone()
            }
            Extent::Infinite { left, right } => {
                if j < self.start {
                    left.anchor.clone() + left.step.clone() * S::from_int(self.start - j)
                } else if j > self.end() {
                    right.anchor.clone() + right.step.clone() * S::from_int(j - self.end())
                } else {
                    self.values[(j - self.start) as usize].clone()
                }
            }
        }
    }

    /// Values of cells `lo..=hi`.
    pub fn window(&self, lo: i64, hi: i64) -> Vec<S> {
        (lo..=hi).map(|j| self.cell_value(j)).collect()
    }

    pub fn jumps(&self) -> JumpSequence<S> {
        JumpSequence::of(self)
    }

    /// True iff every jump, tails included, is nonnegative.
    pub fn is_nondecreasing(&self) -> bool {
        let window_ok = self.values.windows(2).all(|w| w[1] >= w[0]);
        match &self.extent {
            Extent::Periodic => window_ok && self.values[self.values.len() - 1] <= self.values[0],
            Extent::Infinite { left, right } => {
                window_ok && !left.step.is_positive() && !right.step.is_negative()
            }
        }
    }

    pub fn total_variation(&self) -> TotalVariation<S> {
        let jumps = self.jumps();
        match &self.extent {
            Extent::Infinite { left, right } if !left.is_constant() || !right.is_constant() => {
                TotalVariation::Infinite
            }
            _ => TotalVariation::Finite(
                jumps.window().iter().fold(S::zero(), |acc, s| acc + s.abs()),
            ),
        }
    }

    /// Sum of the stored values of a periodic state (its mass with unit cells).
    pub fn mass(&self) -> S {
        self.values.iter().cloned().fold(S::zero(), |a, b| a + b)
    }

    /// Smallest and largest values; `None` when a tail is unbounded.
    pub fn bounds(&self) -> Option<(S, S)> {
        if let Extent::Infinite { left, right } = &self.extent {
            if !left.is_constant() || !right.is_constant() {
                return None;
            }
        }
        min_max(self.values.iter())
    }

    /// Same state with `k` tail-extrapolated cells stored on each side.
    pub fn padded(&self, k: usize) -> Self {
        if self.is_periodic() || k == 0 {
            return self.clone();
        }
        let lo = self.start - k as i64;
        let hi = self.end() + k as i64;
        let values = self.window(lo, hi);
        let mut out = self.clone();
        out.start = lo;
        out.values = values;
        out.refresh_anchors();
        out
    }

    /// Smallest window consistent with the tails.
    pub fn trimmed(&self) -> Self {
        let mut out = self.clone();
        out.trim_in_place();
        out
    }

    fn trim_in_place(&mut self) {
        let (lstep, rstep) = match &self.extent {
            Extent::Periodic => return,
            Extent::Infinite { left, right } => (left.step.clone(), right.step.clone()),
        };
        let mut lo = 0usize;
        let mut hi = self.values.len() - 1;
        while hi > lo && self.values[hi].tail_eq(&(self.values[hi - 1].clone() + rstep.clone())) {
            hi -= 1;
        }
        while hi > lo && self.values[lo].tail_eq(&(self.values[lo + 1].clone() + lstep.clone())) {
            lo += 1;
        }
        if lo > 0 || hi + 1 < self.values.len() {
            self.values.truncate(hi + 1);
            self.values.drain(..lo);
            self.start += lo as i64;
        }
        self.refresh_anchors();
    }

    fn refresh_anchors(&mut self) {
        let first = self.values[0].clone();
        let last = self.values[self.values.len() - 1].clone();
        if let Extent::Infinite { left, right } = &mut self.extent {
            left.anchor = first;
            right.anchor = last;
        }
    }

    /// Replaces the stored values, keeping the tail steps, then trims.
    /// Used by the steppers after computing an extended window.
    pub(crate) fn rebuilt(&self, start: i64, values: Vec<S>, phase: Phase, lambda: Cfl) -> Self {
        let mut out = GridState { extent: self.extent.clone(), values, start, phase, lambda };
        out.refresh_anchors();
        out.trim_in_place();
        out
    }

    /// `scale * u + shift` cellwise (tails included).
    pub fn affine(&self, scale: &S, shift: &S) -> Self {
        let map = |v: &S| scale.clone() * v.clone() + shift.clone();
        let extent = match &self.extent {
            Extent::Periodic => Extent::Periodic,
            Extent::Infinite { left, right } => Extent::Infinite {
                left: Tail { anchor: map(&left.anchor), step: scale.clone() * left.step.clone() },
                right: Tail { anchor: map(&right.anchor), step: scale.clone() * right.step.clone() },
            },
        };
        GridState {
            extent,
            values: self.values.iter().map(map).collect(),
            start: self.start,
            phase: self.phase,
            lambda: self.lambda,
        }
    }

    /// Cellwise sum of two states of the same kind and phase.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.phase != other.phase || self.is_periodic() != other.is_periodic() {
            return Err(Error::InvalidState("cannot add states of different kind or phase".into()));
        }
        match (&self.extent, &other.extent) {
            (Extent::Periodic, Extent::Periodic) => {
                if self.len() != other.len() {
                    return Err(Error::InvalidState("periodic states of different sizes".into()));
                }
                let values = (0..self.len() as i64)
                    .map(|i| self.cell_value(self.start + i) + other.cell_value(self.start + i))
                    .collect();
                let mut out = GridState::periodic(values, self.lambda)?;
                out.start = self.start;
                out.phase = self.phase;
                Ok(out)
            }
            (Extent::Infinite { left: l1, right: r1 }, Extent::Infinite { left: l2, right: r2 }) => {
                let lo = self.start.min(other.start);
                let hi = self.end().max(other.end());
                let values = (lo..=hi).map(|j| self.cell_value(j) + other.cell_value(j)).collect();
                let out = GridState::infinite(
                    lo,
                    values,
                    l1.step.clone() + l2.step.clone(),
                    r1.step.clone() + r2.step.clone(),
                    self.lambda,
                )?;
                Ok(out.with_phase(self.phase).trimmed())
            }
            _ => unreachable!(),
        }
    }

    /// Same cells in the other arithmetic mode (through binary64 or exactly
    /// from a double).
    pub fn convert<T: Scalar>(&self) -> Result<GridState<T>> {
        // within one arithmetic the exact literal round-trips losslessly
        let same = S::ARITHMETIC == T::ARITHMETIC;
        let conv = |v: &S| {
            if same {
                return T::parse_literal(&v.exact_string());
            }
            T::from_f64(v.to_f64()).ok_or_else(|| Error::InvalidState(format!("non-finite value {v}")))
        };
        let extent = match &self.extent {
            Extent::Periodic => Extent::Periodic,
            Extent::Infinite { left, right } => Extent::Infinite {
                left: Tail { anchor: conv(&left.anchor)?, step: conv(&left.step)? },
                right: Tail { anchor: conv(&right.anchor)?, step: conv(&right.step)? },
            },
        };
        Ok(GridState {
            extent,
            values: self.values.iter().map(conv).collect::<Result<_>>()?,
            start: self.start,
            phase: self.phase,
            lambda: self.lambda,
        })
    }
}

impl<S: Scalar> PartialEq for GridState<S> {
    /// Equality of the represented sequences, independent of window padding.
    fn eq(&self, other: &Self) -> bool {
        if self.phase != other.phase || self.lambda != other.lambda {
            return false;
        }
        match (&self.extent, &other.extent) {
            (Extent::Periodic, Extent::Periodic) => {
                self.len() == other.len()
                    && (0..self.len() as i64).all(|i| self.cell_value(i) == other.cell_value(i))
            }
            (Extent::Infinite { left: l1, right: r1 }, Extent::Infinite { left: l2, right: r2 }) => {
                if l1.step != l2.step || r1.step != r2.step {
                    return false;
                }
                let lo = self.start.min(other.start) - 1;
                let hi = self.end().max(other.end()) + 1;
                (lo..=hi).all(|j| self.cell_value(j) == other.cell_value(j))
            }
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TotalVariation<S> {
    Finite(S),
    Infinite,
}
