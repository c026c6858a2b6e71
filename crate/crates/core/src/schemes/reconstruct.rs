use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::state::GridState;

/// Which interface the discontinuity distance `d` is measured from.
///
/// Both conventions describe the same two-valued step: `u_{j-1}` on the
/// left part of the cell, `u_{j+1}` on the right part. Only the reported
/// `d` differs (`d_left = 1 - d_right`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    FromRight,
    FromLeft,
}

/// Two-valued reconstruction of one cell, or a constant one.
#[derive(Clone, Debug, PartialEq)]
pub struct CellProfile<S> {
    pub j: i64,
    pub left_value: S,
    pub right_value: S,
    /// Distance from the reference interface, or `-1` for a constant cell.
    pub d: S,
    pub convention: Convention,
}

impl<S: Scalar> CellProfile<S> {
    pub fn is_constant(&self) -> bool {
        self.d == -S::one()
    }

    /// Offset of the discontinuity from the left edge of the cell.
    pub fn split(&self) -> Option<S> {
        if self.is_constant() {
            return None;
        }
        Some(match self.convention {
            Convention::FromLeft => self.d.clone(),
            Convention::FromRight => S::one() - self.d.clone(),
        })
    }

    /// Integral over the offsets `[p, q]` of the cell, `0 <= p <= q <= 1`.
    pub fn integrate_offsets(&self, p: &S, q: &S) -> S {
        match self.split() {
            None => self.left_value.clone() * (q.clone() - p.clone()),
            Some(s) => {
                let zero = S::zero();
                let left_len = clamp_len(p, q, &zero, &s);
                let right_len = clamp_len(p, q, &s, &S::one());
                self.left_value.clone() * left_len + self.right_value.clone() * right_len
            }
        }
    }

    /// Mass identity residual: the cell integral minus the cell average.
    pub fn mass(&self) -> S {
        self.integrate_offsets(&S::zero(), &S::one())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "j": self.j,
            "left": self.left_value.to_json(),
            "right": self.right_value.to_json(),
            "d": self.d.to_json(),
            "convention": self.convention,
        })
    }
}

/// Length of `[p, q] ∩ [lo, hi]`.
fn clamp_len<S: Scalar>(p: &S, q: &S, lo: &S, hi: &S) -> S {
    let a = if p > lo { p.clone() } else { lo.clone() };
    let b = if q < hi { q.clone() } else { hi.clone() };
    if b > a {
        b - a
    } else {
        S::zero()
    }
}

/// Reconstruction of cell `j` from the stencil `(u_{j-1}, u_j, u_{j+1})`.
pub fn reconstruct_cell<S: Scalar>(prev: &S, cur: &S, next: &S, j: i64, convention: Convention) -> CellProfile<S> {
    let constant = || CellProfile {
        j,
        left_value: cur.clone(),
        right_value: cur.clone(),
        d: -S::one(),
        convention,
    };
    let denom = next.clone() - prev.clone();
    if denom.is_zero() {
        return constant();
    }
    let num = match convention {
        Convention::FromRight => cur.clone() - prev.clone(),
        Convention::FromLeft => next.clone() - cur.clone(),
    };
    let d = num / denom;
    if !d.is_positive() || d >= S::one() {
        return constant();
    }
    CellProfile { j, left_value: prev.clone(), right_value: next.clone(), d, convention }
}

/// Reconstruction of every cell of a state, evaluated on demand so that
/// tails extend it indefinitely.
#[derive(Clone, Debug)]
pub struct ReconstructionProfile<'a, S> {
    state: &'a GridState<S>,
    convention: Convention,
}

impl<'a, S: Scalar> ReconstructionProfile<'a, S> {
    pub fn new(state: &'a GridState<S>, convention: Convention) -> Self {
        ReconstructionProfile { state, convention }
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn state(&self) -> &GridState<S> {
        self.state
    }

    pub fn cell(&self, j: i64) -> CellProfile<S> {
        let s = self.state;
        reconstruct_cell(&s.cell_value(j - 1), &s.cell_value(j), &s.cell_value(j + 1), j, self.convention)
    }

    /// Cells of the stored window plus one on each side.
    pub fn window_cells(&self) -> Vec<CellProfile<S>> {
        let (lo, hi) = if self.state.is_periodic() {
            (self.state.start(), self.state.end())
        } else {
            (self.state.start() - 1, self.state.end() + 1)
        };
        (lo..=hi).map(|j| self.cell(j)).collect()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.window_cells().iter().map(CellProfile::to_json).collect())
    }

    /// Exact integral of the reconstructed function over `[a, b]`, in the
    /// coordinates where cell `j` is `[j - 1/2 - shift, j + 1/2 - shift]`.
    pub fn integrate(&self, a: &S, b: &S) -> Result<S> {
        if a > b {
            return Err(Error::Precondition(format!("integration bounds out of order: {a} > {b}")));
        }
        let half = S::one() / S::from_int(2);
        let shift = self.state.center_shift();
        let left_edge = |j: i64| S::from_int(j) - half.clone() - shift.clone();
        let first = (a.clone() + half.clone() + shift.clone()).floor_int();
        let last = (b.clone() + half.clone() + shift.clone()).floor_int();
        let mut total = S::zero();
        for j in first..=last {
            let e = left_edge(j);
            let p = larger_of(a.clone() - e.clone(), S::zero());
            let q = smaller_of(b.clone() - e, S::one());
            if q > p {
                total = total + self.cell(j).integrate_offsets(&p, &q);
            }
        }
        Ok(total)
    }
}

fn larger_of<S: Scalar>(a: S, b: S) -> S {
    if a > b {
        a
    } else {
        b
    }
}

fn smaller_of<S: Scalar>(a: S, b: S) -> S {
    if a < b {
        a
    } else {
        b
    }
}

pub fn reconstruct<S: Scalar>(state: &GridState<S>, convention: Convention) -> ReconstructionProfile<'_, S> {
    ReconstructionProfile::new(state, convention)
}

/// Integrals of a monotone stencil `(a, b, c)`'s reconstruction over the
/// left and right halves of the middle cell.
pub fn half_cell_integrals<S: Scalar>(a: &S, b: &S, c: &S) -> Result<(S, S)> {
    if a > b || b > c {
        return Err(Error::Precondition(format!("stencil ({a}, {b}, {c}) is not nondecreasing")));
    }
    let two = S::from_int(2);
    if b.clone() - a.clone() >= c.clone() - b.clone() {
        Ok((b.clone() - c.clone() / two.clone(), c.clone() / two))
    } else {
        Ok((a.clone() / two.clone(), b.clone() - a.clone() / two))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_rational, Cfl, Rational};

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn cell(a: &str, b: &str, c: &str, conv: Convention) -> CellProfile<Rational> {
        reconstruct_cell(&q(a), &q(b), &q(c), 0, conv)
    }

    #[test]
    fn from_right_distance() {
        assert_eq!(cell("0", "1/4", "1", Convention::FromRight).d, q("1/4"));
        assert_eq!(cell("0", "1/4", "1", Convention::FromLeft).d, q("3/4"));
    }

    #[test]
    fn degenerate_stencils_are_constant() {
        let c = cell("2", "2", "2", Convention::FromRight);
        assert!(c.is_constant());
        assert_eq!((c.left_value.clone(), c.right_value.clone()), (q("2"), q("2")));
        let v = cell("1", "0", "1", Convention::FromRight);
        assert_eq!(v.d, q("-1"));
        assert_eq!(v.left_value, q("0"));
        // d exactly 0 or 1
        assert!(cell("0", "0", "1", Convention::FromRight).is_constant());
        assert!(cell("0", "1", "1", Convention::FromLeft).is_constant());
        // outside (0, 1)
        assert!(cell("0", "2", "1", Convention::FromRight).is_constant());
    }

    #[test]
    fn midpoint_either_way() {
        assert_eq!(cell("0", "1/2", "1", Convention::FromRight).d, q("1/2"));
        assert_eq!(cell("0", "1/2", "1", Convention::FromLeft).d, q("1/2"));
    }

    #[test]
    fn mass_identity() {
        for (a, b, c) in [("0", "1/4", "1"), ("3", "1", "-2"), ("1", "7/5", "2"), ("5", "5", "6")] {
            for conv in [Convention::FromLeft, Convention::FromRight] {
                assert_eq!(cell(a, b, c, conv).mass(), q(b));
            }
        }
    }

    #[test]
    fn half_cells_through_the_profile() {
        let s = GridState::with_constant_tails(-1, vec![q("0"), q("2/3"), q("1")], Cfl::half()).unwrap();
        let p = reconstruct(&s, Convention::FromRight);
        assert_eq!(p.cell(0).d, q("2/3"));
        assert_eq!(p.integrate(&q("-1/2"), &q("0")).unwrap(), q("1/6"));
        assert_eq!(p.integrate(&q("0"), &q("1/2")).unwrap(), q("1/2"));
        assert_eq!(p.integrate(&q("-1/2"), &q("1/2")).unwrap(), q("2/3"));
        // constant stretch across several cells
        assert_eq!(p.integrate(&q("3"), &q("11/2")).unwrap(), q("5/2"));
    }

    #[test]
    fn half_cell_formulas() {
        assert_eq!(half_cell_integrals(&q("0"), &q("2/3"), &q("1")).unwrap(), (q("1/6"), q("1/2")));
        assert_eq!(half_cell_integrals(&q("0"), &q("1/3"), &q("1")).unwrap(), (q("0"), q("1/3")));
        assert_eq!(half_cell_integrals(&q("3"), &q("3"), &q("3")).unwrap(), (q("3/2"), q("3/2")));
        assert!(half_cell_integrals(&q("1"), &q("0"), &q("2")).is_err());
    }

    #[test]
    fn dump_shape() {
        let s = GridState::with_constant_tails(0, vec![q("0"), q("1/4"), q("1")], Cfl::half()).unwrap();
        let v = reconstruct(&s, Convention::FromRight).to_json();
        let cells = v.as_array().unwrap();
        assert_eq!(cells.len(), 5);
        assert_eq!(cells[2]["d"], json!("1/4"));
        assert_eq!(cells[2]["convention"], json!("from-right"));
        assert_eq!(cells[0]["d"], json!("-1/1"));
    }
}
