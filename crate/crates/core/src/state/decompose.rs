use crate::error::{Error, Result};
use crate::scalar::{larger, smaller, Scalar};

use super::{Extent, GridState};

/// `u = v + w + offset` with `v` nondecreasing and `w` nonincreasing, both
/// vanishing at the anchor cell.
#[derive(Clone, Debug)]
pub struct Decomposition<S> {
    pub v: GridState<S>,
    pub w: GridState<S>,
    pub anchor: i64,
    pub offset: S,
}

impl<S: Scalar> Decomposition<S> {
    /// `v + w + offset`, which reproduces the decomposed state.
    pub fn recombine(&self) -> Result<GridState<S>> {
        let one = S::one();
        Ok(self.v.add(&self.w)?.affine(&one, &self.offset))
    }
}

/// Splits an infinite state into its increasing and decreasing parts by
/// accumulating positive and nonpositive jumps separately from the first
/// window cell.
pub fn monotone_decomposition<S: Scalar>(state: &GridState<S>) -> Result<Decomposition<S>> {
    let (left, right) = match state.extent() {
        Extent::Infinite { left, right } => (left, right),
        Extent::Periodic => {
            return Err(Error::InvalidState(
                "monotone decomposition needs an infinite state: a periodic state with a nonzero \
                 jump has jumps of both signs and cannot be split into periodic monotone parts"
                    .into(),
            ))
        }
    };
    let zero = S::zero();
    let mut v = Vec::with_capacity(state.len());
    let mut w = Vec::with_capacity(state.len());
    v.push(zero.clone());
    w.push(zero.clone());
    for s in state.jumps().window() {
        let (lv, lw) = (v[v.len() - 1].clone(), w[w.len() - 1].clone());
        if s.is_positive() {
            v.push(lv + s.clone());
            w.push(lw);
        } else {
            v.push(lv);
            w.push(lw + s.clone());
        }
    }
    // A left step `t` means the jump across each tail interface is `-t`.
    let lam = state.lambda();
    let vs = GridState::infinite(
        state.start(),
        v,
        smaller(left.step.clone(), zero.clone()),
        larger(right.step.clone(), zero.clone()),
        lam,
    )?
    .with_phase(state.phase());
    let ws = GridState::infinite(
        state.start(),
        w,
        larger(left.step.clone(), zero.clone()),
        smaller(right.step.clone(), zero),
        lam,
    )?
    .with_phase(state.phase());
    Ok(Decomposition { v: vs, w: ws, anchor: state.start(), offset: state.values()[0].clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_rational, Cfl, Rational};

    fn qs(xs: &[&str]) -> Vec<Rational> {
        xs.iter().map(|s| parse_rational(s).unwrap()).collect()
    }

    #[test]
    fn splits_mixed_window() {
        let u = GridState::with_constant_tails(0, qs(&["0", "2", "1", "3"]), Cfl::half()).unwrap();
        let d = monotone_decomposition(&u).unwrap();
        assert_eq!(d.v.values(), qs(&["0", "2", "2", "4"]).as_slice());
        assert_eq!(d.w.values(), qs(&["0", "0", "-1", "-1"]).as_slice());
        assert!(d.v.is_nondecreasing());
        assert_eq!(d.recombine().unwrap(), u);
    }

    #[test]
    fn nondecreasing_input_has_no_w() {
        let u = GridState::infinite(0, qs(&["1", "3/2", "3"]), qs(&["0"])[0].clone(), qs(&["1"])[0].clone(), Cfl::half())
            .unwrap();
        let d = monotone_decomposition(&u).unwrap();
        assert_eq!(d.v, u.affine(&qs(&["1"])[0], &qs(&["-1"])[0]));
        assert!(d.w.values().iter().all(|x| *x == qs(&["0"])[0]));
        assert_eq!(d.recombine().unwrap(), u);
    }

    #[test]
    fn nonincreasing_input_has_no_v() {
        let u = GridState::with_constant_tails(3, qs(&["2", "1", "-1"]), Cfl::half()).unwrap();
        let d = monotone_decomposition(&u).unwrap();
        assert!(d.v.values().iter().all(|x| *x == qs(&["0"])[0]));
        assert_eq!(d.w.values(), qs(&["0", "-1", "-3"]).as_slice());
    }

    #[test]
    fn periodic_is_refused() {
        let u = GridState::periodic(qs(&["0", "1"]), Cfl::half()).unwrap();
        assert!(monotone_decomposition(&u).is_err());
    }
}
