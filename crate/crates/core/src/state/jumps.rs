use crate::scalar::{Cfl, Scalar};

use super::{Extent, GridState, Phase};

/// Consecutive differences of a state. The jump at raw interface `k` is
/// `u(k+1) - u(k)`; it sits between cells `k` and `k+1`.
#[derive(Clone, Debug, PartialEq)]
pub struct JumpSequence<S> {
    first: i64,
    values: Vec<S>,
    /// Constant jumps beyond the window, `None` for periodic states.
    tails: Option<(S, S)>,
    phase: Phase,
    lambda: Cfl,
}

impl<S: Scalar> JumpSequence<S> {
    pub fn of(state: &GridState<S>) -> Self {
        let first = state.start();
        let (values, tails) = match state.extent() {
            Extent::Periodic => {
                let m = state.len() as i64;
                let v = (0..m)
                    .map(|i| state.cell_value(first + i + 1) - state.cell_value(first + i))
                    .collect();
                (v, None)
            }
            Extent::Infinite { left, right } => {
                let v = state.values().windows(2).map(|w| w[1].clone() - w[0].clone()).collect();
                (v, Some((-left.step.clone(), right.step.clone())))
            }
        };
        JumpSequence { first, values, tails, phase: state.phase(), lambda: state.lambda() }
    }

    /// Raw index of the first stored interface.
    pub fn first_interface(&self) -> i64 {
        self.first
    }

    /// Raw index of the last stored interface (for infinite states the
    /// window may hold no interface at all, in which case this is
    /// `first_interface() - 1`).
    pub fn last_interface(&self) -> i64 {
        self.first + self.values.len() as i64 - 1
    }

    pub fn window(&self) -> &[S] {
        &self.values
    }

    /// Jumps carried by the left and right tails.
    pub fn tail_jumps(&self) -> Option<(&S, &S)> {
        self.tails.as_ref().map(|(l, r)| (l, r))
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn at(&self, k: i64) -> S {
        match &self.tails {
            None => {
                let m = self.values.len() as i64;
                self.values[(k - self.first).rem_euclid(m) as usize].clone()
            }
            Some((l, r)) => {
                if k < self.first {
                    l.clone()
                } else if k > self.last_interface() {
                    r.clone()
                } else {
                    self.values[(k - self.first) as usize].clone()
                }
            }
        }
    }

    /// Physical position of interface `k` in cell units: `k + 1/2` on the
    /// integer grid, `k + 1/2 - lambda` on the shifted grid. At `lambda = 1/2`
    /// the shifted interfaces land on the integers, which is how the
    /// half-integer and integer labels of the jumps alternate.
    pub fn position(&self, k: i64) -> S {
        let half = S::from_int(1) / S::from_int(2);
        let base = S::from_int(k) + half;
        match self.phase {
            Phase::Integer => base,
            Phase::ShiftedLeft => base - self.lambda.to_scalar(),
        }
    }

    /// Human-readable label of interface `k`, e.g. `S_{3/2}` or `S_{2}`.
    pub fn label(&self, k: i64) -> String {
        let twice = match self.phase {
            Phase::Integer => Some(2 * k + 1),
            Phase::ShiftedLeft if self.lambda.is_half() => Some(2 * k),
            Phase::ShiftedLeft => None,
        };
        match twice {
            Some(t) if t % 2 == 0 => format!("S_{{{}}}", t / 2),
            Some(t) => format!("S_{{{t}/2}}"),
            None => format!("S_{{{k}+1/2-{}}}", self.lambda),
        }
    }

    pub fn all_nonnegative(&self) -> bool {
        self.values.iter().all(|s| !s.is_negative())
            && self.tails.as_ref().is_none_or(|(l, r)| !l.is_negative() && !r.is_negative())
    }

    /// Rebuilds the values `u(first)..=u(last+1)` from `u(first)`.
    pub fn cumulative(&self, base: S) -> Vec<S> {
        let mut out = Vec::with_capacity(self.values.len() + 1);
        out.push(base);
        for s in &self.values {
            let next = out[out.len() - 1].clone() + s.clone();
            out.push(next);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_rational, Rational};

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn constant_state_has_zero_jumps() {
        let s = GridState::constant(q("7/3"), Cfl::half());
        let j = s.jumps();
        assert!((-5..5).all(|k| j.at(k) == q("0")));
    }

    #[test]
    fn heaviside_single_jump() {
        let s = GridState::with_constant_tails(0, vec![q("0"), q("1")], Cfl::half()).unwrap();
        let j = s.jumps();
        assert_eq!(j.at(0), q("1"));
        assert!((-6..0).chain(1..6).all(|k| j.at(k) == q("0")));
    }

    #[test]
    fn staircase_jumps_by_differencing() {
        // u_0 = 0, u_1 = 1/2, u_2 = 2, then unit steps
        let s = GridState::infinite(0, vec![q("0"), q("1/2"), q("2")], q("0"), q("1"), Cfl::half()).unwrap();
        let j = s.jumps();
        assert_eq!(j.at(0), q("1/2"));
        assert_eq!(j.label(0), "S_{1/2}");
        assert_eq!(j.at(1), q("3/2"));
        assert_eq!(j.label(1), "S_{3/2}");
        assert!((2..10).all(|k| j.at(k) == q("1")));
        assert!((-5..0).all(|k| j.at(k) == q("0")));
    }

    #[test]
    fn window_sum_is_edge_difference() {
        let s = GridState::with_constant_tails(-2, vec![q("1"), q("3"), q("-2"), q("5/2")], Cfl::half()).unwrap();
        let total = s.jumps().window().iter().cloned().fold(q("0"), |a, b| a + b);
        assert_eq!(total, q("5/2") - q("1"));
        let back = s.jumps().cumulative(q("1"));
        assert_eq!(back, s.values());
    }

    #[test]
    fn shifted_labels_at_half() {
        let s = GridState::with_constant_tails(0, vec![q("0"), q("1")], Cfl::half())
            .unwrap()
            .with_phase(Phase::ShiftedLeft);
        let j = s.jumps();
        assert_eq!(j.position(0), q("0"));
        assert_eq!(j.label(1), "S_{1}");
    }

    #[test]
    fn periodic_jumps_wrap() {
        let s = GridState::periodic(vec![q("0"), q("1"), q("3")], Cfl::half()).unwrap();
        let j = s.jumps();
        assert_eq!(j.at(2), q("-3"));
        assert_eq!(j.at(-1), q("-3"));
        assert!(!j.all_nonnegative());
    }
}
