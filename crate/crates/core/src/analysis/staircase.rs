//! Half-infinite staircases: a constant left tail, then two free jumps
//! `S_{1/2} >= 0` and `S_{3/2} >= 1`, then unit jumps forever.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::state::{GridState, Phase};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StaircaseCase {
    /// `S_{1/2} >= S_{3/2}`: the first step loses height.
    #[serde(rename = "i")]
    I,
    /// `S_{1/2} <= S_{3/2}` (strict, since ties go to case i).
    #[serde(rename = "ii")]
    Ii,
}

impl StaircaseCase {
    pub fn as_str(self) -> &'static str {
        match self {
            StaircaseCase::I => "i",
            StaircaseCase::Ii => "ii",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StaircaseReport<S> {
    pub satisfies_hprime: bool,
    /// Raw interface holding the `S_{1/2}` analogue.
    pub anchor: i64,
    pub s_half: S,
    pub s_three_half: S,
    pub case: Option<StaircaseCase>,
    /// `S_{1/2} + S_{3/2}` at the anchor, whichever the phase.
    pub front_sum: S,
    pub reason: Option<String>,
}

fn failed<S: Scalar>(anchor: i64, s_half: S, s_three_half: S, reason: String) -> StaircaseReport<S> {
    StaircaseReport {
        satisfies_hprime: false,
        anchor,
        front_sum: s_half.clone() + s_three_half.clone(),
        s_half,
        s_three_half,
        case: None,
        reason: Some(reason),
    }
}

/// Checks the staircase hypothesis with `S_{1/2}` at raw interface `anchor`.
pub fn check_hprime_at<S: Scalar>(state: &GridState<S>, anchor: i64) -> StaircaseReport<S> {
    let jumps = state.jumps();
    let (a, b) = (jumps.at(anchor), jumps.at(anchor + 1));
    let Some((left, right)) = state.tails() else {
        return failed(anchor, a, b, "periodic state".into());
    };
    if !left.is_constant() {
        return failed(anchor, a, b, "left tail is not constant".into());
    }
    if right.step != S::one() {
        return failed(anchor, a, b, format!("right tail step is {}, not 1", right.step));
    }
    let lo = jumps.first_interface();
    if let Some(k) = (lo..anchor).find(|&k| !jumps.at(k).is_zero()) {
        return failed(anchor, a, b, format!("nonzero jump left of the staircase at interface {k}"));
    }
    if let Some(k) = (anchor + 2..=jumps.last_interface()).find(|&k| jumps.at(k) != S::one()) {
        return failed(anchor, a, b, format!("jump {} at interface {k} is not a unit step", jumps.at(k)));
    }
    if b < S::one() {
        return failed(anchor, a, b, "second jump is below 1".into());
    }
    if a.is_negative() {
        return failed(anchor, a, b, "first jump is negative".into());
    }
    let case = if a >= b { StaircaseCase::I } else { StaircaseCase::Ii };
    StaircaseReport {
        satisfies_hprime: true,
        anchor,
        front_sum: a.clone() + b.clone(),
        s_half: a,
        s_three_half: b,
        case: Some(case),
        reason: None,
    }
}

/// Checks the staircase hypothesis, placing `S_{1/2}` on the first nonzero
/// jump. Whenever some placement works, this one does.
pub fn check_hprime<S: Scalar>(state: &GridState<S>) -> StaircaseReport<S> {
    let jumps = state.jumps();
    let anchor = jumps
        .window()
        .iter()
        .position(|s| !s.is_zero())
        .map_or(jumps.last_interface() + 1, |i| jumps.first_interface() + i as i64);
    check_hprime_at(state, anchor)
}

/// Jumps expected after one half-cell step, at raw interfaces of the new
/// state.
#[derive(Clone, Debug, PartialEq)]
pub struct StaircasePrediction<S> {
    pub case: StaircaseCase,
    pub anchor: i64,
    /// `(interface, jump)` pairs; everything left of them is zero and
    /// everything right of them is one.
    pub jumps: Vec<(i64, S)>,
    pub front_sum: S,
}

/// Where the `S_{1/2}` analogue lands after one step: one interface to the
/// right in case ii, and one to the left whenever the step goes from the
/// shifted grid back to the integer grid.
pub fn next_anchor(anchor: i64, case: StaircaseCase, phase: Phase) -> i64 {
    let case_shift = match case {
        StaircaseCase::I => 0,
        StaircaseCase::Ii => 1,
    };
    let phase_shift = match phase {
        Phase::Integer => 0,
        Phase::ShiftedLeft => 1,
    };
    anchor + case_shift - phase_shift
}

pub fn staircase_predicted_next<S: Scalar>(
    report: &StaircaseReport<S>,
    state: &GridState<S>,
) -> Result<StaircasePrediction<S>> {
    let case = match (report.satisfies_hprime, report.case) {
        (true, Some(c)) => c,
        _ => return Err(Error::Precondition("state does not satisfy the staircase hypothesis".into())),
    };
    let (a, b) = (report.s_half.clone(), report.s_three_half.clone());
    let one = S::one();
    let two = S::from_int(2);
    let three = S::from_int(3);
    let anchor = next_anchor(report.anchor, case, state.phase());
    let (jumps, front_sum) = match case {
        StaircaseCase::I => {
            let s0 = (a.clone() - b.clone()) / two.clone();
            let s1 = (a.clone() + three * b.clone() - one) / two;
            (vec![(anchor, s0), (anchor + 1, s1)], a + b - S::from_ratio((1, 2).into()))
        }
        StaircaseCase::Ii => {
            let s1 = (three * a.clone() + b.clone() - one.clone()) / two.clone();
            let s2 = (b.clone() - a.clone()) / two + one;
            (vec![(anchor - 1, S::zero()), (anchor, s1), (anchor + 1, s2)], a + b + S::from_ratio((1, 2).into()))
        }
    };
    Ok(StaircasePrediction { case, anchor, jumps, front_sum })
}

/// Follows the `S_{1/2}` analogue along a trajectory of the half-cell
/// scheme, so that the front sum is always taken over the same pair of
/// steps as in the propagation argument.
#[derive(Clone, Debug)]
pub struct StaircaseTracker<S> {
    last: Option<(StaircaseReport<S>, Phase)>,
}

impl<S: Scalar> Default for StaircaseTracker<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> StaircaseTracker<S> {
    pub fn new() -> Self {
        StaircaseTracker { last: None }
    }

    /// Reports on the next state of the trajectory.
    pub fn observe(&mut self, state: &GridState<S>) -> StaircaseReport<S> {
        let report = match &self.last {
            None => check_hprime(state),
            Some((prev, phase)) => match prev.case {
                Some(case) => check_hprime_at(state, next_anchor(prev.anchor, case, *phase)),
                None => check_hprime(state),
            },
        };
        self.last = Some((report.clone(), state.phase()));
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_rational, Cfl, Rational};
    use crate::schemes::shifted_step;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn stair(a: &str, b: &str) -> GridState<Rational> {
        let u1 = q(a);
        let u2 = u1.clone() + q(b);
        GridState::infinite(0, vec![q("0"), u1, u2], q("0"), q("1"), Cfl::half()).unwrap()
    }

    #[test]
    fn example_case_two() {
        let r = check_hprime(&stair("1/2", "3/2"));
        assert!(r.satisfies_hprime);
        assert_eq!(r.case, Some(StaircaseCase::Ii));
        assert_eq!(r.front_sum, q("2"));
    }

    #[test]
    fn short_second_step_fails() {
        let r = check_hprime(&stair("1/2", "0.9"));
        assert!(!r.satisfies_hprime);
        assert!(r.reason.unwrap().contains("below 1"));
    }

    #[test]
    fn tie_is_case_one() {
        let r = check_hprime(&stair("1", "1"));
        assert!(r.satisfies_hprime);
        assert_eq!(r.case, Some(StaircaseCase::I));
    }

    #[test]
    fn wrong_tail_shape() {
        let flat = GridState::with_constant_tails(0, vec![q("0"), q("1")], Cfl::half()).unwrap();
        assert!(!check_hprime(&flat).satisfies_hprime);
    }

    #[test]
    fn formulas() {
        let s = stair("2", "1");
        let p = staircase_predicted_next(&check_hprime(&s), &s).unwrap();
        assert_eq!(p.jumps[0].1, q("1/2"));
        assert_eq!(p.jumps[1].1, q("2"));
        let s = stair("1/2", "3/2");
        let p = staircase_predicted_next(&check_hprime(&s), &s).unwrap();
        assert_eq!(p.jumps[1].1, q("1"));
        assert_eq!(p.front_sum, q("5/2"));
    }

    #[test]
    fn predictions_match_the_scheme() {
        for (a, b) in [("2", "1"), ("1/2", "3/2"), ("0", "5/2"), ("1", "1"), ("7/3", "4/3")] {
            let mut s = stair(a, b);
            let mut tracker = StaircaseTracker::new();
            let mut report = tracker.observe(&s);
            for _ in 0..12 {
                let pred = staircase_predicted_next(&report, &s).unwrap();
                let next = shifted_step(&s, Cfl::half()).unwrap();
                let jumps = next.jumps();
                for (k, v) in &pred.jumps {
                    assert_eq!(jumps.at(*k), *v, "({a}, {b})");
                }
                report = tracker.observe(&next);
                assert!(report.satisfies_hprime, "{:?}", report.reason);
                assert_eq!(report.front_sum, pred.front_sum);
                s = next;
            }
        }
    }
}
