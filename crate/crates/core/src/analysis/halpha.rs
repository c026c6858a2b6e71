use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::state::{GridState, JumpSequence};

/// A monotone block of `m` positive jumps between two constant tails.
#[derive(Clone, Debug, PartialEq)]
pub struct HAlphaReport<S> {
    /// Last cell at the left tail value; the jumps sit at raw interfaces
    /// `j0 .. j0 + m - 1`.
    pub j0: i64,
    pub m: usize,
    pub jumps: Vec<S>,
    /// Smallest jump strictly between the first and the last one.
    pub min_inner_jump: Option<S>,
    pub alpha: S,
    pub alpha_satisfied: bool,
}

impl<S: Scalar> HAlphaReport<S> {
    pub fn first_jump(&self) -> &S {
        &self.jumps[0]
    }

    pub fn last_jump(&self) -> &S {
        &self.jumps[self.m - 1]
    }
}

/// Matches the jump pattern `0.., s_1, ..., s_M, 0..` with every `s_i > 0`.
///
/// `alpha` is compared with the jumps as they are, so for tails other than
/// `0` and `1` it is measured in the units of the state.
pub fn classify_h_alpha<S: Scalar>(state: &GridState<S>, alpha: &S) -> Option<HAlphaReport<S>> {
    let (left, right) = state.tails()?;
    if !left.is_constant() || !right.is_constant() {
        return None;
    }
    let jumps = state.jumps();
    let window = jumps.window();
    let first = window.iter().position(|s| !s.is_zero())?;
    let last = window.iter().rposition(|s| !s.is_zero())?;
    let block = &window[first..=last];
    if block.iter().any(|s| !s.is_positive()) {
        return None;
    }
    let m = block.len();
    let min_inner_jump = if m >= 3 {
        block[1..m - 1].iter().cloned().reduce(|a, b| if b < a { b } else { a })
    } else {
        None
    };
    let alpha_satisfied = min_inner_jump.as_ref().is_none_or(|mi| mi > alpha);
    Some(HAlphaReport {
        j0: jumps.first_interface() + first as i64,
        m,
        jumps: block.to_vec(),
        min_inner_jump,
        alpha: alpha.clone(),
        alpha_satisfied,
    })
}

/// Number of positive jumps of an `H^M` configuration.
pub fn count_positive_jumps<S: Scalar>(state: &GridState<S>) -> Result<usize> {
    classify_h_alpha(state, &S::zero())
        .map(|r| r.m)
        .ok_or_else(|| Error::Precondition("state is not a monotone block of positive jumps".into()))
}

/// Shape of the two ends of the jump block. `L` marks the larger jump of
/// each extreme pair, `S` the smaller one; ties count the extreme jump as
/// small on both sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtremityClass {
    #[serde(rename = "LS/SL")]
    LsSl,
    #[serde(rename = "SL/LS")]
    SlLs,
    #[serde(rename = "SL/SL")]
    SlSl,
    #[serde(rename = "LS/LS")]
    LsLs,
    #[serde(rename = "not-applicable")]
    NotApplicable,
}

impl ExtremityClass {
    pub fn from_flags(first_large: bool, last_large: bool) -> Self {
        match (first_large, last_large) {
            (true, true) => ExtremityClass::LsSl,
            (false, false) => ExtremityClass::SlLs,
            (false, true) => ExtremityClass::SlSl,
            (true, false) => ExtremityClass::LsLs,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ExtremityClass::LsSl => "LS/SL",
            ExtremityClass::SlLs => "SL/LS",
            ExtremityClass::SlSl => "SL/SL",
            ExtremityClass::LsLs => "LS/LS",
            ExtremityClass::NotApplicable => "not-applicable",
        }
    }
}

impl fmt::Display for ExtremityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn classify_extremities<S: Scalar>(state: &GridState<S>) -> ExtremityClass {
    match classify_h_alpha(state, &S::zero()) {
        Some(r) => extremities_of(&r),
        None => ExtremityClass::NotApplicable,
    }
}

pub fn extremities_of<S: Scalar>(r: &HAlphaReport<S>) -> ExtremityClass {
    if r.m < 3 {
        return ExtremityClass::NotApplicable;
    }
    let j = &r.jumps;
    ExtremityClass::from_flags(j[0] > j[1], j[r.m - 1] > j[r.m - 2])
}

/// Whether one step of the half-cell scheme may take a configuration of
/// class `from` with `m_from` jumps to class `to` with `m_to` jumps.
pub fn automaton_allows(from: ExtremityClass, m_from: usize, to: ExtremityClass, m_to: usize) -> bool {
    use ExtremityClass::*;
    let na_or = |m: usize, allowed: &[ExtremityClass]| {
        if m < 3 {
            to == NotApplicable
        } else {
            allowed.contains(&to)
        }
    };
    match from {
        NotApplicable => true,
        LsSl => m_to == m_from + 1 && na_or(m_to, &[SlLs]),
        SlLs => m_to + 1 == m_from && na_or(m_to, &[LsSl, SlLs, SlSl, LsLs]),
        SlSl => m_to == m_from && na_or(m_to, &[LsLs, SlLs]),
        LsLs => m_to == m_from && na_or(m_to, &[SlSl, SlLs]),
    }
}

/// Smallest `j` such that every cell left of `j` holds the left tail value
/// and every cell right of it the right tail value, with left < right.
pub fn is_discrete_heaviside<S: Scalar>(state: &GridState<S>) -> Option<i64> {
    let (left, right) = state.tails()?;
    if !left.is_constant() || !right.is_constant() || left.anchor >= right.anchor {
        return None;
    }
    let (lo, hi) = (&left.anchor, &right.anchor);
    let a = (state.start()..=state.end()).find(|&j| state.cell_value(j) != *lo)?;
    let rest_high = |from: i64| (from..=state.end()).all(|j| state.cell_value(j) == *hi);
    if state.cell_value(a) == *hi && rest_high(a) {
        Some(a - 1)
    } else if rest_high(a + 1) {
        Some(a)
    } else {
        None
    }
}

/// Indices `p` with `trajectory[n + 2] == trajectory[n]` for all
/// `p <= n <= trajectory.len() - 3`, returning the smallest.
pub fn detect_two_periodicity<S: Scalar>(trajectory: &[GridState<S>]) -> Option<usize> {
    let mut det = TwoPeriodDetector::new();
    for s in trajectory {
        det.push(s.clone());
    }
    det.onset()
}

/// Streaming form of [`detect_two_periodicity`]: feed states one at a time
/// and read the onset of the current 2-periodic stretch.
#[derive(Clone, Debug)]
pub struct TwoPeriodDetector<S> {
    older: Option<GridState<S>>,
    newer: Option<GridState<S>>,
    count: usize,
    onset: Option<usize>,
}

impl<S: Scalar> Default for TwoPeriodDetector<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> TwoPeriodDetector<S> {
    pub fn new() -> Self {
        TwoPeriodDetector { older: None, newer: None, count: 0, onset: None }
    }

    pub fn push(&mut self, state: GridState<S>) {
        let n = self.count;
        if let Some(old) = &self.older {
            if states_match(old, &state) {
                self.onset.get_or_insert(n - 2);
            } else {
                self.onset = None;
            }
        }
        self.older = self.newer.take();
        self.newer = Some(state);
        self.count += 1;
    }

    /// `None` until two states two steps apart agree, and whenever the
    /// latest comparison failed.
    pub fn onset(&self) -> Option<usize> {
        self.onset
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }
}

/// Exact equality for rationals, componentwise `1e-10` for binary64.
pub fn states_match<S: Scalar>(a: &GridState<S>, b: &GridState<S>) -> bool {
    match S::ARITHMETIC {
        crate::scalar::Arithmetic::Rational => a == b,
        crate::scalar::Arithmetic::Binary64 => {
            if a.phase() != b.phase() || a.is_periodic() != b.is_periodic() || a.len() != b.len() && a.is_periodic() {
                return false;
            }
            let close = |x: S, y: S| (x.to_f64() - y.to_f64()).abs() <= 1e-10;
            if let (Some((la, ra)), Some((lb, rb))) = (a.tails(), b.tails()) {
                if !close(la.step.clone(), lb.step.clone()) || !close(ra.step.clone(), rb.step.clone()) {
                    return false;
                }
            }
            let lo = a.start().min(b.start()) - 1;
            let hi = a.end().max(b.end()) + 1;
            (lo..=hi).all(|j| close(a.cell_value(j), b.cell_value(j)))
        }
    }
}

/// Jumps of `state` as a sequence, for callers that only need the block.
pub fn jump_block<S: Scalar>(jumps: &JumpSequence<S>) -> Vec<(i64, S)> {
    (jumps.first_interface()..=jumps.last_interface())
        .map(|k| (k, jumps.at(k)))
        .filter(|(_, s)| !s.is_zero())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_rational, Cfl, Rational};

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn from_jumps(js: &[&str]) -> GridState<Rational> {
        let mut vals = vec![q("0")];
        for s in js {
            let next = vals[vals.len() - 1].clone() + q(s);
            vals.push(next);
        }
        GridState::with_constant_tails(0, vals, Cfl::half()).unwrap()
    }

    #[test]
    fn heaviside_is_one_jump() {
        let r = classify_h_alpha(&from_jumps(&["1"]), &q("1/2")).unwrap();
        assert_eq!((r.j0, r.m), (0, 1));
        assert!(r.alpha_satisfied);
        assert_eq!(r.min_inner_jump, None);
    }

    #[test]
    fn three_jumps_with_alpha() {
        let s = from_jumps(&["0.5", "0.3", "0.7"]);
        let r = classify_h_alpha(&s, &q("0.2")).unwrap();
        assert_eq!(r.m, 3);
        assert_eq!(r.min_inner_jump, Some(q("0.3")));
        assert!(r.alpha_satisfied);
        assert!(!classify_h_alpha(&s, &q("0.3")).unwrap().alpha_satisfied);
        assert_eq!(count_positive_jumps(&s).unwrap(), 3);
    }

    #[test]
    fn broken_patterns() {
        assert!(classify_h_alpha(&from_jumps(&["1/2", "0", "1/2"]), &q("0")).is_none());
        assert!(classify_h_alpha(&from_jumps(&["1", "-1/2", "1/2"]), &q("0")).is_none());
        assert!(classify_h_alpha(&GridState::constant(q("1"), Cfl::half()), &q("0")).is_none());
        assert!(count_positive_jumps(&from_jumps(&["1", "-1"])).is_err());
    }

    #[test]
    fn extremity_classes() {
        assert_eq!(classify_extremities(&from_jumps(&["2", "1", "1", "2"])), ExtremityClass::LsSl);
        assert_eq!(classify_extremities(&from_jumps(&["1", "2", "2", "1"])), ExtremityClass::SlLs);
        assert_eq!(classify_extremities(&from_jumps(&["1", "2", "3"])), ExtremityClass::SlSl);
        assert_eq!(classify_extremities(&from_jumps(&["3", "2", "1"])), ExtremityClass::LsLs);
        assert_eq!(classify_extremities(&from_jumps(&["1", "2"])), ExtremityClass::NotApplicable);
        // ties make the extreme jump small
        assert_eq!(classify_extremities(&from_jumps(&["1", "1", "1"])), ExtremityClass::SlLs);
    }

    #[test]
    fn automaton_edges() {
        use ExtremityClass::*;
        assert!(automaton_allows(LsSl, 4, SlLs, 5));
        assert!(!automaton_allows(LsSl, 4, SlLs, 4));
        assert!(automaton_allows(SlLs, 5, LsSl, 4));
        assert!(automaton_allows(SlLs, 3, NotApplicable, 2));
        assert!(automaton_allows(SlSl, 4, LsLs, 4));
        assert!(!automaton_allows(SlSl, 4, SlSl, 4));
        assert!(automaton_allows(LsLs, 4, SlSl, 4));
        assert!(!automaton_allows(LsLs, 4, LsSl, 4));
    }

    #[test]
    fn heaviside_detection() {
        assert_eq!(is_discrete_heaviside(&from_jumps(&["1"])), Some(0));
        let mid = GridState::with_constant_tails(3, vec![q("0"), q("1/2"), q("1")], Cfl::half()).unwrap();
        assert_eq!(is_discrete_heaviside(&mid), Some(4));
        assert_eq!(is_discrete_heaviside(&from_jumps(&["1/3", "1/3", "1/3"])), None);
        let down = GridState::with_constant_tails(0, vec![q("1"), q("0")], Cfl::half()).unwrap();
        assert_eq!(is_discrete_heaviside(&down), None);
    }

    #[test]
    fn two_periodicity() {
        let c = GridState::constant(q("1"), Cfl::half());
        assert_eq!(detect_two_periodicity(&vec![c.clone(); 5]), Some(0));
        let a = from_jumps(&["1/2", "1/2"]);
        let b = from_jumps(&["1"]);
        let traj = vec![c.clone(), a.clone(), b.clone(), a.clone(), b.clone(), a.clone()];
        assert_eq!(detect_two_periodicity(&traj), Some(1));
        assert_eq!(detect_two_periodicity(&[a.clone(), b.clone(), c]), None);
        assert_eq!(detect_two_periodicity(&[a, b]), None);
    }
}
