//! Randomized property suites over exact rational states.
//!
//! Every generator stays inside the hypotheses of the statement it
//! exercises, so any reported violation is a genuine counterexample.

use std::fmt;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{
    automaton_allows, check_five_config_conditions, classify_h_alpha, extremities_of, five_config_state,
    five_values, is_discrete_heaviside, predicted_from_values, sandwich_holds, StaircaseCase, StaircaseTracker,
    TwoPeriodDetector,
};
use crate::error::Result;
use crate::scalar::{Cfl, Rational, Scalar};
use crate::schemes::{
    half_cell_integrals, reconstruct, shifted_step, step, Convention, SchemeKind, SchemeParams,
};
use crate::state::{monotone_decomposition, Decomposition, GridState, Phase};

use super::presets::staircase_state;

/// Outcome of one suite.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub checks: usize,
    /// Human-readable descriptions of the failed checks (at most 20 kept).
    pub violations: Vec<String>,
    pub violation_count: usize,
    /// Free-form summary line, e.g. the largest collapse time seen.
    pub note: Option<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport { name, cases: 0, checks: 0, violations: Vec::new(), violation_count: 0, note: None }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violation_count += 1;
            if self.violations.len() < 20 {
                self.violations.push(what());
            }
        }
    }

    fn fail(&mut self, what: String) {
        self.check(false, || what);
    }

    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<28} {:>6} cases {:>9} checks {:>5} violations  {}",
            self.name,
            self.cases,
            self.checks,
            self.violation_count,
            if self.passed() { "ok" } else { "FAILED" }
        )?;
        if let Some(n) = &self.note {
            write!(f, "  ({n})")?;
        }
        Ok(())
    }
}

pub const SUITES: [&str; 14] = [
    "half-cell-integrals",
    "jump-lower-bound",
    "left-extremity-small",
    "left-extremity-large",
    "halpha-closure",
    "automaton",
    "overcompressivity",
    "staircase",
    "five-config",
    "mass",
    "monotonicity",
    "decomposition",
    "maximum-principle",
    "tails",
];

/// Runs one suite with `cases` random instances. The generator of each
/// suite is a ChaCha8 stream selected by the suite, so suites are
/// independent of each other and of the order they run in.
pub fn run_suite(name: &str, seed: u64, cases: usize) -> Option<SuiteReport> {
    let idx = SUITES.iter().position(|s| *s == name)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(idx as u64);
    let r = match name {
        "half-cell-integrals" => half_cell_suite(&mut rng, cases),
        "jump-lower-bound" => middle_suite(&mut rng, cases),
        "left-extremity-small" => bord_small_suite(&mut rng, cases),
        "left-extremity-large" => bord_large_suite(&mut rng, cases),
        "halpha-closure" => closure_suite(&mut rng, cases),
        "automaton" => automaton_suite(&mut rng, cases),
        "overcompressivity" => overcompressivity_suite(&mut rng, cases, 10_000),
        "staircase" => staircase_suite(&mut rng, cases, 800),
        "five-config" => five_config_suite(&mut rng, cases, 40),
        "mass" => mass_suite(&mut rng, cases),
        "monotonicity" => monotonicity_suite(&mut rng, cases),
        "decomposition" => decomposition_suite(&mut rng, cases),
        "maximum-principle" => maximum_suite(&mut rng, cases),
        "tails" => tails_suite(&mut rng, cases),
        _ => unreachable!(),
    };
    Some(r)
}

pub fn run_all(seed: u64, cases: usize) -> Vec<SuiteReport> {
    SUITES.iter().filter_map(|s| run_suite(s, seed, cases)).collect()
}

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn qi(n: i64) -> Rational {
    <Rational as Scalar>::from_int(n)
}

fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// `n / d` with `d` uniform in `1..=max_denom` and the value in `[lo, hi]`.
pub fn lattice(rng: &mut impl Rng, lo: i64, hi: i64, max_denom: i64) -> Rational {
    let d = rng.random_range(1..=max_denom);
    ratio(rng.random_range(lo * d..=hi * d), d)
}

/// Random CFL number `p/q` with `q <= 20` and value at most `max`.
pub fn random_cfl(rng: &mut impl Rng, max: Cfl) -> Cfl {
    loop {
        let q = rng.random_range(2..=20);
        let p = rng.random_range(1..=q);
        let c = Cfl::new(p, q).expect("p <= q");
        if c <= max {
            return c;
        }
    }
}

/// An `H_alpha^M` instance: tails 0 and 1, `M` positive jumps drawn on a
/// lattice of denominator at most 64 then normalized to sum 1, and
/// `alpha` half the smallest inner jump (half the smallest jump when there
/// are no inner jumps).
#[derive(Clone, Debug)]
pub struct HAlphaCase {
    pub jumps: Vec<Rational>,
    pub alpha: Rational,
    pub state: GridState<Rational>,
}

impl HAlphaCase {
    pub fn from_jumps(jumps: Vec<Rational>, start: i64) -> Self {
        let total = jumps.iter().fold(qi(0), |a, s| a + s);
        let jumps: Vec<Rational> = jumps.into_iter().map(|s| s / total.clone()).collect();
        let m = jumps.len();
        let pool = if m >= 3 { &jumps[1..m - 1] } else { &jumps[..] };
        let alpha = pool.iter().min().expect("nonempty").clone() / qi(2);
        let mut values = vec![qi(0)];
        for s in &jumps {
            let next = values.last().expect("nonempty").clone() + s.clone();
            values.push(next);
        }
        let state = GridState::with_constant_tails(start, values, Cfl::half()).expect("valid window");
        HAlphaCase { jumps, alpha, state }
    }

    /// Raw interface of the first jump.
    pub fn j0(&self) -> i64 {
        self.state.start()
    }
}

pub fn random_halpha(rng: &mut impl Rng, min_m: usize, max_m: usize) -> HAlphaCase {
    let m = rng.random_range(min_m..=max_m);
    let jumps = (0..m)
        .map(|_| {
            let d = rng.random_range(1..=64);
            ratio(rng.random_range(1..=2 * d), d)
        })
        .collect();
    HAlphaCase::from_jumps(jumps, rng.random_range(-5..=5))
}

/// A staircase with `S_{1/2}` in `[0, 4]` and `S_{3/2}` in `[1, 4]`, both
/// multiples of 1/64.
pub fn random_staircase(rng: &mut impl Rng) -> (Rational, Rational) {
    (ratio(rng.random_range(0..=256), 64), ratio(rng.random_range(64..=256), 64))
}

/// Intermediate values of a 5-configuration near a profile
/// `(v_1, v_2, v_2, v_4)` whose ratios `v_1 / v_2` and
/// `(v_4 - v_2) / (1 - v_2)` lie in `(lambda + 1/20, 19/20)`: `u_2` and
/// `u_3` sit at `v_2 -+ delta`, with `delta` halved until conditions (a)
/// to (e) all hold.
pub fn random_five_config(rng: &mut impl Rng, lambda: Cfl) -> [Rational; 4] {
    let lam: Rational = lambda.to_scalar();
    let lo = lam + ratio(1, 20);
    let hi = ratio(19, 20);
    let t1 = ratio(rng.random_range(1..=199), 200);
    let t4 = ratio(rng.random_range(1..=199), 200);
    let v2 = ratio(rng.random_range(10..=90), 100);
    let r1 = lo.clone() + (hi.clone() - lo.clone()) * t1;
    let r4 = lo.clone() + (hi - lo) * t4;
    let v1 = r1 * v2.clone();
    let v4 = v2.clone() + r4 * (qi(1) - v2.clone());
    let mut delta = ratio(rng.random_range(1..=100), 2000);
    loop {
        let u = [v1.clone(), v2.clone() - delta.clone(), v2.clone() + delta.clone(), v4.clone()];
        let s = five_config_state(u.clone(), lambda).expect("valid window");
        if check_five_config_conditions(&s, lambda).is_ok_and(|r| r.all_hold()) {
            return u;
        }
        delta /= qi(2);
    }
}

/// Periodic state of 4 to 12 cells with values on a 1/16 lattice in
/// `[-2, 2]`, repeating the previous value a third of the time.
pub fn random_periodic(rng: &mut impl Rng, lambda: Cfl) -> GridState<Rational> {
    let m = rng.random_range(4..=12);
    let mut values: Vec<Rational> = Vec::with_capacity(m);
    for _ in 0..m {
        let v = match values.last() {
            Some(prev) if rng.random_range(0..3) == 0 => prev.clone(),
            _ => ratio(rng.random_range(-32..=32), 16),
        };
        values.push(v);
    }
    GridState::periodic(values, lambda).expect("nonempty")
}

/// Infinite state with a random window and arithmetic tails. Jumps are
/// nonnegative when `nondecreasing` is set.
pub fn random_infinite(rng: &mut impl Rng, lambda: Cfl, nondecreasing: bool, constant_tails: bool) -> GridState<Rational> {
    let len = rng.random_range(1..=10);
    let mut values = vec![ratio(rng.random_range(-16..=16), 8)];
    for _ in 1..len {
        let s = if rng.random_range(0..4) == 0 {
            qi(0)
        } else if nondecreasing {
            lattice(rng, 0, 2, 16)
        } else {
            lattice(rng, -2, 2, 16)
        };
        let next = values.last().expect("nonempty").clone() + s;
        values.push(next);
    }
    let l = tail_step(rng, nondecreasing, constant_tails);
    let r = tail_step(rng, nondecreasing, constant_tails);
    // a left step is the increment moving left, so a nondecreasing state
    // needs it nonpositive
    GridState::infinite(rng.random_range(-5..=5), values, -l, r, lambda).expect("valid window")
}

fn tail_step(rng: &mut impl Rng, nondecreasing: bool, constant: bool) -> Rational {
    if constant || rng.random_range(0..2) == 0 {
        qi(0)
    } else if nondecreasing {
        ratio(rng.random_range(0..=8), 8)
    } else {
        ratio(rng.random_range(-8..=8), 8)
    }
}

fn half_cell_suite(rng: &mut ChaCha8Rng, cases: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("half-cell-integrals");
    let two = qi(2);
    for _ in 0..cases {
        rep.cases += 1;
        let a = lattice(rng, -2, 2, 64);
        let b = if rng.random_range(0..5) == 0 { a.clone() } else { a.clone() + lattice(rng, 0, 2, 64) };
        let c = if rng.random_range(0..5) == 0 { b.clone() } else { b.clone() + lattice(rng, 0, 2, 64) };
        let st = GridState::with_constant_tails(0, vec![a.clone(), b.clone(), c.clone()], Cfl::half())
            .expect("three cells");
        let profile = reconstruct(&st, Convention::FromRight);
        let left = profile.integrate(&ratio(1, 2), &qi(1)).expect("ordered");
        let right = profile.integrate(&qi(1), &ratio(3, 2)).expect("ordered");
        let want = if b.clone() - a.clone() >= c.clone() - b.clone() {
            (b.clone() - c.clone() / two.clone(), c.clone() / two.clone())
        } else {
            (a.clone() / two.clone(), b.clone() - a.clone() / two.clone())
        };
        let stencil = format!("({a}, {b}, {c})");
        rep.check(left == want.0 && right == want.1, || format!("{stencil}: halves {left}, {right}"));
        let formula = half_cell_integrals(&a, &b, &c);
        rep.check(formula.as_ref().is_ok_and(|f| *f == want), || format!("{stencil}: closed form {formula:?}"));
        let bounds = a.clone() / two.clone() <= left
            && left <= b.clone() / two.clone()
            && b.clone() / two.clone() <= right
            && right <= c.clone() / two.clone();
        rep.check(bounds, || format!("{stencil}: half integrals {left}, {right} out of bounds"));
    }
    rep
}

/// Interfaces `(k - 1, k)` of `before` bracket interface `k` of a state on
/// the shifted grid; `(k, k + 1)` do so for a state back on the integer
/// grid.
fn neighbours(after: &GridState<Rational>, k: i64) -> (i64, i64) {
    match after.phase() {
        Phase::ShiftedLeft => (k - 1, k),
        Phase::Integer => (k, k + 1),
    }
}

fn middle_suite(rng: &mut ChaCha8Rng, cases: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("jump-lower-bound");
    for _ in 0..cases {
        rep.cases += 1;
        let mut s = random_infinite(rng, Cfl::half(), true, true);
        for _ in 0..2 {
            let next = shifted_step(&s, Cfl::half()).expect("half step");
            let (before, after) = (s.jumps(), next.jumps());
            for k in next.start() - 3..=next.end() + 3 {
                let (p, q) = neighbours(&next, k);
                let (sp, sq) = (before.at(p), before.at(q));
                let bound = if sp < sq { sp } else { sq };
                let got = after.at(k);
                rep.check(got >= bound, || format!("jump {got} at {k} below min of neighbours {bound}"));
            }
            s = next;
        }
    }
    rep
}

fn bord_small_suite(rng: &mut ChaCha8Rng, cases: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("left-extremity-small");
    for _ in 0..cases {
        rep.cases += 1;
        let mut c = random_halpha(rng, 2, 10);
        if c.jumps[0] > c.jumps[1] {
            c.jumps.swap(0, 1);
            let start = c.j0();
            c = HAlphaCase::from_jumps(c.jumps, start);
        }
        let j0 = c.j0();
        let s1 = shifted_step(&c.state, Cfl::half()).expect("half step");
        let got = s1.jumps().at(j0);
        rep.check(got.is_zero(), || format!("jumps {:?}: first new jump {got}, want 0", c.jumps));
        rep.check(classify_h_alpha(&s1, &c.alpha).is_some_and(|r| r.alpha_satisfied), || {
            format!("jumps {:?}: left H_alpha", c.jumps)
        });
    }
    rep
}

fn bord_large_suite(rng: &mut ChaCha8Rng, cases: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("left-extremity-large");
    let mut done = 0;
    while done < cases {
        let mut jumps = random_halpha(rng, 3, 10).jumps;
        if jumps[0] == jumps[1] {
            continue;
        }
        if jumps[0] < jumps[1] {
            jumps.swap(0, 1);
        }
        done += 1;
        rep.cases += 1;
        let c = HAlphaCase::from_jumps(jumps, rng.random_range(-5..=5));
        // third jump counts towards alpha too, so that it is at least alpha
        let alpha = if c.jumps[2].clone() / qi(2) < c.alpha { c.jumps[2].clone() / qi(2) } else { c.alpha.clone() };
        let j0 = c.j0();
        let s1 = shifted_step(&c.state, Cfl::half()).expect("half step");
        let s2 = shifted_step(&s1, Cfl::half()).expect("half step");
        let (a1, b1) = (s1.jumps().at(j0), s1.jumps().at(j0 + 1));
        rep.check(a1.is_positive() && a1 <= b1, || format!("jumps {:?}: after one step {a1}, {b1}", c.jumps));
        let first2 = s2.jumps().at(j0);
        let cap = c.jumps[0].clone() - alpha.clone() / qi(4);
        rep.check(first2 <= cap, || format!("jumps {:?}: after two steps {first2} > {cap}", c.jumps));
        for s in [&s1, &s2] {
            rep.check(classify_h_alpha(s, &alpha).is_some_and(|r| r.alpha_satisfied), || {
                format!("jumps {:?}: left H_alpha", c.jumps)
            });
        }
    }
    rep
}

fn closure_suite(rng: &mut ChaCha8Rng, cases: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("halpha-closure");
    for _ in 0..cases {
        rep.cases += 1;
        let c = random_halpha(rng, 1, 10);
        let mut s = c.state.clone();
        for n in 1..=20 {
            s = shifted_step(&s, Cfl::half()).expect("half step");
            rep.check(classify_h_alpha(&s, &c.alpha).is_some_and(|r| r.alpha_satisfied), || {
                format!("jumps {:?}, alpha {}: left H_alpha at step {n}", c.jumps, c.alpha)
            });
        }
    }
    rep
}

fn automaton_suite(rng: &mut ChaCha8Rng, cases: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("automaton");
    for _ in 0..cases {
        rep.cases += 1;
        let c = random_halpha(rng, 3, 10);
        let mut s = c.state.clone();
        let mut prev = classify_h_alpha(&s, &c.alpha).expect("generated in H_alpha");
        for n in 1..=60 {
            s = shifted_step(&s, Cfl::half()).expect("half step");
            let Some(r) = classify_h_alpha(&s, &c.alpha) else {
                rep.fail(format!("jumps {:?}: not a monotone block at step {n}", c.jumps));
                break;
            };
            let (from, to) = (extremities_of(&prev), extremities_of(&r));
            rep.check(automaton_allows(from, prev.m, to, r.m), || {
                format!("jumps {:?}: step {n} goes {from}/M={} -> {to}/M={}", c.jumps, prev.m, r.m)
            });
            if prev.m <= 2 && r.m <= 2 {
                break;
            }
            prev = r;
        }
    }
    rep
}

/// Result of following one `H_alpha` instance until it settles.
#[derive(Clone, Debug)]
pub struct Collapse {
    /// First step from which the trajectory is 2-periodic.
    pub onset: Option<usize>,
    /// Whether every state from the onset on has at most two jumps.
    pub at_most_two_jumps: bool,
    /// Whether every state from the onset on is a discrete Heaviside.
    pub heaviside: bool,
    pub steps_run: usize,
}

/// Steps the half-cell scheme until the state has at most two jumps and
/// has repeated itself two steps later, then keeps going for `confirm`
/// more steps to check that it stays so.
pub fn follow_collapse(initial: &GridState<Rational>, max_steps: usize, confirm: usize) -> Result<Collapse> {
    let mut det = TwoPeriodDetector::new();
    let mut history: Vec<GridState<Rational>> = Vec::new();
    let mut s = initial.clone();
    let mut settled_at: Option<usize> = None;
    let mut n = 0;
    loop {
        det.push(s.clone());
        let m = classify_h_alpha(&s, &qi(0)).map(|r| r.m);
        history.push(s.clone());
        if history.len() > 2 * confirm + 8 {
            history.remove(0);
        }
        match (settled_at, det.onset()) {
            (None, Some(_)) if m.is_some_and(|m| m <= 2) => settled_at = Some(n),
            (Some(_), None) => settled_at = None,
            _ => {}
        }
        if let Some(at) = settled_at {
            if n >= at + confirm {
                break;
            }
        }
        if n >= max_steps + confirm {
            return Ok(Collapse { onset: None, at_most_two_jumps: false, heaviside: false, steps_run: n });
        }
        s = shifted_step(&s, Cfl::half())?;
        n += 1;
    }
    let onset = det.onset();
    let p = onset.expect("settled");
    let first_kept = n + 1 - history.len();
    let tail = &history[p.saturating_sub(first_kept)..];
    let at_most_two_jumps = tail.iter().all(|s| classify_h_alpha(s, &qi(0)).is_some_and(|r| r.m <= 2));
    let heaviside = tail.iter().all(|s| is_discrete_heaviside(s).is_some());
    Ok(Collapse { onset: Some(p).filter(|&p| p <= max_steps), at_most_two_jumps, heaviside, steps_run: n })
}

fn overcompressivity_suite(rng: &mut ChaCha8Rng, cases: usize, max_steps: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("overcompressivity");
    let mut worst = 0;
    for _ in 0..cases {
        rep.cases += 1;
        let c = random_halpha(rng, 1, 10);
        match follow_collapse(&c.state, max_steps, 6) {
            Ok(col) => {
                let what = || format!("jumps {:?}", c.jumps);
                rep.check(col.onset.is_some(), || format!("{}: no 2-periodic onset", what()));
                rep.check(col.at_most_two_jumps, || format!("{}: more than two jumps after onset", what()));
                rep.check(col.heaviside, || format!("{}: not a discrete Heaviside after onset", what()));
                worst = worst.max(col.onset.unwrap_or(0));
            }
            Err(e) => rep.fail(format!("jumps {:?}: {e}", c.jumps)),
        }
    }
    rep.note = Some(format!("latest onset {worst}"));
    rep
}

fn staircase_suite(rng: &mut ChaCha8Rng, cases: usize, steps: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("staircase");
    let mut slowest = 0;
    for _ in 0..cases {
        rep.cases += 1;
        let (a, b) = random_staircase(rng);
        let what = format!("S = ({a}, {b})");
        let mut s = staircase_state(&a, &b, Cfl::half()).expect("valid staircase");
        let mut tracker = StaircaseTracker::new();
        let first = tracker.observe(&s);
        let initial_sum = first.front_sum.clone();
        let mut last_even = initial_sum.clone();
        let mut prev_case = first.case;
        let mut reached: Option<usize> = None;
        for n in 1..=steps {
            s = shifted_step(&s, Cfl::half()).expect("half step");
            let r = tracker.observe(&s);
            if !r.satisfies_hprime {
                rep.fail(format!("{what}: hypothesis lost at step {n}: {}", r.reason.unwrap_or_default()));
                break;
            }
            rep.check(prev_case != Some(StaircaseCase::I) || r.case == Some(StaircaseCase::Ii), || {
                format!("{what}: case i followed by case i at step {n}")
            });
            if n % 2 == 0 {
                rep.check(r.front_sum >= last_even, || {
                    format!("{what}: front sum fell from {last_even} to {} at step {n}", r.front_sum)
                });
                last_even = r.front_sum.clone();
            }
            if reached.is_none() && r.front_sum.clone() - initial_sum.clone() >= qi(5) {
                reached = Some(n);
            }
            prev_case = r.case;
        }
        match reached {
            Some(n) => {
                slowest = slowest.max(n);
                rep.check(n <= 500, || format!("{what}: front sum gained 5 only at step {n}"));
            }
            None => rep.fail(format!("{what}: front sum never gained 5")),
        }
    }
    rep.note = Some(format!("front sum +5 by step {slowest}"));
    rep
}

pub const FIVE_CONFIG_LAMBDAS: [(i64, i64); 4] = [(1, 5), (3, 10), (2, 5), (9, 20)];

/// Checks one 5-configuration over `double_steps` pairs of steps.
pub fn check_five_config_run(rep: &mut SuiteReport, u: [Rational; 4], lambda: Cfl, double_steps: usize) {
    let what = format!("lambda {lambda}, u = ({}, {}, {}, {})", u[0], u[1], u[2], u[3]);
    let mut s = five_config_state(u, lambda).expect("valid window");
    let initial = match check_five_config_conditions(&s, lambda) {
        Ok(r) if r.all_hold() => r,
        other => {
            rep.fail(format!("{what}: not a valid starting configuration: {other:?}"));
            return;
        }
    };
    let lam: Rational = lambda.to_scalar();
    let rate = qi(4) * lam.clone() * lam;
    let mut expected_eps = initial.epsilon.clone();
    for n in 1..=double_steps {
        let Ok((j0, cur)) = five_values(&s) else {
            rep.fail(format!("{what}: lost the 5-configuration shape before double step {n}"));
            return;
        };
        let predicted = predicted_from_values(&cur, lambda);
        let next = shifted_step(&shifted_step(&s, lambda).expect("step"), lambda).expect("step");
        let Ok((j1, got)) = five_values(&next) else {
            rep.fail(format!("{what}: lost the 5-configuration shape at double step {n}"));
            return;
        };
        rep.check(j1 == j0 && got == predicted, || format!("{what}: double step {n} differs from the recurrence"));
        expected_eps = expected_eps * rate.clone();
        let eps = got[2].clone() - got[1].clone();
        rep.check(eps == expected_eps, || format!("{what}: epsilon {eps} at double step {n}, want {expected_eps}"));
        rep.check(sandwich_holds(&initial, &got), || format!("{what}: sandwich bounds fail at double step {n}"));
        s = next;
    }
}

fn five_config_suite(rng: &mut ChaCha8Rng, cases: usize, double_steps: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("five-config");
    for (p, q) in FIVE_CONFIG_LAMBDAS {
        let lambda = Cfl::new(p, q).expect("valid");
        for _ in 0..cases {
            rep.cases += 1;
            let u = random_five_config(rng, lambda);
            check_five_config_run(&mut rep, u, lambda, double_steps);
        }
    }
    rep
}

fn random_params(rng: &mut ChaCha8Rng, kinds: &[SchemeKind]) -> SchemeParams {
    let kind = kinds[rng.random_range(0..kinds.len())];
    let max = if kind == SchemeKind::DlShifted { Cfl::half() } else { Cfl::new(1, 1).expect("one") };
    SchemeParams { kind, lambda: random_cfl(rng, max) }
}

fn mass_suite(rng: &mut ChaCha8Rng, cases: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("mass");
    let mut worst = 0f64;
    for _ in 0..cases {
        rep.cases += 1;
        let params = random_params(rng, &SchemeKind::ALL);
        let s0 = random_periodic(rng, params.lambda);
        let m0 = s0.mass();
        let mut s = s0.clone();
        for n in 1..=10 {
            s = step(&s, &params).expect("valid params");
            let m = s.mass();
            rep.check(m == m0, || format!("{} at {}: mass {m0} became {m} at step {n}", params.kind, params.lambda));
        }
        // binary64: relative drift over 1000 steps, scaled by the l1 norm
        let f0: GridState<f64> = s0.convert().expect("finite");
        let scale = f0.values().iter().map(|v| v.abs()).sum::<f64>().max(1.0);
        let mut f = f0.clone();
        for _ in 0..1000 {
            f = step(&f, &params).expect("valid params");
        }
        let drift = (f.mass() - f0.mass()).abs() / scale;
        worst = worst.max(drift);
        rep.check(drift <= 1e-12, || format!("{} at {}: binary64 drift {drift:e}", params.kind, params.lambda));
    }
    rep.note = Some(format!("worst binary64 drift over 1000 steps {worst:.1e}"));
    rep
}

const MONOTONE: [SchemeKind; 3] = [SchemeKind::Upwind, SchemeKind::DlFixed, SchemeKind::DlShifted];

fn monotonicity_suite(rng: &mut ChaCha8Rng, cases: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("monotonicity");
    for _ in 0..cases {
        rep.cases += 1;
        let params = random_params(rng, &MONOTONE);
        let mut s = random_infinite(rng, params.lambda, true, false);
        for n in 1..=12 {
            s = step(&s, &params).expect("valid params");
            rep.check(s.is_nondecreasing(), || {
                format!("{} at {}: not nondecreasing at step {n}", params.kind, params.lambda)
            });
        }
    }
    rep
}

/// Evolves `u0` and its monotone parts side by side under the shifted
/// scheme and returns the first step at which `v + w + offset` no longer
/// equals `u`, or `None` if they agree for all `steps`.
pub fn decomposition_defect(u0: &GridState<Rational>, lambda: Cfl, steps: usize) -> Result<Option<usize>> {
    let d0 = monotone_decomposition(u0)?;
    let (mut u, mut v, mut w) = (u0.clone(), d0.v.clone(), d0.w.clone());
    for n in 1..=steps {
        u = shifted_step(&u, lambda)?;
        v = shifted_step(&v, lambda)?;
        w = shifted_step(&w, lambda)?;
        let parts = Decomposition { v: v.clone(), w: w.clone(), anchor: d0.anchor, offset: d0.offset.clone() };
        if parts.recombine()? != u {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// One step of the scheme commutes with the monotone splitting of the
/// current state, whichever grid it sits on.
fn decomposition_suite(rng: &mut ChaCha8Rng, cases: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("decomposition");
    for _ in 0..cases {
        rep.cases += 1;
        let lambda = random_cfl(rng, Cfl::half());
        let mut u = random_infinite(rng, lambda, false, true);
        for n in 0..6 {
            let d = monotone_decomposition(&u).expect("infinite state");
            let next = shifted_step(&u, lambda).expect("small lambda");
            let v = shifted_step(&d.v, lambda).expect("small lambda");
            let w = shifted_step(&d.w, lambda).expect("small lambda");
            let parts = Decomposition { v, w, anchor: d.anchor, offset: d.offset.clone() };
            let sum = parts.recombine().expect("same shape");
            rep.check(sum == next, || format!("lambda {lambda}, step {n}: v + w differs from u after one step"));
            u = next;
        }
    }
    rep
}

fn maximum_suite(rng: &mut ChaCha8Rng, cases: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("maximum-principle");
    for _ in 0..cases {
        rep.cases += 1;
        let params = random_params(rng, &MONOTONE);
        let mut s = random_periodic(rng, params.lambda);
        let (lo, hi) = s.bounds().expect("nonempty");
        for n in 1..=12 {
            s = step(&s, &params).expect("valid params");
            let ok = s.values().iter().all(|v| lo <= *v && *v <= hi);
            rep.check(ok, || format!("{} at {}: values leave [{lo}, {hi}] at step {n}", params.kind, params.lambda));
        }
    }
    rep
}

fn tails_suite(rng: &mut ChaCha8Rng, cases: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("tails");
    for _ in 0..cases {
        rep.cases += 1;
        let params = random_params(rng, &SchemeKind::ALL);
        let mut s = random_infinite(rng, params.lambda, false, false);
        let lam: Rational = params.lambda.to_scalar();
        for n in 1..=4 {
            let next = step(&s, &params).expect("valid params");
            let (l0, r0) = s.tails().expect("infinite");
            let (l1, r1) = next.tails().expect("infinite");
            rep.check(l0.step == l1.step && r0.step == r1.step, || {
                format!("{} at {}: tail steps changed at step {n}", params.kind, params.lambda)
            });
            // linear data far from the window are translated exactly; the
            // way back from the shifted grid moves them the other way
            let sign = if s.phase() == Phase::ShiftedLeft { -qi(1) } else { qi(1) };
            for k in 3..6 {
                let (jl, jr) = (s.start() - k, s.end() + k);
                let want_l = s.cell_value(jl) + sign.clone() * lam.clone() * l0.step.clone();
                let want_r = s.cell_value(jr) - sign.clone() * lam.clone() * r0.step.clone();
                rep.check(next.cell_value(jl) == want_l && next.cell_value(jr) == want_r, || {
                    format!("{} at {}: far values wrong at step {n}", params.kind, params.lambda)
                });
            }
            s = next;
        }
    }
    rep
}
