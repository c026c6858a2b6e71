use antidiff::scalar::parse_rational;
use antidiff::schemes::{reconstruct_cell, run, shifted_step, step, Convention};
use antidiff::{Cfl, GridState, Phase, Rational, Scalar, SchemeKind, SchemeParams};
use proptest::prelude::*;

fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-24i64..=24, 1i64..=8).prop_map(|(n, d)| Rational::from_int(n) / Rational::from_int(d))
}

fn nonneg_rational() -> impl Strategy<Value = Rational> {
    (0i64..=24, 1i64..=8).prop_map(|(n, d)| Rational::from_int(n) / Rational::from_int(d))
}

/// Any scheme with a CFL number it accepts.
fn params() -> impl Strategy<Value = SchemeParams> {
    (0usize..4, 1i64..=20).prop_map(|(k, p)| {
        let kind = SchemeKind::ALL[k];
        let p = if kind == SchemeKind::DlShifted { p.min(10) } else { p };
        SchemeParams::new(kind, Cfl::new(p, 20).unwrap()).unwrap()
    })
}

fn monotone_params() -> impl Strategy<Value = SchemeParams> {
    params().prop_filter("monotone", |p| p.kind != SchemeKind::LaxWendroff)
}

fn shifted_cfl() -> impl Strategy<Value = Cfl> {
    (1i64..=10).prop_map(|p| Cfl::new(p, 20).unwrap())
}

prop_compose! {
    fn periodic(lambda: Cfl)(values in prop::collection::vec(small_rational(), 3..10)) -> GridState<Rational> {
        GridState::periodic(values, lambda).unwrap()
    }
}

prop_compose! {
    fn nondecreasing(lambda: Cfl)(
        start in -3i64..3,
        base in small_rational(),
        jumps in prop::collection::vec(nonneg_rational(), 1..8),
        left in nonneg_rational(),
        right in nonneg_rational(),
    ) -> GridState<Rational> {
        let mut values = vec![base];
        for j in jumps {
            let next = values.last().unwrap().clone() + j;
            values.push(next);
        }
        // a nondecreasing state falls moving left
        GridState::infinite(start, values, -left, right, lambda).unwrap()
    }
}

prop_compose! {
    fn infinite(lambda: Cfl)(
        start in -3i64..3,
        values in prop::collection::vec(small_rational(), 1..8),
        left in small_rational(),
        right in small_rational(),
    ) -> GridState<Rational> {
        GridState::infinite(start, values, left, right, lambda).unwrap()
    }
}

fn sum(s: &GridState<Rational>) -> Rational {
    s.values().iter().fold(Rational::from_int(0), |a, v| a + v.clone())
}

proptest! {
    #[test]
    fn mass_is_conserved(p in params(), seed in prop::collection::vec(small_rational(), 3..10)) {
        let s0 = GridState::periodic(seed, p.lambda).unwrap();
        let mass = sum(&s0);
        run(&s0, &p, 8, |n, s| assert_eq!(sum(s), mass, "{} at step {n}", p.kind)).unwrap();
    }

    #[test]
    fn monotone_schemes_keep_order(p in monotone_params(), seed in (0i64..3).prop_flat_map(|_| nondecreasing(Cfl::half()))) {
        let s0 = seed.with_lambda(p.lambda);
        run(&s0, &p, 8, |n, s| assert!(s.is_nondecreasing(), "{} at step {n}", p.kind)).unwrap();
    }

    #[test]
    fn maximum_principle(p in monotone_params(), values in prop::collection::vec(small_rational(), 3..10)) {
        let s0 = GridState::periodic(values, p.lambda).unwrap();
        let (lo, hi) = s0.bounds().unwrap();
        run(&s0, &p, 8, |n, s| {
            let (a, b) = s.bounds().unwrap();
            assert!(lo <= a && b <= hi, "{} at step {n}", p.kind);
        })
        .unwrap();
    }

    #[test]
    fn tails_keep_their_step(p in params(), seed in infinite(Cfl::half())) {
        let s0 = seed.with_lambda(p.lambda);
        let (l0, r0) = s0.tails().map(|(l, r)| (l.step.clone(), r.step.clone())).unwrap();
        run(&s0, &p, 5, |n, s| {
            let (l, r) = s.tails().unwrap();
            assert!(l.step == l0 && r.step == r0, "{} at step {n}", p.kind);
        })
        .unwrap();
    }

    #[test]
    fn shifted_values_are_bracketed(lambda in shifted_cfl(), s0 in nondecreasing(Cfl::half())) {
        let s0 = s0.with_lambda(lambda);
        let s1 = shifted_step(&s0, lambda).unwrap();
        prop_assert_eq!(s1.phase(), Phase::ShiftedLeft);
        // new cell j sits over the interface between old cells j - 1 and j
        for j in s1.start() - 2..=s1.end() + 2 {
            let (a, b) = (s0.cell_value(j - 1), s0.cell_value(j));
            let v = s1.cell_value(j);
            prop_assert!(a.clone().min(b.clone()) <= v && v <= a.max(b));
        }
        // and on the way back cell j sits between shifted cells j and j + 1
        let s2 = shifted_step(&s1, lambda).unwrap();
        prop_assert_eq!(s2.phase(), Phase::Integer);
        for j in s2.start() - 2..=s2.end() + 2 {
            let (a, b) = (s1.cell_value(j), s1.cell_value(j + 1));
            let v = s2.cell_value(j);
            prop_assert!(a.clone().min(b.clone()) <= v && v <= a.max(b));
        }
    }

    #[test]
    fn reconstruction_keeps_cell_mass(a in small_rational(), b in small_rational(), c in small_rational(), right in any::<bool>()) {
        let conv = if right { Convention::FromRight } else { Convention::FromLeft };
        let cell = reconstruct_cell(&a, &b, &c, 0, conv);
        prop_assert_eq!(cell.mass(), b);
    }

    #[test]
    fn affine_maps_commute_with_steps(
        p in params(),
        s0 in infinite(Cfl::half()),
        scale in small_rational().prop_filter("nonzero", |v| *v != Rational::from_int(0)),
        shift in small_rational(),
    ) {
        let s0 = s0.with_lambda(p.lambda);
        let lhs = step(&s0.affine(&scale, &shift), &p).unwrap();
        let rhs = step(&s0, &p).unwrap().affine(&scale, &shift);
        for j in lhs.start().min(rhs.start()) - 2..=lhs.end().max(rhs.end()) + 2 {
            prop_assert_eq!(lhs.cell_value(j), rhs.cell_value(j));
        }
    }

    #[test]
    fn binary64_tracks_rational(p in params(), s0 in infinite(Cfl::half())) {
        let s0 = s0.with_lambda(p.lambda);
        let mut exact = s0.clone();
        let mut float: GridState<f64> = s0.convert().unwrap();
        for _ in 0..6 {
            exact = step(&exact, &p).unwrap();
            float = step(&float, &p).unwrap();
        }
        for j in exact.start() - 2..=exact.end() + 2 {
            let (e, f) = (exact.cell_value(j).to_f64(), float.cell_value(j));
            prop_assert!((e - f).abs() <= 1e-9 * (1.0 + e.abs()), "cell {j}: {e} vs {f}");
        }
    }
}

#[test]
fn zero_steps_is_identity() {
    let s = GridState::infinite(0, vec![q("0"), q("1/3"), q("1")], q("0"), q("0"), Cfl::half()).unwrap();
    for kind in SchemeKind::ALL {
        let p = SchemeParams::new(kind, Cfl::new(2, 5).unwrap()).unwrap();
        assert_eq!(run(&s, &p, 0, |_, _| {}).unwrap(), s);
    }
}

#[test]
fn shifted_scheme_returns_to_integer_grid_on_even_steps() {
    let s = GridState::infinite(0, vec![q("0"), q("1/3"), q("1")], q("0"), q("0"), Cfl::half()).unwrap();
    let p = SchemeParams::new(SchemeKind::DlShifted, Cfl::new(1, 4).unwrap()).unwrap();
    let mut phases = Vec::new();
    run(&s, &p, 6, |_, s| phases.push(s.phase())).unwrap();
    assert_eq!(phases.iter().step_by(2).collect::<Vec<_>>(), [&Phase::ShiftedLeft; 3]);
    assert_eq!(phases.iter().skip(1).step_by(2).collect::<Vec<_>>(), [&Phase::Integer; 3]);
}

#[test]
fn upwind_at_unit_cfl_shifts_by_one_cell() {
    let values: Vec<Rational> = ["1", "-2", "5/3", "0", "7"].iter().map(|v| q(v)).collect();
    let s = GridState::periodic(values.clone(), Cfl::new(1, 1).unwrap()).unwrap();
    let p = SchemeParams::new(SchemeKind::Upwind, Cfl::new(1, 1).unwrap()).unwrap();
    let out = run(&s, &p, 3, |_, _| {}).unwrap();
    for j in 0..5 {
        assert_eq!(out.cell_value(j), values[(j as usize + 5 - 3) % 5]);
    }
}

#[test]
fn lax_wendroff_overshoots_a_step() {
    let s = GridState::infinite(0, vec![q("0"), q("1")], q("0"), q("0"), Cfl::half()).unwrap();
    let p = SchemeParams::new(SchemeKind::LaxWendroff, Cfl::half()).unwrap();
    let out = step(&s, &p).unwrap();
    // u_1 = 1 - (1/4)(1 - 0) + (1/8)(1 - 2 + 0)
    assert_eq!(out.cell_value(1), q("5/8"));
    // u_0 = 0 - (1/4)(1 - 0) + (1/8)(1 - 0 + 0) undershoots
    assert_eq!(out.cell_value(0), q("-1/8"));
    assert_eq!(out.cell_value(2), q("1"));
    assert!(!out.is_nondecreasing());
}

#[test]
fn shifted_scheme_rejects_wide_cfl() {
    assert!(SchemeParams::new(SchemeKind::DlShifted, Cfl::new(3, 5).unwrap()).is_err());
    let s = GridState::infinite(0, vec![q("0"), q("1")], q("0"), q("0"), Cfl::half()).unwrap();
    assert!(shifted_step(&s, Cfl::new(3, 5).unwrap()).is_err());
}

#[test]
fn fixed_grid_schemes_reject_shifted_states() {
    let s = GridState::infinite(0, vec![q("0"), q("1")], q("0"), q("0"), Cfl::half()).unwrap().with_phase(Phase::ShiftedLeft);
    for kind in [SchemeKind::Upwind, SchemeKind::LaxWendroff, SchemeKind::DlFixed] {
        let p = SchemeParams::new(kind, Cfl::half()).unwrap();
        assert!(step(&s, &p).is_err(), "{kind}");
    }
}
