//! Named initial data and their grid projections.

use std::f64::consts::PI;
use std::path::Path;

use num_traits::Signed;
use serde_json::Value;

use crate::analysis::{five_config_state, Layout};
use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Arithmetic, Cfl, Rational, Scalar};
use crate::state::{AnyState, Expr, GridState, Piece, PiecewiseDatum};

/// What an experiment starts from: a datum to be projected on a periodic
/// grid, or a ready grid state.
#[derive(Clone, Debug, PartialEq)]
pub enum Initial {
    Datum(PiecewiseDatum),
    State(AnyState),
}

impl Initial {
    pub fn check_arithmetic(&self, mode: Arithmetic) -> Result<()> {
        match self {
            Initial::Datum(d) => d.check_arithmetic(mode),
            Initial::State(_) => Ok(()),
        }
    }

    pub fn datum(&self) -> Option<&PiecewiseDatum> {
        match self {
            Initial::Datum(d) => Some(d),
            Initial::State(_) => None,
        }
    }
}

fn q(s: &str) -> Rational {
    parse_rational(s).expect("literal")
}

fn qi(n: i64) -> Rational {
    <Rational as Scalar>::from_int(n)
}

/// `cos(2 pi x) sin(10 pi x)` on `[0, 1)`, repeated.
pub fn id1() -> PiecewiseDatum {
    let expr = Expr::CosSin { amplitude: 1.0, cos_frequency: 2.0 * PI, sin_frequency: 10.0 * PI };
    PiecewiseDatum::periodic(vec![Piece { start: qi(0), end: qi(1), expr }]).expect("one piece")
}

/// `-1` on `[-0.3, 0)`, `sin(pi x - pi/2)` on `[0, 1)`, `1` on `[1, 1.2)`,
/// repeated with period `3/2`.
pub fn id2() -> PiecewiseDatum {
    PiecewiseDatum::periodic(vec![
        Piece { start: q("-3/10"), end: qi(0), expr: Expr::Constant(qi(-1)) },
        Piece { start: qi(0), end: qi(1), expr: Expr::Sine { amplitude: 1.0, frequency: PI, phase: -PI / 2.0 } },
        Piece { start: qi(1), end: q("6/5"), expr: Expr::Constant(qi(1)) },
    ])
    .expect("contiguous pieces")
}

/// Periodic piecewise constant datum from `(width, height)` pairs laid out
/// from 0. With one cell per unit of width the plateaus sit exactly on the
/// grid.
pub fn plateaus(spec: &[(Rational, Rational)]) -> Result<PiecewiseDatum> {
    let mut x = qi(0);
    let mut pieces = Vec::with_capacity(spec.len());
    for (w, h) in spec {
        if !w.is_positive() {
            return Err(Error::Config(format!("plateau width must be positive, got {w}")));
        }
        let end = x.clone() + w.clone();
        pieces.push(Piece { start: x, end: end.clone(), expr: Expr::Constant(h.clone()) });
        x = end;
    }
    PiecewiseDatum::periodic(pieces)
}

/// Infinite state `0` left of cell 0 and the partial sums of `jumps` after.
pub fn halpha_state(jumps: &[Rational], lambda: Cfl) -> Result<GridState<Rational>> {
    let mut values = vec![qi(0)];
    for s in jumps {
        let next = values.last().expect("nonempty").clone() + s.clone();
        values.push(next);
    }
    GridState::with_constant_tails(0, values, lambda)
}

/// Staircase `0, a, a + b, a + b + 1, ...` with the last zero at cell 0.
pub fn staircase_state(s_half: &Rational, s_three_half: &Rational, lambda: Cfl) -> Result<GridState<Rational>> {
    let a = s_half.clone();
    let b = a.clone() + s_three_half.clone();
    GridState::infinite(0, vec![qi(0), a, b], qi(0), qi(1), lambda)
}

pub fn heaviside_state(lambda: Cfl) -> GridState<Rational> {
    GridState::with_constant_tails(0, vec![qi(0), qi(1)], lambda).expect("two cells")
}

fn scalars(list: &str) -> Result<Vec<Rational>> {
    list.split(',')
        .map(|s| parse_rational(s).ok_or_else(|| Error::ParseScalar(s.trim().to_string())))
        .collect()
}

/// Resolves a preset name, an inline JSON document or a JSON file.
///
/// Names: `id1`, `id2`, `heaviside`, `plateaus:w@h,w@h,...`,
/// `halpha:s1,s2,...`, `staircase:a,b`, `fiveconfig:u1,u2,u3,u4`.
/// JSON documents with a `pieces` field are data, anything else is read as
/// a grid state.
pub fn build_initial(spec: &str, lambda: Cfl) -> Result<Initial> {
    let spec = spec.trim();
    if spec.starts_with('{') {
        return initial_from_json(&serde_json::from_str(spec)?);
    }
    let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
    let state = |s: GridState<Rational>| Ok(Initial::State(AnyState::Rational(s)));
    match name {
        "id1" => Ok(Initial::Datum(id1())),
        "id2" => Ok(Initial::Datum(id2())),
        "heaviside" => state(heaviside_state(lambda)),
        "plateaus" => {
            let pairs = args
                .split(',')
                .map(|p| {
                    let (w, h) = p
                        .split_once('@')
                        .ok_or_else(|| Error::Config(format!("plateau `{p}` is not width@height")))?;
                    let w = parse_rational(w).ok_or_else(|| Error::ParseScalar(w.to_string()))?;
                    let h = parse_rational(h).ok_or_else(|| Error::ParseScalar(h.to_string()))?;
                    Ok((w, h))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Initial::Datum(plateaus(&pairs)?))
        }
        "halpha" => {
            let jumps = scalars(args)?;
            if jumps.is_empty() || jumps.iter().any(|s| !s.is_positive()) {
                return Err(Error::Config("halpha needs positive jumps".into()));
            }
            state(halpha_state(&jumps, lambda)?)
        }
        "staircase" => match scalars(args)?.as_slice() {
            [a, b] => state(staircase_state(a, b, lambda)?),
            _ => Err(Error::Config("staircase needs two values".into())),
        },
        "fiveconfig" => {
            let u: [Rational; 4] = scalars(args)?
                .try_into()
                .map_err(|_| Error::Config("fiveconfig needs four values".into()))?;
            state(five_config_state(u, lambda)?)
        }
        _ if Path::new(spec).is_file() => {
            let text = std::fs::read_to_string(spec)?;
            initial_from_json(&serde_json::from_str(&text)?)
        }
        _ => Err(Error::UnknownPreset(spec.to_string())),
    }
}

pub fn initial_from_json(v: &Value) -> Result<Initial> {
    if v.get("pieces").is_some() {
        let d: PiecewiseDatum = serde_json::from_value(v.clone())?;
        d.validate()?;
        Ok(Initial::Datum(d))
    } else {
        Ok(Initial::State(AnyState::from_json(v)?))
    }
}

/// Periodic state of `cells` exact cell averages over one period.
pub fn init_periodic_state<S: Scalar>(datum: &PiecewiseDatum, cells: usize, lambda: Cfl) -> Result<GridState<S>> {
    if cells < 4 {
        return Err(Error::Config(format!("a periodic grid needs at least 4 cells, got {cells}")));
    }
    datum.check_arithmetic(S::ARITHMETIC)?;
    let layout = Layout::for_datum(datum, cells)?;
    let dx: S = layout.dx();
    let values = (0..cells as i64)
        .map(|k| datum.cell_average(&layout.center(k, &S::zero()), &dx))
        .collect::<Result<Vec<S>>>()?;
    GridState::periodic(values, lambda)
}
