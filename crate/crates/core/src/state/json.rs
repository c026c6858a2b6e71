//! JSON form of grid states.
//!
//! ```json
//! {"kind": "infinite", "arithmetic": "rational", "lambda": "1/2",
//!  "phase": "integer", "window_start": 0, "values": ["0", "1/2", "1"],
//!  "left_tail": {"anchor": "0", "step": "0"},
//!  "right_tail": {"anchor": "1", "step": "0"}}
//! ```
//!
//! Rational scalars are `"p/q"` strings, binary64 scalars plain numbers.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::scalar::{Arithmetic, Cfl, Rational, Scalar};

use super::{Extent, GridState, Phase, Tail};

/// A state in either arithmetic, as read from an untyped source.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyState {
    Rational(GridState<Rational>),
    Binary64(GridState<f64>),
}

impl AnyState {
    pub fn arithmetic(&self) -> Arithmetic {
        match self {
            AnyState::Rational(_) => Arithmetic::Rational,
            AnyState::Binary64(_) => Arithmetic::Binary64,
        }
    }

    /// Reads a state; the arithmetic comes from the `"arithmetic"` field
    /// when present, otherwise from the value encoding (any string means
    /// rational).
    pub fn from_json(v: &Value) -> Result<Self> {
        let mode = match v.get("arithmetic").and_then(Value::as_str) {
            Some(s) => s.parse()?,
            None => {
                let values = v.get("values").and_then(Value::as_array);
                if values.is_some_and(|vs| vs.iter().any(Value::is_string)) {
                    Arithmetic::Rational
                } else {
                    Arithmetic::Binary64
                }
            }
        };
        Ok(match mode {
            Arithmetic::Rational => AnyState::Rational(from_json(v)?),
            Arithmetic::Binary64 => AnyState::Binary64(from_json(v)?),
        })
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyState::Rational(s) => to_json(s),
            AnyState::Binary64(s) => to_json(s),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(text)?)
    }

    /// The state in the requested arithmetic, converting if needed.
    pub fn into_mode<S: Scalar>(self) -> Result<GridState<S>> {
        match self {
            AnyState::Rational(s) => s.convert(),
            AnyState::Binary64(s) => s.convert(),
        }
    }
}

fn phase_str(p: Phase) -> &'static str {
    match p {
        Phase::Integer => "integer",
        Phase::ShiftedLeft => "shifted-left",
    }
}

pub fn to_json<S: Scalar>(state: &GridState<S>) -> Value {
    let mut doc = Map::new();
    doc.insert("kind".into(), json!(if state.is_periodic() { "periodic" } else { "infinite" }));
    doc.insert("arithmetic".into(), json!(S::ARITHMETIC.to_string()));
    doc.insert("lambda".into(), json!(state.lambda().to_string()));
    doc.insert("phase".into(), json!(phase_str(state.phase())));
    doc.insert("window_start".into(), json!(state.start()));
    doc.insert("values".into(), Value::Array(state.values().iter().map(Scalar::to_json).collect()));
    if let Some((l, r)) = state.tails() {
        let tail = |t: &Tail<S>| json!({"anchor": t.anchor.to_json(), "step": t.step.to_json()});
        doc.insert("left_tail".into(), tail(l));
        doc.insert("right_tail".into(), tail(r));
    }
    Value::Object(doc)
}

pub fn from_json<S: Scalar>(v: &Value) -> Result<GridState<S>> {
    let bad = |what: &str| Error::InvalidState(format!("state JSON: {what}"));
    let obj = v.as_object().ok_or_else(|| bad("expected an object"))?;
    let lambda: Cfl = match obj.get("lambda") {
        Some(l) => serde_json::from_value(l.clone())?,
        None => Cfl::half(),
    };
    let phase = match obj.get("phase").and_then(Value::as_str).unwrap_or("integer") {
        "integer" | "integer-grid" => Phase::Integer,
        "shifted-left" | "shifted_left" | "shifted" => Phase::ShiftedLeft,
        other => return Err(bad(&format!("unknown phase `{other}`"))),
    };
    let start = obj.get("window_start").map_or(Some(0), Value::as_i64).ok_or_else(|| bad("window_start"))?;
    let values = obj
        .get("values")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing values"))?
        .iter()
        .map(S::from_json)
        .collect::<Result<Vec<S>>>()?;
    if values.is_empty() {
        return Err(bad("empty values"));
    }
    let kind = obj.get("kind").and_then(Value::as_str).unwrap_or("infinite");
    let extent = match kind {
        "periodic" => Extent::Periodic,
        "infinite" => {
            let tail = |key: &str, edge: &S| -> Result<Tail<S>> {
                let Some(t) = obj.get(key) else {
                    return Ok(Tail::constant(edge.clone()));
                };
                let anchor = match t.get("anchor") {
                    Some(a) => S::from_json(a)?,
                    None => edge.clone(),
                };
                let step = match t.get("step") {
                    Some(s) => S::from_json(s)?,
                    None => S::zero(),
                };
                Ok(Tail { anchor, step })
            };
            Extent::Infinite {
                left: tail("left_tail", &values[0])?,
                right: tail("right_tail", &values[values.len() - 1])?,
            }
        }
        other => return Err(bad(&format!("unknown kind `{other}`"))),
    };
    GridState::from_parts(extent, values, start, phase, lambda)
}
