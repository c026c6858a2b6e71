use serde_json::{json, Value};

use crate::analysis::{
    check_five_config_conditions, check_hprime, classify_extremities, classify_h_alpha, is_discrete_heaviside,
    plateau_metric_i,
};
use crate::error::Result;
use crate::scalar::Scalar;
use crate::state::{AnyState, GridState, Phase, TotalVariation};

fn opt<S: Scalar>(v: &Option<S>) -> Value {
    v.as_ref().map_or(Value::Null, S::to_json)
}

/// Every report that applies to `state`, as one JSON object. Reports that
/// do not apply are `null`.
pub fn classify_state<S: Scalar>(state: &GridState<S>, alpha: &S) -> Value {
    let jumps = state.jumps();
    let nonzero: Vec<Value> = (jumps.first_interface()..=jumps.last_interface())
        .filter(|&k| !jumps.at(k).is_zero())
        .map(|k| json!({"interface": k, "label": jumps.label(k), "value": jumps.at(k).to_json()}))
        .collect();
    let tv = match state.total_variation() {
        TotalVariation::Finite(v) => v.to_json(),
        TotalVariation::Infinite => json!("inf"),
    };
    let halpha = classify_h_alpha(state, alpha).map(|r| {
        json!({
            "j0": r.j0,
            "M": r.m,
            "jumps": r.jumps.iter().map(S::to_json).collect::<Vec<_>>(),
            "min_inner_jump": opt(&r.min_inner_jump),
            "alpha": r.alpha.to_json(),
            "alpha_satisfied": r.alpha_satisfied,
        })
    });
    let infinite = !state.is_periodic();
    let staircase = infinite.then(|| {
        let r = check_hprime(state);
        json!({
            "satisfies": r.satisfies_hprime,
            "anchor": r.anchor,
            "s_half": r.s_half.to_json(),
            "s_three_half": r.s_three_half.to_json(),
            "case": r.case.map(|c| c.as_str()),
            "front_sum": r.front_sum.to_json(),
            "reason": r.reason,
        })
    });
    let five = if infinite && !state.lambda().is_half() {
        check_five_config_conditions(state, state.lambda()).ok().map(|r| {
            json!({
                "j0": r.j0,
                "u": r.u.iter().map(S::to_json).collect::<Vec<_>>(),
                "epsilon": r.epsilon.to_json(),
                "conditions": r.conditions,
                "all_hold": r.all_hold(),
                "limits": r.limits.iter().map(S::to_json).collect::<Vec<_>>(),
            })
        })
    } else {
        None
    };
    json!({
        "arithmetic": S::ARITHMETIC,
        "kind": if infinite { "infinite" } else { "periodic" },
        "phase": match state.phase() { Phase::Integer => "integer", Phase::ShiftedLeft => "shifted-left" },
        "lambda": state.lambda().to_string(),
        "nondecreasing": state.is_nondecreasing(),
        "total_variation": tv,
        "plateau_I": plateau_metric_i(state).to_json(),
        "jumps": nonzero,
        "halpha": halpha,
        "extremity": infinite.then(|| classify_extremities(state).as_str()),
        "j_inf": is_discrete_heaviside(state),
        "staircase": staircase,
        "five_config": five,
    })
}

/// [`classify_state`] for a state in either arithmetic; `alpha` is parsed
/// in the state's arithmetic.
pub fn classify_any(state: &AnyState, alpha: &str) -> Result<Value> {
    Ok(match state {
        AnyState::Rational(s) => classify_state(s, &Scalar::parse_literal(alpha)?),
        AnyState::Binary64(s) => classify_state(s, &<f64 as Scalar>::parse_literal(alpha)?),
    })
}
