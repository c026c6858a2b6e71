//! Configurations `0, u_1, u_2, u_3, u_4, 1` with `u_2` and `u_3` close to
//! each other, which the shifted scheme at `lambda < 1/2` drives
//! exponentially to a profile with `u_2 = u_3`.

use crate::error::{Error, Result};
use crate::scalar::{Cfl, Scalar};
use crate::state::GridState;

#[derive(Clone, Debug, PartialEq)]
pub struct FiveConfigReport<S> {
    /// Last cell holding 0; the intermediate values sit in `j0+1 ..= j0+4`.
    pub j0: i64,
    pub u: [S; 4],
    /// `u_3 - u_2`.
    pub epsilon: S,
    /// Conditions (a) to (e), in order.
    pub conditions: [bool; 5],
    pub limits: [S; 4],
}

impl<S: Scalar> FiveConfigReport<S> {
    pub fn all_hold(&self) -> bool {
        self.conditions.iter().all(|&c| c)
    }
}

/// Reads `(j0, [u_1, u_2, u_3, u_4])` from a state with tails 0 and 1 and
/// exactly four cells strictly between them in its transition zone.
pub fn five_values<S: Scalar>(state: &GridState<S>) -> Result<(i64, [S; 4])> {
    let bad = |why: &str| Error::Precondition(format!("not a 5-configuration: {why}"));
    let (left, right) = state.tails().ok_or_else(|| bad("periodic state"))?;
    if !left.is_constant() || !right.is_constant() || !left.anchor.is_zero() || right.anchor != S::one() {
        return Err(bad("tails must be the constants 0 and 1"));
    }
    let first = (state.start()..=state.end())
        .find(|&j| !state.cell_value(j).is_zero())
        .ok_or_else(|| bad("no transition"))?;
    let j0 = first - 1;
    if (j0 + 5..=state.end()).any(|j| state.cell_value(j) != S::one()) {
        return Err(bad("more than four intermediate values"));
    }
    let u = [1, 2, 3, 4].map(|i| state.cell_value(j0 + i));
    if u[3] == S::one() {
        return Err(bad("fewer than four intermediate values"));
    }
    Ok((j0, u))
}

/// `u_1^inf`, `u_2^inf = u_3^inf`, `u_4^inf` from the current values.
pub fn five_config_limits<S: Scalar>(u: &[S; 4], lambda: Cfl) -> Result<[S; 4]> {
    if lambda.is_half() {
        return Err(Error::Precondition("the 5-configuration limits divide by 1 - 4 lambda^2, zero at 1/2".into()));
    }
    let lam: S = lambda.to_scalar();
    let one = S::one();
    let two = S::from_int(2);
    let four = S::from_int(4);
    let eps = u[2].clone() - u[1].clone();
    let lam2 = lam.clone() * lam.clone();
    let denom = one.clone() - four * lam2.clone();
    let u1 = u[0].clone() - (two.clone() * lam.clone() - lam2.clone()) / denom.clone() * eps.clone();
    let mid = ((one.clone() + lam.clone()) * u[1].clone() + lam.clone() * u[2].clone()) / (one.clone() + two * lam);
    let u4 = u[3].clone() + (one - lam2) / denom * eps;
    Ok([u1, mid.clone(), mid, u4])
}

pub fn check_five_config_conditions<S: Scalar>(state: &GridState<S>, lambda: Cfl) -> Result<FiveConfigReport<S>> {
    let (j0, u) = five_values(state)?;
    let limits = five_config_limits(&u, lambda)?;
    let lam: S = lambda.to_scalar();
    let one = S::one();
    let eps = u[2].clone() - u[1].clone();
    let [u1, u2, u3, u4] = u.clone();
    let conditions = [
        u2.clone() - u1 >= S::from_int(2) * eps.clone(),
        limits[0] >= lam.clone() * limits[1].clone(),
        lam.clone() * (u4.clone() - u3.clone()) >= (one.clone() - lam.clone()) * eps.clone(),
        u4 - u3.clone() >= lam.clone() * (one.clone() - u3),
        one.clone() - limits[3].clone() >= (one - lam.clone() * lam) * eps.clone(),
    ];
    Ok(FiveConfigReport { j0, u, epsilon: eps, conditions, limits })
}

/// The configuration two steps later, from the closed-form recurrence.
pub fn five_config_predicted_even_step<S: Scalar>(state: &GridState<S>, lambda: Cfl) -> Result<(i64, [S; 4])> {
    let report = check_five_config_conditions(state, lambda)?;
    if !report.all_hold() {
        return Err(Error::Precondition(format!("conditions (a)-(e) do not all hold: {:?}", report.conditions)));
    }
    Ok((report.j0, predicted_from_values(&report.u, lambda)))
}

pub fn predicted_from_values<S: Scalar>(u: &[S; 4], lambda: Cfl) -> [S; 4] {
    let lam: S = lambda.to_scalar();
    let one = S::one();
    let two = S::from_int(2);
    let lam2 = lam.clone() * lam.clone();
    let eps = u[2].clone() - u[1].clone();
    [
        u[0].clone() - (two.clone() * lam.clone() - lam2.clone()) * eps.clone(),
        u[1].clone() + (lam.clone() - two.clone() * lam2.clone()) * eps.clone(),
        u[2].clone() - (one.clone() - lam - two * lam2.clone()) * eps.clone(),
        u[3].clone() + (one - lam2) * eps,
    ]
}

/// Property (P): each value stays between its initial value and its limit.
pub fn sandwich_holds<S: Scalar>(initial: &FiveConfigReport<S>, u: &[S; 4]) -> bool {
    let (u0, lim) = (&initial.u, &initial.limits);
    lim[0] <= u[0]
        && u[0] <= u0[0]
        && u0[1] <= u[1]
        && u[1] <= lim[1]
        && lim[2] <= u[2]
        && u[2] <= u0[2]
        && u0[3] <= u[3]
        && u[3] <= lim[3]
}

/// The 5-configuration with the given intermediate values, `j0 = 0`.
pub fn five_config_state<S: Scalar>(u: [S; 4], lambda: Cfl) -> Result<GridState<S>> {
    let mut values = vec![S::zero()];
    values.extend(u);
    values.push(S::one());
    GridState::with_constant_tails(0, values, lambda)
}
