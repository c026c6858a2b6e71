//! Error norms, the plateau metric and the configuration classifiers.

mod fiveconfig;
mod halpha;
mod metrics;
mod staircase;

pub use fiveconfig::{
    check_five_config_conditions, five_config_limits, five_config_predicted_even_step, five_config_state,
    five_values, predicted_from_values, sandwich_holds, FiveConfigReport,
};
pub use halpha::{
    automaton_allows, classify_extremities, classify_h_alpha, count_positive_jumps, detect_two_periodicity,
    extremities_of, is_discrete_heaviside, jump_block, states_match, ExtremityClass, HAlphaReport,
    TwoPeriodDetector,
};
pub use metrics::{l1_error_cell_averaged, linf_error_pointwise, plateau_metric_i, Layout};
pub use staircase::{
    check_hprime, check_hprime_at, next_anchor, staircase_predicted_next, StaircaseCase, StaircasePrediction,
    StaircaseReport, StaircaseTracker,
};

use crate::scalar::Scalar;

/// Metrics of one state of a run. Fields that do not apply to the state
/// (error norms of an infinite state, jump counts of a non-monotone one)
/// are `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricsSample<S> {
    pub step: usize,
    pub linf_err: Option<S>,
    pub l1_err: Option<S>,
    pub plateau_i: Option<S>,
    pub m_count: Option<usize>,
    pub extremity: Option<ExtremityClass>,
    pub heaviside: Option<i64>,
    pub front_sum: Option<S>,
    pub case: Option<StaircaseCase>,
    pub epsilon: Option<S>,
}

impl<S: Scalar> MetricsSample<S> {
    pub fn empty(step: usize) -> Self {
        MetricsSample {
            step,
            linf_err: None,
            l1_err: None,
            plateau_i: None,
            m_count: None,
            extremity: None,
            heaviside: None,
            front_sum: None,
            case: None,
            epsilon: None,
        }
    }
}
