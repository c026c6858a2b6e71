//! Initial data, experiment runs with CSV output, figure presets and the
//! randomized property suites behind `verify`.

mod classify;
mod config;
mod figures;
mod presets;
mod runner;
pub mod verify;

pub use classify::{classify_any, classify_state};
pub use config::{steps_for_periods, ExperimentConfig, InitialSpec, Metric};
pub use figures::{figure_configs, run_figure, FigureOptions, FIGURES};
pub use presets::{
    build_initial, halpha_state, heaviside_state, id1, id2, init_periodic_state, initial_from_json, plateaus,
    staircase_state, Initial,
};
pub use runner::{initial_state, read_header, read_table, run_experiment, run_typed, AnyTimeSeries, TimeSeries};
