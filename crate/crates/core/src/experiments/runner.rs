use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::analysis::{
    classify_extremities, classify_h_alpha, five_values, is_discrete_heaviside, l1_error_cell_averaged,
    linf_error_pointwise, plateau_metric_i, Layout, MetricsSample, StaircaseTracker,
};
use crate::error::{Error, Result};
use crate::scalar::{Arithmetic, Rational, Scalar};
use crate::schemes::{convention_for, reconstruct, step, SchemeKind};
use crate::state::{json as state_json, GridState, PiecewiseDatum};

use super::config::{ExperimentConfig, Metric};
use super::presets::{init_periodic_state, Initial};

/// Sampled metrics of one run, the config that produced them and the
/// final state.
#[derive(Clone, Debug)]
pub struct TimeSeries<S> {
    /// Header form of the config: re-running it reproduces the series.
    pub config: ExperimentConfig,
    pub metrics: Vec<Metric>,
    pub samples: Vec<MetricsSample<S>>,
    pub final_state: GridState<S>,
    /// Reconstruction profiles used by the sampled steps, when requested.
    pub reconstruction: Vec<Value>,
}

#[derive(Clone, Debug)]
pub enum AnyTimeSeries {
    Rational(TimeSeries<Rational>),
    Binary64(TimeSeries<f64>),
}

/// The starting state of a config, in its arithmetic.
pub fn initial_state<S: Scalar>(config: &ExperimentConfig, initial: &Initial) -> Result<GridState<S>> {
    match initial {
        Initial::Datum(d) => {
            let cells = config
                .cells
                .ok_or_else(|| Error::Config("a datum initial needs a cell count".into()))?;
            init_periodic_state(d, cells, config.lambda)
        }
        Initial::State(s) => {
            if config.cells.is_some() {
                return Err(Error::Config("the cell count only applies to data, not to grid states".into()));
            }
            Ok(s.clone().into_mode::<S>()?.with_lambda(config.lambda))
        }
    }
}

fn check_compatible<S: Scalar>(metrics: &[Metric], state: &GridState<S>, datum: Option<&PiecewiseDatum>) -> Result<()> {
    for m in metrics {
        let bad = |why: &str| Err(Error::Config(format!("metric {m}: {why}")));
        match m {
            Metric::Linf | Metric::L1 if datum.is_none() => return bad("needs a datum as initial condition"),
            Metric::Halpha | Metric::Extremity | Metric::Heaviside | Metric::Staircase if state.is_periodic() => {
                return bad("needs an infinite state")
            }
            Metric::Fiveconfig => {
                five_values(state)?;
            }
            _ => {}
        }
    }
    Ok(())
}

/// Runs the experiment and, when the config names an output path, writes
/// the CSV and the final state there.
pub fn run_experiment(config: &ExperimentConfig) -> Result<AnyTimeSeries> {
    let series = match config.arithmetic {
        Arithmetic::Rational => AnyTimeSeries::Rational(run_typed(config)?),
        Arithmetic::Binary64 => AnyTimeSeries::Binary64(run_typed(config)?),
    };
    if let Some(out) = &config.out {
        series.write_outputs(out)?;
    }
    Ok(series)
}

pub fn run_typed<S: Scalar>(config: &ExperimentConfig) -> Result<TimeSeries<S>> {
    if S::ARITHMETIC != config.arithmetic {
        return Err(Error::Config(format!("config asks for {} arithmetic", config.arithmetic)));
    }
    config.validate()?;
    let header = config.header_form()?;
    let initial = header.initial.build(config.lambda)?;
    initial.check_arithmetic(S::ARITHMETIC)?;
    let metrics = config.metric_set(&initial);
    let datum = initial.datum();
    let mut state: GridState<S> = initial_state(config, &initial)?;
    check_compatible(&metrics, &state, datum)?;

    let params = config.params();
    let time_moves = config.scheme != SchemeKind::DlShifted;
    let dx: Option<S> = match datum {
        Some(d) => Some(Layout::for_datum(d, state.len())?.dx()),
        None => None,
    };
    let lam: S = config.lambda.to_scalar();
    let mut tracker = StaircaseTracker::new();
    let mut samples = Vec::new();
    let mut reconstruction = Vec::new();

    for n in 0..=config.steps {
        let staircase = metrics.contains(&Metric::Staircase).then(|| tracker.observe(&state));
        let sampled = n % config.stride == 0 || n == config.steps;
        if sampled {
            let mut s = MetricsSample::empty(n);
            for m in &metrics {
                match m {
                    Metric::Linf | Metric::L1 => {
                        let (d, dx) = (datum.expect("checked"), dx.clone().expect("datum"));
                        let t = if time_moves { S::from_int(n as i64) * lam.clone() * dx } else { S::zero() };
                        if *m == Metric::Linf {
                            s.linf_err = Some(linf_error_pointwise(&state, d, &t)?);
                        } else {
                            s.l1_err = Some(l1_error_cell_averaged(&state, d, &t)?);
                        }
                    }
                    Metric::Plateau => s.plateau_i = Some(plateau_metric_i(&state)),
                    Metric::Halpha => s.m_count = classify_h_alpha(&state, &S::zero()).map(|r| r.m),
                    Metric::Extremity => s.extremity = Some(classify_extremities(&state)),
                    Metric::Heaviside => s.heaviside = is_discrete_heaviside(&state),
                    Metric::Staircase => {
                        let r = staircase.clone().expect("observed");
                        if r.satisfies_hprime {
                            s.front_sum = Some(r.front_sum);
                            s.case = r.case;
                        }
                    }
                    Metric::Fiveconfig => s.epsilon = five_values(&state).ok().map(|(_, u)| u[2].clone() - u[1].clone()),
                }
            }
            samples.push(s);
            if config.dump_reconstruction && n < config.steps {
                let conv = convention_for(config.scheme, &state).expect("validated scheme");
                reconstruction.push(json!({
                    "step": n,
                    "convention": conv,
                    "cells": reconstruct(&state, conv).to_json(),
                }));
            }
        }
        if n < config.steps {
            state = step(&state, &params)?;
        }
    }
    Ok(TimeSeries { config: header, metrics, samples, final_state: state, reconstruction })
}

impl<S: Scalar> TimeSeries<S> {
    fn scalar_columns(&self) -> Vec<&'static str> {
        let mut cols = vec!["linf_err", "l1_err", "plateau_I"];
        if self.metrics.contains(&Metric::Staircase) {
            cols.push("front_sum");
        }
        if self.metrics.contains(&Metric::Fiveconfig) {
            cols.push("epsilon");
        }
        cols
    }

    pub fn columns(&self) -> Vec<String> {
        let mut cols: Vec<String> =
            ["step", "linf_err", "l1_err", "plateau_I", "M_count", "extremity"].map(String::from).to_vec();
        if self.metrics.contains(&Metric::Heaviside) {
            cols.push("j_inf".into());
        }
        if self.metrics.contains(&Metric::Staircase) {
            cols.extend(["front_sum".into(), "case".into()]);
        }
        if self.metrics.contains(&Metric::Fiveconfig) {
            cols.push("epsilon".into());
        }
        if self.config.exact_columns {
            cols.extend(self.scalar_columns().iter().map(|c| format!("{c}_exact")));
        }
        cols
    }

    fn row(&self, s: &MetricsSample<S>) -> Vec<String> {
        let dec = |v: &Option<S>| v.as_ref().map(S::decimal_string).unwrap_or_default();
        let mut row = vec![
            s.step.to_string(),
            dec(&s.linf_err),
            dec(&s.l1_err),
            dec(&s.plateau_i),
            s.m_count.map(|m| m.to_string()).unwrap_or_default(),
            s.extremity.map(|e| e.to_string()).unwrap_or_default(),
        ];
        if self.metrics.contains(&Metric::Heaviside) {
            row.push(s.heaviside.map(|j| j.to_string()).unwrap_or_default());
        }
        if self.metrics.contains(&Metric::Staircase) {
            row.push(dec(&s.front_sum));
            row.push(s.case.map(|c| c.as_str().to_string()).unwrap_or_default());
        }
        if self.metrics.contains(&Metric::Fiveconfig) {
            row.push(dec(&s.epsilon));
        }
        if self.config.exact_columns {
            for c in self.scalar_columns() {
                let v = match c {
                    "linf_err" => &s.linf_err,
                    "l1_err" => &s.l1_err,
                    "plateau_I" => &s.plateau_i,
                    "front_sum" => &s.front_sum,
                    _ => &s.epsilon,
                };
                row.push(v.as_ref().map(S::exact_string).unwrap_or_default());
            }
        }
        row
    }

    /// `# <config json>` followed by the CSV table.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = format!("# {}\n", serde_json::to_string(&self.config)?);
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.columns())?;
        for s in &self.samples {
            w.write_record(self.row(s))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        out.push_str(&String::from_utf8(bytes).expect("csv output is utf-8"));
        Ok(out)
    }

    pub fn final_state_json(&self) -> Value {
        state_json::to_json(&self.final_state)
    }
}

impl AnyTimeSeries {
    pub fn config(&self) -> &ExperimentConfig {
        match self {
            AnyTimeSeries::Rational(t) => &t.config,
            AnyTimeSeries::Binary64(t) => &t.config,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            AnyTimeSeries::Rational(t) => t.samples.len(),
            AnyTimeSeries::Binary64(t) => t.samples.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_csv(&self) -> Result<String> {
        match self {
            AnyTimeSeries::Rational(t) => t.to_csv(),
            AnyTimeSeries::Binary64(t) => t.to_csv(),
        }
    }

    pub fn final_state_json(&self) -> Value {
        match self {
            AnyTimeSeries::Rational(t) => t.final_state_json(),
            AnyTimeSeries::Binary64(t) => t.final_state_json(),
        }
    }

    fn reconstruction(&self) -> &[Value] {
        match self {
            AnyTimeSeries::Rational(t) => &t.reconstruction,
            AnyTimeSeries::Binary64(t) => &t.reconstruction,
        }
    }

    /// Writes `path`, `<stem>.final.json` and, when dumps were requested,
    /// `<stem>.reconstruction.json`. Returns the paths written.
    pub fn write_outputs(&self, path: &Path) -> Result<Vec<PathBuf>> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        let mut written = vec![path.to_path_buf()];
        std::fs::write(path, self.to_csv()?)?;
        let fin = path.with_extension("final.json");
        std::fs::write(&fin, serde_json::to_string_pretty(&self.final_state_json())?)?;
        written.push(fin);
        if self.config().dump_reconstruction {
            let rec = path.with_extension("reconstruction.json");
            std::fs::write(&rec, serde_json::to_string(&self.reconstruction())?)?;
            written.push(rec);
        }
        Ok(written)
    }
}

/// The config recorded in the first line of a series CSV.
pub fn read_header(csv_text: &str) -> Result<ExperimentConfig> {
    let first = csv_text.lines().next().unwrap_or_default();
    let json = first
        .strip_prefix("# ")
        .ok_or_else(|| Error::Config("series has no header line".into()))?;
    ExperimentConfig::from_json_str(json)
}

/// Column names and rows of a series CSV, header line skipped.
pub fn read_table(csv_text: &str) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(csv_text.as_bytes());
    let cols = r.headers()?.iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.map(|r| r.iter().map(String::from).collect()))
        .collect::<std::result::Result<_, _>>()?;
    Ok((cols, rows))
}
