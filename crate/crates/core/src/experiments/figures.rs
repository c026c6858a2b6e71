//! End-to-end presets reproducing the published figures as CSV files.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::scalar::{Arithmetic, Cfl};
use crate::schemes::SchemeKind;

use super::config::{steps_for_periods, ExperimentConfig, Metric};
use super::runner::run_experiment;

pub const FIGURES: [&str; 5] = ["castest1", "fsin", "fsinstag", "escalier", "fiveconfig"];

/// Knobs of the figure presets that are not fixed by the figure itself.
#[derive(Clone, Debug, PartialEq)]
pub struct FigureOptions {
    /// Cell counts for `castest1`.
    pub castest1_cells: Vec<usize>,
    pub stride: usize,
    pub exact_columns: bool,
}

impl Default for FigureOptions {
    fn default() -> Self {
        FigureOptions { castest1_cells: vec![200, 600], stride: 1, exact_columns: false }
    }
}

fn lam(p: i64, q: i64) -> Cfl {
    Cfl::new(p, q).expect("valid preset lambda")
}

/// The runs making up a figure, each with its output file name.
pub fn figure_configs(name: &str, opts: &FigureOptions) -> Result<Vec<(String, ExperimentConfig)>> {
    let mut runs = Vec::new();
    match name {
        "castest1" => {
            let l = lam(2, 5);
            for &m in &opts.castest1_cells {
                for kind in [SchemeKind::Upwind, SchemeKind::LaxWendroff, SchemeKind::DlFixed] {
                    let mut c = ExperimentConfig::new(kind, l, "id1", steps_for_periods(10, m, l));
                    c.arithmetic = Arithmetic::Binary64;
                    c.cells = Some(m);
                    c.metrics = vec![Metric::Linf, Metric::L1, Metric::Plateau];
                    runs.push((format!("castest1_{}_M{m}.csv", kind.name()), c));
                }
            }
        }
        "fsin" | "fsinstag" => {
            let kind = if name == "fsin" { SchemeKind::DlFixed } else { SchemeKind::DlShifted };
            for l in [lam(47, 100), lam(12, 25), lam(49, 100), lam(1, 2)] {
                let mut c = ExperimentConfig::new(kind, l, "id2", steps_for_periods(15, 100, l));
                c.arithmetic = Arithmetic::Binary64;
                c.cells = Some(100);
                c.metrics = vec![Metric::Linf, Metric::L1, Metric::Plateau];
                runs.push((format!("{name}_lam{}.csv", l.file_tag()), c));
            }
        }
        "escalier" => {
            let mut c = ExperimentConfig::new(SchemeKind::DlShifted, Cfl::half(), "staircase:3,1", 800);
            c.metrics = vec![Metric::Plateau, Metric::Staircase];
            runs.push(("escalier.csv".into(), c));
        }
        "fiveconfig" => {
            let mut c =
                ExperimentConfig::new(SchemeKind::DlShifted, lam(2, 5), "fiveconfig:7/20,49/100,51/100,17/20", 80);
            c.metrics = vec![Metric::Fiveconfig];
            c.exact_columns = true;
            runs.push(("fiveconfig.csv".into(), c));
        }
        other => return Err(Error::UnknownPreset(other.to_string())),
    }
    for (_, c) in &mut runs {
        c.stride = opts.stride;
        c.exact_columns |= opts.exact_columns;
    }
    Ok(runs)
}

/// Runs every experiment of a figure and writes its files into `out_dir`.
pub fn run_figure(name: &str, out_dir: &Path, opts: &FigureOptions) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for (file, c) in figure_configs(name, opts)? {
        let series = run_experiment(&c)?;
        written.extend(series.write_outputs(&out_dir.join(file))?);
    }
    Ok(written)
}
