use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::{Arithmetic, Cfl};
use crate::schemes::{SchemeKind, SchemeParams};

use super::presets::{build_initial, Initial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Linf,
    L1,
    Plateau,
    Halpha,
    Extremity,
    Heaviside,
    Staircase,
    Fiveconfig,
}

impl Metric {
    pub const ALL: [Metric; 8] = [
        Metric::Linf,
        Metric::L1,
        Metric::Plateau,
        Metric::Halpha,
        Metric::Extremity,
        Metric::Heaviside,
        Metric::Staircase,
        Metric::Fiveconfig,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Linf => "linf",
            Metric::L1 => "l1",
            Metric::Plateau => "plateau",
            Metric::Halpha => "halpha",
            Metric::Extremity => "extremity",
            Metric::Heaviside => "heaviside",
            Metric::Staircase => "staircase",
            Metric::Fiveconfig => "fiveconfig",
        }
    }

    /// Whether the metric compares against the initial datum.
    pub fn needs_datum(self) -> bool {
        matches!(self, Metric::Linf | Metric::L1)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown metric `{s}`")))
    }
}

/// A preset name or file path, or an inline JSON datum or state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialSpec {
    Named(String),
    Inline(Value),
}

impl InitialSpec {
    pub fn build(&self, lambda: Cfl) -> Result<Initial> {
        match self {
            InitialSpec::Named(s) => build_initial(s, lambda),
            InitialSpec::Inline(v) => super::presets::initial_from_json(v),
        }
    }

    /// Replaces a file path by the document it names, so that the initial data no
    /// longer depends on the file system.
    pub fn resolved(&self) -> Result<InitialSpec> {
        match self {
            InitialSpec::Named(s) if Path::new(s.trim()).is_file() => {
                let text = std::fs::read_to_string(s.trim())?;
                Ok(InitialSpec::Inline(serde_json::from_str(&text)?))
            }
            InitialSpec::Named(s) if s.trim_start().starts_with('{') => {
                Ok(InitialSpec::Inline(serde_json::from_str(s)?))
            }
            other => Ok(other.clone()),
        }
    }
}

fn default_arithmetic() -> Arithmetic {
    Arithmetic::Rational
}

fn default_stride() -> usize {
    1
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// Everything needed to run one experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scheme: SchemeKind,
    pub lambda: Cfl,
    #[serde(default = "default_arithmetic")]
    pub arithmetic: Arithmetic,
    pub initial: InitialSpec,
    /// Cell count of the periodic grid a datum is projected on.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cells: Option<usize>,
    pub steps: usize,
    /// Empty means a default set suited to the initial state.
    #[serde(default)]
    pub metrics: Vec<Metric>,
    #[serde(default = "default_stride")]
    pub stride: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub dump_reconstruction: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    pub exact_columns: bool,
}

impl ExperimentConfig {
    pub fn new(scheme: SchemeKind, lambda: Cfl, initial: &str, steps: usize) -> Self {
        ExperimentConfig {
            scheme,
            lambda,
            arithmetic: Arithmetic::Rational,
            initial: InitialSpec::Named(initial.to_string()),
            cells: None,
            steps,
            metrics: Vec::new(),
            stride: 1,
            out: None,
            dump_reconstruction: false,
            exact_columns: false,
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn params(&self) -> SchemeParams {
        SchemeParams { kind: self.scheme, lambda: self.lambda }
    }

    pub fn validate(&self) -> Result<()> {
        self.params().validate()?;
        if self.stride == 0 {
            return Err(Error::Config("stride must be at least 1".into()));
        }
        if self.dump_reconstruction && !matches!(self.scheme, SchemeKind::DlFixed | SchemeKind::DlShifted) {
            return Err(Error::Config(format!("{} has no reconstruction to dump", self.scheme)));
        }
        Ok(())
    }

    /// The metrics to record, sorted and deduplicated; the defaults depend
    /// on the initial data.
    pub fn metric_set(&self, initial: &Initial) -> Vec<Metric> {
        let mut m = if self.metrics.is_empty() {
            match initial {
                Initial::Datum(_) => vec![Metric::Linf, Metric::L1, Metric::Plateau],
                Initial::State(_) => vec![Metric::Plateau, Metric::Halpha, Metric::Extremity, Metric::Heaviside],
            }
        } else {
            self.metrics.clone()
        };
        m.sort();
        m.dedup();
        m
    }

    /// The config with file paths inlined and output locations dropped, as
    /// written in the header of a series.
    pub fn header_form(&self) -> Result<Self> {
        let mut c = self.clone();
        c.initial = self.initial.resolved()?;
        c.out = None;
        Ok(c)
    }
}

/// `floor(periods * cells / lambda)`: the number of steps after which the
/// exact solution has travelled `periods` times around the grid.
pub fn steps_for_periods(periods: u64, cells: usize, lambda: Cfl) -> usize {
    let num = periods as i128 * cells as i128 * lambda.denom() as i128;
    (num / lambda.numer() as i128) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_counts() {
        let lam = Cfl::new(2, 5).unwrap();
        assert_eq!(steps_for_periods(10, 200, lam), 5000);
        assert_eq!(steps_for_periods(10, 600, lam), 15000);
        assert_eq!(steps_for_periods(15, 100, Cfl::new(47, 100).unwrap()), 3191);
        assert_eq!(steps_for_periods(15, 100, Cfl::half()), 3000);
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"scheme":"dl_fixed","lambda":"2/5","initial":"id2","cells":100,"steps":10,
                       "metrics":["plateau","linf"],"arithmetic":"binary64"}"#;
        let c = ExperimentConfig::from_json_str(text).unwrap();
        assert_eq!(c.metrics, vec![Metric::Plateau, Metric::Linf]);
        assert_eq!(c.stride, 1);
        let back = ExperimentConfig::from_json_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = r#"{"scheme":"upwind","lambda":"1/2","initial":"id1","steps":1,"colour":"red"}"#;
        assert!(ExperimentConfig::from_json_str(text).is_err());
    }

    #[test]
    fn shifted_needs_small_lambda() {
        let c = ExperimentConfig::new(SchemeKind::DlShifted, Cfl::new(3, 5).unwrap(), "heaviside", 3);
        assert!(c.validate().is_err());
    }
}
