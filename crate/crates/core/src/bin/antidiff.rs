//! Command-line front end: run experiments, classify states, run the
//! property suites and regenerate figure data.
//!
//! Exit codes: 0 on success, 1 when a property suite reports a violation or
//! a run fails at runtime, 2 on usage or configuration errors.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use antidiff::experiments::{
    classify_any, run_experiment, run_figure, verify, ExperimentConfig, FigureOptions, InitialSpec, Metric,
};
use antidiff::state::AnyState;
use antidiff::{Arithmetic, Cfl, Error, SchemeKind};

#[derive(Parser)]
#[command(name = "antidiff", version, about = "Anti-diffusive advection schemes and their long-time behavior")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its metrics as CSV.
    Simulate(SimulateArgs),
    /// Print every report that applies to a state read from JSON.
    Classify {
        /// State JSON file, or `-` for standard input.
        state: PathBuf,
        /// Lower bound on inner jumps for the H_alpha report.
        #[arg(long, default_value = "0")]
        alpha: String,
    },
    /// Run the randomized property suites.
    Verify {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        cases: usize,
        /// Restrict to the named suites (repeatable).
        #[arg(long = "suite", value_parser = clap::builder::PossibleValuesParser::new(verify::SUITES))]
        suites: Vec<String>,
    },
    /// Run a figure preset end to end.
    Figures {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(antidiff::experiments::FIGURES))]
        name: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Cell counts of the castest1 runs.
        #[arg(long, value_delimiter = ',', default_values_t = [200usize, 600])]
        cells: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        stride: usize,
        #[arg(long)]
        exact_columns: bool,
    },
}

#[derive(Args)]
struct SimulateArgs {
    /// JSON config file; the flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    scheme: Option<SchemeKind>,
    #[arg(long)]
    lambda: Option<Cfl>,
    #[arg(long)]
    arith: Option<Arithmetic>,
    #[arg(long)]
    steps: Option<usize>,
    /// Preset name, inline JSON, or a JSON file.
    #[arg(long)]
    initial: Option<String>,
    #[arg(long)]
    cells: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    metrics: Vec<Metric>,
    /// CSV output path; without it the CSV goes to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    stride: Option<usize>,
    #[arg(long)]
    dump_reconstruction: bool,
    #[arg(long)]
    exact_columns: bool,
}

enum Failure {
    Usage(String),
    Runtime(String),
    Violation,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) => Failure::Runtime(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn build_config(a: SimulateArgs) -> Result<ExperimentConfig, Failure> {
    let mut c = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            ExperimentConfig::from_json_str(&text)?
        }
        None => {
            let missing = |f: &str| Failure::Usage(format!("--{f} is required without --config"));
            let scheme = a.scheme.ok_or_else(|| missing("scheme"))?;
            let lambda = a.lambda.ok_or_else(|| missing("lambda"))?;
            let initial = a.initial.clone().ok_or_else(|| missing("initial"))?;
            let steps = a.steps.ok_or_else(|| missing("steps"))?;
            ExperimentConfig::new(scheme, lambda, &initial, steps)
        }
    };
    if let Some(s) = a.scheme {
        c.scheme = s;
    }
    if let Some(l) = a.lambda {
        c.lambda = l;
    }
    if let Some(m) = a.arith {
        c.arithmetic = m;
    }
    if let Some(n) = a.steps {
        c.steps = n;
    }
    if let Some(i) = a.initial {
        c.initial = InitialSpec::Named(i);
    }
    if a.cells.is_some() {
        c.cells = a.cells;
    }
    if !a.metrics.is_empty() {
        c.metrics = a.metrics;
    }
    if a.out.is_some() {
        c.out = a.out;
    }
    if let Some(s) = a.stride {
        c.stride = s;
    }
    c.dump_reconstruction |= a.dump_reconstruction;
    c.exact_columns |= a.exact_columns;
    Ok(c)
}

fn simulate(a: SimulateArgs) -> Result<(), Failure> {
    let config = build_config(a)?;
    let series = run_experiment(&config)?;
    match &config.out {
        Some(out) => eprintln!("wrote {} rows to {}", series.len(), out.display()),
        None => print!("{}", series.to_csv()?),
    }
    Ok(())
}

fn classify(path: PathBuf, alpha: &str) -> Result<(), Failure> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| Failure::Runtime(e.to_string()))?
    } else {
        std::fs::read_to_string(&path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
    };
    let state = AnyState::parse(&text)?;
    let report = classify_any(&state, alpha)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("json value"));
    Ok(())
}

fn run_verify(seed: u64, cases: usize, suites: Vec<String>) -> Result<(), Failure> {
    let names: Vec<&str> =
        if suites.is_empty() { verify::SUITES.to_vec() } else { suites.iter().map(String::as_str).collect() };
    println!("seed {seed}, {cases} cases per suite");
    let mut failed = false;
    for name in names {
        let t = Instant::now();
        let r = verify::run_suite(name, seed, cases).expect("suite names are validated by clap");
        println!("{r}  [{:.2?}]", t.elapsed());
        for v in &r.violations {
            println!("    {v}");
        }
        failed |= !r.passed();
    }
    if failed {
        Err(Failure::Violation)
    } else {
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Classify { state, alpha } => classify(state, &alpha),
        Command::Verify { seed, cases, suites } => run_verify(seed, cases, suites),
        Command::Figures { name, out, cells, stride, exact_columns } => {
            let opts = FigureOptions { castest1_cells: cells, stride, exact_columns };
            run_figure(&name, &out, &opts).map_err(Failure::from).map(|paths| {
                for p in paths {
                    println!("{}", p.display());
                }
            })
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation) => ExitCode::from(1),
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
