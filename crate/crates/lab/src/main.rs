use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use finsler::algebra::FdAlgebra;
use finsler::gen::GenConfig;
use finsler_lab::experiments;
use finsler_lab::json::Extended;
use finsler_lab::run;
use finsler_lab::{LabError, LabResult};
use serde::Serialize;

/// Check statements about Finsler modules on finite-dimensional algebras.
#[derive(Parser)]
#[command(version)]
struct Cli {
    /// Print JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for scenarios without one and for the generators.
    #[arg(long, global = true, env = "CSTAR_SEED", default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a scenario file.
    Verify {
        scenario: PathBuf,
        /// Write the JSON report here (overrides the scenario's `output`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact Akemann witnesses for random positive pairs.
    Akemann {
        /// Block sizes, e.g. `1,2`.
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Also run the projected search with this many iterations.
        #[arg(long)]
        search_iterations: Option<usize>,
    },
    /// Split the modules of a scenario along the commutative ideal.
    Decompose { scenario: PathBuf },
    /// A module satisfying the axioms on which the parallelogram law fails.
    Counterexample {
        /// Block sizes, e.g. `1,2`.
        #[arg(long, value_delimiter = ',', required = true)]
        algebra: Vec<usize>,
        /// Fiber exponent: a number at least 1 other than 2, or `inf`.
        #[arg(long)]
        fiber: String,
        /// Dimension of the witness fiber.
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Write generated instances as scenario files.
    Gen {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 10)]
        count: u64,
        /// Additional instances with a nonzero glue module.
        #[arg(long, default_value_t = 0)]
        glued: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit<T: Serialize>(cli: &Cli, value: &T, human: impl FnOnce() -> String) {
    if cli.json {
        println!(
            "{}",
            serde_json::to_string_pretty(value).expect("outputs serialize")
        );
    } else {
        print!("{}", human());
    }
}

fn write_file(path: &Path, text: &str) -> LabResult<()> {
    std::fs::write(path, text).map_err(|e| LabError::io(path, e))
}

fn execute(cli: &Cli) -> LabResult<bool> {
    match &cli.command {
        Command::Verify { scenario, out } => {
            let loaded = run::load(scenario, cli.seed)?;
            let report = run::run(&loaded)?;
            if let Some(path) = out.clone().or_else(|| run::output_path(&loaded)) {
                write_file(&path, &report.to_json())?;
            }
            emit(cli, &report, || report.table());
            Ok(report.passed)
        }
        Command::Akemann {
            dims,
            trials,
            search_iterations,
        } => {
            let algebra = FdAlgebra::new(dims.clone())?;
            let s = experiments::akemann(&algebra, *trials, cli.seed, *search_iterations)?;
            emit(cli, &s, || s.lines());
            Ok(s.passed)
        }
        Command::Decompose { scenario } => {
            let loaded = run::load(scenario, cli.seed)?;
            let d = run::decompose(&loaded)?;
            emit(cli, &d, || {
                d.instances.iter().map(|i| i.line() + "\n").collect()
            });
            Ok(d.passed)
        }
        Command::Counterexample {
            algebra,
            fiber,
            dim,
            samples,
        } => {
            let p: Extended = serde_json::from_value(fiber_value(fiber))
                .map_err(|_| LabError::Invalid(format!("bad fiber exponent `{fiber}`")))?;
            let algebra = FdAlgebra::new(algebra.clone())?;
            let s = experiments::counterexample(&algebra, p.0, *dim, *samples, cli.seed)?;
            emit(cli, &s, || s.lines());
            Ok(s.passed)
        }
        Command::Gen { out, count, glued } => {
            let cfg = GenConfig::with_seed(cli.seed);
            let m = experiments::write_corpus(&cfg, *count, *glued, out)?;
            emit(cli, &m, || {
                format!(
                    "wrote {} instances to {} (seed {})\n",
                    m.instances.len(),
                    out.display(),
                    m.seed
                )
            });
            Ok(true)
        }
    }
}

fn fiber_value(s: &str) -> serde_json::Value {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => serde_json::json!(x),
        _ => serde_json::json!(s),
    }
}
