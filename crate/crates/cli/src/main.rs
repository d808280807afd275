use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qmaxwell::harness::{convergence_study, run_identity_suite, run_scenario, sample_sources, HarnessError, Scenario};

#[derive(Parser)]
#[command(
    name = "qmaxwell",
    version,
    about = "Verify quaternionic Maxwell formulations on sampled fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the seeded identity suite and print its report.
    Identities {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: usize,
    },
    /// Evaluate every formulation on a scenario grid and write a report.
    Residual {
        #[arg(long)]
        scenario: PathBuf,
        /// Report path; defaults to `<scenario stem>.report.json` in the
        /// current directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit the order of finite differences against jets.
    Convergence {
        #[arg(long)]
        scenario: PathBuf,
        /// Comma-separated, strictly decreasing step sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        h: Vec<f64>,
    },
    /// Print sampled charge and current densities for a scenario.
    Sources {
        #[arg(long)]
        scenario: PathBuf,
    },
}

fn default_report_path(scenario: &Path) -> PathBuf {
    let stem = scenario.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario");
    PathBuf::from(format!("{stem}.report.json"))
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn verdict(pass: bool) -> Result<ExitCode, HarnessError> {
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run(cli: Cli) -> Result<ExitCode, HarnessError> {
    match cli.command {
        Command::Identities { seed, count } => {
            let report = run_identity_suite(seed, count)?;
            emit(&report.to_json());
            verdict(report.pass)
        }
        Command::Residual { scenario, out } => {
            let s = Scenario::load(&scenario)?;
            let report = run_scenario(&s)?;
            let out = out.unwrap_or_else(|| default_report_path(&scenario));
            std::fs::write(&out, report.to_json()).map_err(|source| HarnessError::Io {
                path: out.display().to_string(),
                source,
            })?;
            for c in report.checks.iter().filter(|c| !c.pass) {
                eprintln!("FAIL {}: {:e} > {:e}", c.name, c.value, c.tolerance);
            }
            emit(&format!(
                "{}: maxmain max {:e}, decomposition {:e}; report written to {}\n",
                report.scenario,
                report.formulations.maxmain.max,
                report.decomposition.max_deviation,
                out.display()
            ));
            verdict(report.pass)
        }
        Command::Convergence { scenario, h } => {
            let s = Scenario::load(&scenario)?;
            let report = convergence_study(&s, &h)?;
            emit(&report.to_json());
            verdict(report.pass)
        }
        Command::Sources { scenario } => {
            let s = Scenario::load(&scenario)?;
            let samples = sample_sources(&s)?;
            emit(&qmaxwell::harness::report::to_json(&samples));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
