//! Verification harness: scenarios, grid sampling, residual aggregation,
//! identity suites, convergence studies and reports.

pub mod convergence;
pub mod grid;
pub mod identities;
pub mod random;
pub mod report;
pub mod run;
pub mod scenario;

use thiserror::Error;

use crate::biquat::AlgebraError;
use crate::jet::{JetError, Point4};
use crate::medium::MediumError;

pub use convergence::{convergence_study, ConvergenceReport};
pub use grid::{sample_grid, Box4};
pub use identities::{run_identities, run_identity_suite, IdentityReport};
pub use run::{run_scenario, sample_sources, ResidualReport};
pub use scenario::{Scenario, ScenarioFile};

/// Tool version recorded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("medium error: {0}")]
    Medium(#[from] MediumError),
    #[error("{what} evaluation failed at {point}: {source}")]
    Field {
        what: &'static str,
        point: Point4,
        source: JetError,
    },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(
        "manufactured pair is inadmissible: max |r2| = {max_abs_r2:e}, max |r4| = {max_abs_r4:e} \
         (Faraday and div(mu H) = 0 must hold for the chosen E, H)"
    )]
    Inadmissible { max_abs_r2: f64, max_abs_r4: f64 },
}

impl HarnessError {
    /// Process exit status: 1 for a failed tolerance, 2 for configuration or
    /// domain problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Inadmissible { .. } => 1,
            _ => 2,
        }
    }
}
