//! Experiment runner: configuration, seed-parallel execution and CSV output.

pub mod config;
pub mod experiments;
pub mod output;

use thiserror::Error;

pub use config::{parse_config, ConfigFile, Experiment, ExperimentConfig, Layer};
pub use experiments::{run, RunOutcome};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Invariant(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<dynreg::Error> for CliError {
    fn from(e: dynreg::Error) -> Self {
        use dynreg::Error as E;
        match e {
            E::BadOracle(_) => CliError::Numerical(e.to_string()),
            E::InvalidExponent(_)
            | E::InvalidDomain(_)
            | E::InvalidBudget(_)
            | E::InvalidArgument(_)
            | E::NonpositiveStep(_)
            | E::GridOutOfRange(_) => CliError::Usage(e.to_string()),
            _ => CliError::Invariant(e.to_string()),
        }
    }
}

/// Worker pool capped by `DYNREG_THREADS` when set.
pub fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("DYNREG_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("DYNREG_THREADS must be a positive integer, got `{v}`")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}
