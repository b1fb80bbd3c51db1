//! Command-line layer: run files, scenario sweeps and the reproduction
//! presets, all emitting CSV.
//!
//! Every command takes an optional thread count. Scenarios run one after the
//! other; replications inside a scenario run on a rayon pool of that size.
//! Output never depends on the pool size.

use std::io;
use std::path::PathBuf;

use thiserror::Error;

use crate::trial::ConfigError;

pub mod format;
pub mod published;
pub mod reproduce;
pub mod runfile;
pub mod simulate;
pub mod sweep;

pub use format::fmt_g;
pub use reproduce::{cmd_reproduce, ReproduceOptions, ReproduceReport, ReproduceTarget};
pub use runfile::{parse_run_file, parse_run_str, RunFileError, Scenario, DEFAULT_REPS};
pub use simulate::{cmd_simulate, SimulateOptions, SIMULATE_HEADER};
pub use sweep::{cmd_sweep, SweepGrid, SweepKind, SweepSettings};

/// Exit code for success.
pub const EXIT_OK: i32 = 0;
/// Exit code when a reproduction misses a tolerance, or a run fails midway.
pub const EXIT_FAILURE: i32 = 1;
/// Exit code for usage, parse and configuration errors.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    RunFile(#[from] RunFileError),
    #[error("{0}")]
    Usage(String),
    #[error("scenario {label}: {source}")]
    Config { label: String, source: ConfigError },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::RunFile(_) | CliError::Usage(_) | CliError::Config { .. } => EXIT_USAGE,
            CliError::Io { .. } | CliError::Csv(_) | CliError::ThreadPool(_) => EXIT_FAILURE,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

/// Runs `f` on a dedicated pool of `threads` workers, or on the global pool
/// (all cores) when `threads` is `None`.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => Ok(rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(f)),
    }
}
