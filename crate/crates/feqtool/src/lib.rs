//! Batch runner for the `feq-core` verifier: configuration, report files and
//! the `feqtool` command line.

use std::path::Path;

pub mod config;
pub mod report;
pub mod runner;

pub use config::{Format, RunConfig};
pub use runner::{exit_code, run, RunOutcome};

/// Errors that end a command, each mapped to an exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("engine error: {0}")]
    Engine(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    pub fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        CliError::Io { path: path.display().to_string(), message: e.to_string() }
    }

    pub fn csv(path: &Path, e: csv::Error) -> Self {
        match e.kind() {
            csv::ErrorKind::Io(_) => CliError::io(path, e),
            _ => CliError::Engine(format!("{}: {e}", path.display())),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Engine(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

impl From<feq_core::Error> for CliError {
    fn from(e: feq_core::Error) -> Self {
        match e {
            feq_core::Error::UnknownCase(_) | feq_core::Error::InvalidParameter(_) => CliError::Usage(e.to_string()),
            other => CliError::Engine(other.to_string()),
        }
    }
}
