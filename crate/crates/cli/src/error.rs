use std::path::PathBuf;

use opqm_core::error::{Error as CoreError, ModelError, QuantumError};
use thiserror::Error;

/// Anything that prevents a scenario from producing a report. All map to
/// exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Model(m) => CliError::Model(m),
            CoreError::Quantum(q) => CliError::Quantum(q),
        }
    }
}

pub fn schema(msg: impl Into<String>) -> CliError {
    CliError::Schema(msg.into())
}
