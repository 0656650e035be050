use std::path::PathBuf;

use crate::circuit::ParseError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: invalid JSON: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{0}")]
    Circuit(#[from] ParseError),
    #[error("{0}")]
    Domain(#[from] qpath_core::Error),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 1 for every domain or I/O failure. Usage errors
    /// (status 2) are reported by the argument parser before any command
    /// runs.
    pub fn exit_code(&self) -> i32 {
        1
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
