use std::path::PathBuf;

use thiserror::Error;

/// Errors from the experiment harness.
#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Core(#[from] charsum_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, LabError>;
