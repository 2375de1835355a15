use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: cannot parse {text:?} as a number")]
    Parse {
        path: PathBuf,
        line: usize,
        text: String,
    },
    #[error("{path}:{line}: no column {column}")]
    MissingColumn {
        path: PathBuf,
        line: usize,
        column: usize,
    },
    #[error("{path}: no data")]
    Empty { path: PathBuf },
    #[error("{path}: not a model document: {reason}")]
    Model { path: PathBuf, reason: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] uutest::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }
}
