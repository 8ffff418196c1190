use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("read error at row {row}: {message}")]
    Read { row: usize, message: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("parse error at row {row}, column `{column}`: cannot read `{value}` as a number")]
    Parse {
        row: usize,
        column: String,
        value: String,
    },

    #[error("encoding error at row {row}: unknown label `{label}`")]
    Encoding { row: usize, label: String },

    #[error("drift stream spec error: {0}")]
    Spec(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("empty state: {0}")]
    EmptyState(&'static str),

    #[error("config error: {0}")]
    Config(String),

    #[error("model error at instance {index}: {message}")]
    Model { index: usize, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
