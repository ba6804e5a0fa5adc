use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by graph construction, model setup and the experiment runners.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph is not connected ({components} components)")]
    Disconnected { components: usize },

    #[error("outside the analysed range: {0}")]
    OutOfRange(String),

    #[error("no analytic region covers this point: {0}")]
    Uncovered(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Name of the module an error originates from, used in CLI messages.
    pub fn origin(&self) -> &'static str {
        match self {
            Error::InvalidSize(_) | Error::Parse { .. } | Error::Disconnected { .. } => "graph",
            Error::Parameter(_) => "model",
            Error::OutOfRange(_) | Error::Uncovered(_) => "analytic",
            Error::Numeric(_) => "dynamics",
            Error::Io { .. } => "io",
        }
    }
}
