use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the optimizer, the benchmark suite and the harness.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller broke an operation's precondition (length mismatch, too few
    /// candidates, out-of-bounds decision vector, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Unknown problem, unsupported parameter combination or invalid run
    /// configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// No feasible point survived reference-front construction.
    #[error("empty feasible front for {problem} at resolution {resolution}: {detail}")]
    EmptyFront {
        problem: String,
        resolution: usize,
        detail: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed file {path}: {detail}")]
    Format { path: PathBuf, detail: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
