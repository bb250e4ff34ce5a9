use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input violated a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// An exponential argument left the representable range.
    #[error("exponent {argument} exceeds the overflow guard of ±{limit}")]
    Overflow { argument: f64, limit: f64 },

    #[error("solve time {elapsed:.0} s at height {height} exceeds the sanity cap of {cap:.0} s")]
    RunawayDifficulty { height: u64, elapsed: f64, cap: f64 },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
