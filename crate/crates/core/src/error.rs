use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("extension degree must be at least 1")]
    ZeroDegree,

    #[error("field size {p}^{k} does not fit the supported word range")]
    FieldTooLarge { p: u64, k: u32 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("element does not belong to F_{q}")]
    ForeignElement { q: u64 },

    /// An operation was asked to run past a configured size budget.
    #[error("capability: {0}")]
    Capability(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("not found: {0}")]
    NotFound(String),

    /// A computed quantity disagreed with a value the mathematics guarantees.
    #[error("verification failed: {0}")]
    Verification(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: malformed log line {line}: {source}")]
    LogFormat {
        path: PathBuf,
        line: usize,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub fn is_capability(&self) -> bool {
        matches!(self, Error::Capability(_))
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
