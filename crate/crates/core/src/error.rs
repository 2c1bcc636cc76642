use thiserror::Error;

/// Errors raised by the class, lattice, pencil and LP routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid genus {genus}: {reason}")]
    InvalidGenus { genus: i64, reason: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("basis mismatch: genus {left} vs genus {right}")]
    BasisMismatch { left: u32, right: u32 },

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("unsupported symbol `{symbol}`: {reason}")]
    UnsupportedSymbol { symbol: String, reason: String },

    #[error("computation error: {0}")]
    Computation(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("linear program error: {0}")]
    Lp(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn genus(genus: impl Into<i64>, reason: impl Into<String>) -> Self {
        Error::InvalidGenus {
            genus: genus.into(),
            reason: reason.into(),
        }
    }
}
