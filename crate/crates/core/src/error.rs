use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("input is not group-like")]
    NotGroupLike,
    #[error("input is not a Lie element")]
    NotLie,
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("empty word")]
    EmptyWord,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("time mismatch: {0} vs {1}")]
    TimeMismatch(String, String),
    #[error("modulus of {0} is irrational")]
    IrrationalModulus(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

impl Error {
    pub fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }

    /// Shift a parse position by `offset`, used when a sub-parser works on a slice.
    pub fn offset(self, offset: usize) -> Self {
        match self {
            Error::Parse { position, message } => Error::Parse {
                position: position + offset,
                message,
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
