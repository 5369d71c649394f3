use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("operation requires a one-dimensional measure, got dimension {0}")]
    NotOneDimensional(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("bound precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown model `{0}`")]
    UnknownModel(String),
}

pub type Result<T> = std::result::Result<T, Error>;
