use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operands live in different ranks.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Operands were built with incompatible truncation settings.
    #[error("configuration error: {0}")]
    Config(String),
    #[error("not invertible: {0}")]
    Inversion(String),
    #[error("parse error: {0}")]
    Parse(String),
    /// An internal consistency check failed. This is a bug, not a caller error.
    #[error("integrity violation: {0}")]
    Integrity(String),
}
