use thiserror::Error;

/// Errors raised by the toolkit. Every fallible operation returns one of these.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DcError {
    /// An argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// A structural invariant of a value was violated.
    #[error("invariant violation: {0}")]
    Invariant(String),
    /// A required precondition (validation step, disjointness, ...) was not met.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// Parameters are individually valid but unusable together.
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for DcError {
    fn from(e: std::io::Error) -> Self {
        DcError::Io(e.to_string())
    }
}

impl From<csv::Error> for DcError {
    fn from(e: csv::Error) -> Self {
        DcError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for DcError {
    fn from(e: serde_json::Error) -> Self {
        DcError::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, DcError>;
