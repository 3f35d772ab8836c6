//! Library error type.

use std::fmt;

/// Errors produced by library operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input outside an operation's domain (non-finite, wrong sign, out of range).
    Domain(String),
    /// A numerical procedure failed: divergence, non-finite intermediate,
    /// tolerance not reached within the iteration budget.
    Numerical(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Numerical(msg) => write!(f, "numerical error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

/// Shorthand for a domain error.
pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

/// Shorthand for a numerical error.
pub(crate) fn numerical(msg: impl Into<String>) -> Error {
    Error::Numerical(msg.into())
}
