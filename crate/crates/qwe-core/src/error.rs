//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by the enumerator machinery.
///
/// The variants are grouped by failure class so that callers (notably the
/// CLI) can map them onto stable exit codes.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller violated an operation contract (wrong vector kind, mismatched
    /// dimensions, invalid parameters, inconsistent inputs).
    #[error("contract violation: {0}")]
    Contract(String),

    /// An input exceeds a documented resource limit (dense-state qubit cap,
    /// enumerable group size, tableau width).
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// Float-mode arithmetic would overflow or has lost meaning.
    #[error("precision: {0}")]
    Precision(String),

    /// An iterative numerical routine failed to converge.
    #[error("numeric: {0}")]
    Numeric(String),

    /// Malformed input data (vector files, stabilizer files, sample sets).
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::ResourceLimit(msg.into())
    }
}
