use thiserror::Error;

use crate::subset::Subset;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ground-set size mismatch: expected {expected}, got {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("n = {n} exceeds the enumeration limit of {limit} for {what}")]
    EnumerationLimit {
        what: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("weight vector has length {found}, system has {expected} hyperedges")]
    LengthMismatch { expected: usize, found: usize },

    #[error("oracle answers are inconsistent: {0}")]
    Inconsistent(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("not a cut function: {0}")]
    NotACutFunction(String),

    #[error("function is not symmetric at {0}")]
    NotSymmetric(Subset),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
}

/// Rejects `n` above `limit` for the named enumeration.
pub(crate) fn guard(what: &'static str, n: usize, limit: usize) -> Result<()> {
    if n > limit {
        Err(Error::EnumerationLimit { what, n, limit })
    } else {
        Ok(())
    }
}
