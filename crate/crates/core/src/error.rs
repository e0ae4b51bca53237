//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |M - M^dagger| entry = {defect:.3e}")]
    NotHermitian { defect: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("not a permutation of 1..=16: {0}")]
    InvalidPermutation(String),

    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("unknown state id: {0}")]
    UnknownStateId(String),

    #[error("argument out of domain: {0}")]
    DomainError(String),

    #[error("not a valid density matrix: {0}")]
    InvalidState(String),

    #[error("bisection endpoints do not straddle the predicate flip: {0}")]
    BracketError(String),

    #[error("matrix is not unitary: max |U U^dagger - I| entry = {defect:.3e}")]
    NotUnitary { defect: f64 },

    #[error("observable spectrum outside [-1, 1]: extreme eigenvalue {extreme}")]
    SpectrumOutOfRange { extreme: f64 },

    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),

    #[error("parse error: {0}")]
    ParseError(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
