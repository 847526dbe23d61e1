//! One error type for the whole crate. Every rejected input carries enough
//! context to act on; parse errors keep their line number for diagnostics.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("{0} is not a prime power")]
    NonPrimePower(u64),
    #[error("coefficient ring mismatch: {0}")]
    RingMismatch(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("degree out of range: {0}")]
    DegreeOutOfRange(String),
    #[error("polynomial is not homogeneous: {0}")]
    Inhomogeneous(String),
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("exact division failed: {0}")]
    DivisionFailed(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("rank deficiency: {0}")]
    RankDeficient(String),
    #[error("missing data: {0}")]
    MissingData(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
