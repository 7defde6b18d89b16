//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("operator or state lengths differ: {0} vs {1} sites")]
    LengthMismatch(usize, usize),

    #[error("chain of {0} sites exceeds the dense-state capacity of {1}")]
    Capacity(usize, usize),

    #[error("invalid chain specification: {0}")]
    InvalidSpec(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("eigensolver failure: {0}")]
    Solver(String),

    #[error("construction is not defined here: {0}")]
    Unconstructible(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}
