use thiserror::Error;

use crate::specfun::SpecfunError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("trace representation mismatch: expected {expected:?}, got {got:?}")]
    Representation { expected: crate::coupling::Representation, got: crate::coupling::Representation },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("matrix is singular at pivot {0}")]
    Singular(usize),
    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
}

pub type Result<T> = std::result::Result<T, Error>;
