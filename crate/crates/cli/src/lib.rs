//! Experiment harness for the FEM-BEM coupling lab: resonance sweeps, kernel
//! studies, boundary operator verification and single solves.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod bio;
pub mod config;
pub mod kernel;
pub mod output;
pub mod solve;
pub mod svg;
pub mod sweep;

pub use config::Config;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Compute(#[from] fembem::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            _ => 2,
        }
    }
}
