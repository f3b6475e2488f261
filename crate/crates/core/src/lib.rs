//! Finite element and boundary element coupling for two-dimensional Helmholtz
//! scattering, with direct and substructured (GOSM) solvers and diagnostics for
//! spurious resonances.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod bem;
pub mod coupling;
pub mod error;
pub mod fem;
pub mod geometry;
pub mod krylov;
pub mod specfun;

pub use error::{Error, Result};
