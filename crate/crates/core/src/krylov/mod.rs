//! Linear algebra kernels: dense LU and Cholesky, SVD, sparse banded LU, GMRES.

pub mod dense;
pub mod gmres;
pub mod sparse;
pub mod svd;

pub use dense::{CMat, ComplexLu, RMat, RealCholesky};
pub use gmres::{gmres, GmresConfig, GmresReport};
pub use sparse::{BandLu, Csr};
pub use svd::{inverse_iteration_with, svd_full, svd_smallest, SingularPair};
