//! Coupling operators, local resolvents, exchange, GOSM and direct solves.

pub mod direct;
pub mod exchange;
pub mod gosm;
pub mod kernel;
pub mod local_b;
pub mod trace;

pub use direct::{calderon_first_residual, direct_coupling_solve, CoupledSolution};
pub use exchange::{ExchangeOperator, EXCHANGE_SIGN};
pub use gosm::{gosm_build, GosmSolution, GosmSystem};
pub use kernel::{kernel_study, KernelRecord, TraceWeights, Weighting};
pub use local_b::{coupling_matrix, local_operator_b, CouplingKind, LocalOperatorB};
pub use trace::{Representation, TraceVector};
