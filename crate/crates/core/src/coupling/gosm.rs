//! Substructured formulation on interface impedance traces, solved matrix-free.
//!
//! Unknowns are the incoming traces `x = (q_B, q_F)` of both subdomains. With
//! `S = diag(S_B, S_F)` and the obstacle contribution `s_F` to the outgoing
//! trace of the volume side, the system reads `(I + Pi S) x = -Pi (0, s_F)`.

use std::cell::RefCell;

use num_complex::Complex64;

use super::exchange::ExchangeOperator;
use super::local_b::LocalOperatorB;
use super::{Representation, TraceVector};
use crate::error::{Error, Result};
use crate::fem::LocalOperatorF;
use crate::krylov::{gmres, GmresConfig, GmresReport};

pub struct GosmSystem<'a> {
    pub local_b: &'a LocalOperatorB,
    pub local_f: &'a LocalOperatorF<'a>,
    pub exchange: &'a ExchangeOperator,
    /// Stacked `(q_B, q_F)` right-hand side.
    pub rhs: Vec<Complex64>,
}

#[derive(Debug, Clone)]
pub struct GosmSolution {
    pub q_b: TraceVector,
    pub q_f: TraceVector,
    pub report: GmresReport,
}

pub fn gosm_build<'a>(
    local_b: &'a LocalOperatorB,
    local_f: &'a LocalOperatorF<'a>,
    exchange: &'a ExchangeOperator,
) -> Result<GosmSystem<'a>> {
    let n = local_b.len();
    if exchange.len() != n {
        return Err(Error::Dimension { expected: n, got: exchange.len() });
    }
    let s_f = local_f.source_outgoing()?;
    let s_f = s_f.expect_len(Representation::Dual, n)?;
    let zero = vec![Complex64::default(); n];
    let (a, b) = exchange.apply_slices(&zero, s_f);
    let rhs = a.into_iter().chain(b).map(|z| -z).collect();
    Ok(GosmSystem { local_b, local_f, exchange, rhs })
}

impl GosmSystem<'_> {
    pub fn len(&self) -> usize {
        self.rhs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rhs.is_empty()
    }

    /// `x + Pi S x`.
    pub fn apply(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.local_b.len();
        if x.len() != 2 * n {
            return Err(Error::Dimension { expected: 2 * n, got: x.len() });
        }
        let (xb, xf) = x.split_at(n);
        let sb = self.local_b.scattering(&TraceVector::dual(xb.to_vec()))?;
        let sf = self.local_f.scattering(&TraceVector::dual(xf.to_vec()))?;
        let (a, b) = self.exchange.apply_slices(&sb.values, &sf.values);
        Ok(x.iter().zip(a.iter().chain(&b)).map(|(u, v)| u + v).collect())
    }

    pub fn solve(&self, cfg: &GmresConfig) -> Result<GosmSolution> {
        let failure = RefCell::new(None);
        let (x, report) = gmres(
            |v| match self.apply(v) {
                Ok(y) => y,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    vec![Complex64::default(); v.len()]
                }
            },
            &self.rhs,
            cfg,
        );
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        let n = self.local_b.len();
        let (a, b) = x.split_at(n);
        Ok(GosmSolution { q_b: TraceVector::dual(a.to_vec()), q_f: TraceVector::dual(b.to_vec()), report })
    }
}
