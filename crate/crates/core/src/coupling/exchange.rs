//! Exchange of impedance traces across the interface for unequal transmission operators.
//!
//! From outgoing traces `o_B = N + i T_B u` and `o_F = -N + i T_F u` of a common
//! Dirichlet trace `u` and Neumann functional `N`, the sum recovers
//! `u = -i (T_B + T_F)^-1 (o_B + o_F)` and the incoming traces are
//! `o_B - 2i T_B u` and `o_F - 2i T_F u`. The operator is that map times
//! `EXCHANGE_SIGN`; either sign gives an involution.

use num_complex::Complex64;

use super::{Representation, TraceVector};
use crate::error::{Error, Result};
use crate::krylov::dense::{real_matvec, RealCholesky};
use crate::krylov::RMat;

/// Global sign of the exchange operator used in the GOSM system.
pub const EXCHANGE_SIGN: f64 = -1.0;

#[derive(Debug, Clone)]
pub struct ExchangeOperator {
    pub t_b: RMat,
    pub t_f: RMat,
    pub sign: f64,
    sum: RealCholesky,
}

impl ExchangeOperator {
    pub fn new(t_b: &RMat, t_f: &RMat) -> Result<Self> {
        Self::with_sign(t_b, t_f, EXCHANGE_SIGN)
    }

    pub fn with_sign(t_b: &RMat, t_f: &RMat, sign: f64) -> Result<Self> {
        if t_b.shape() != t_f.shape() || t_b.nrows() != t_b.ncols() {
            return Err(Error::Dimension { expected: t_b.nrows(), got: t_f.nrows() });
        }
        if sign.abs() != 1.0 {
            return Err(Error::InvalidInput(format!("exchange sign must be +1 or -1, got {sign}")));
        }
        let sum = RealCholesky::new(&(t_b + t_f))?;
        Ok(Self { t_b: t_b.clone(), t_f: t_f.clone(), sign, sum })
    }

    pub fn len(&self) -> usize {
        self.t_b.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub(crate) fn apply_slices(&self, q_b: &[Complex64], q_f: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let i = Complex64::i();
        let s: Vec<Complex64> = q_b.iter().zip(q_f).map(|(a, b)| -i * (a + b)).collect();
        let u = self.sum.solve(&s);
        let tb = real_matvec(&self.t_b, &u);
        let tf = real_matvec(&self.t_f, &u);
        let out_b = q_b.iter().zip(&tb).map(|(q, t)| self.sign * (q - 2.0 * i * t)).collect();
        let out_f = q_f.iter().zip(&tf).map(|(q, t)| self.sign * (q - 2.0 * i * t)).collect();
        (out_b, out_f)
    }

    pub fn apply(&self, q_b: &TraceVector, q_f: &TraceVector) -> Result<(TraceVector, TraceVector)> {
        let n = self.len();
        let a = q_b.expect_len(Representation::Dual, n)?;
        let b = q_f.expect_len(Representation::Dual, n)?;
        let (x, y) = self.apply_slices(a, b);
        Ok((TraceVector::dual(x), TraceVector::dual(y)))
    }
}
