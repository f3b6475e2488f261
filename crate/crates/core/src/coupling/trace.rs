//! Interface trace coefficients tagged with their representation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::krylov::dense::{real_matvec, RealCholesky};
use crate::krylov::RMat;

/// Primal: nodal values of a P1 function. Dual: values of the functional on each hat function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Primal,
    Dual,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceVector {
    pub values: Vec<Complex64>,
    pub representation: Representation,
}

impl TraceVector {
    pub fn primal(values: Vec<Complex64>) -> Self {
        Self { values, representation: Representation::Primal }
    }

    pub fn dual(values: Vec<Complex64>) -> Self {
        Self { values, representation: Representation::Dual }
    }

    pub fn zeros(n: usize, representation: Representation) -> Self {
        Self { values: vec![Complex64::default(); n], representation }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn expect(&self, representation: Representation) -> Result<&[Complex64]> {
        if self.representation == representation {
            Ok(&self.values)
        } else {
            Err(Error::Representation { expected: representation, got: self.representation })
        }
    }

    pub fn expect_len(&self, representation: Representation, n: usize) -> Result<&[Complex64]> {
        let v = self.expect(representation)?;
        if v.len() != n {
            return Err(Error::Dimension { expected: n, got: v.len() });
        }
        Ok(v)
    }

    /// Primal to dual through the mass matrix.
    pub fn to_dual(&self, mass: &RMat) -> Result<Self> {
        let v = self.expect(Representation::Primal)?;
        Ok(Self::dual(real_matvec(mass, v)))
    }

    /// Dual to primal by solving with the factorized mass matrix.
    pub fn to_primal(&self, mass: &RealCholesky) -> Result<Self> {
        let v = self.expect(Representation::Dual)?;
        Ok(Self::primal(mass.solve(v)))
    }
}
