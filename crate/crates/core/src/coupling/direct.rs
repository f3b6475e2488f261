//! Monolithic FEM-BEM system, used as the reference for the substructured solver.

use num_complex::Complex64;

use super::local_b::{set_block, CouplingKind};
use super::TraceVector;
use crate::bem::BioMatrices;
use crate::error::{Error, Result};
use crate::fem::FemSubstructure;
use crate::krylov::dense::{matvec, norm2};
use crate::krylov::{CMat, ComplexLu};

#[derive(Debug, Clone)]
pub struct CoupledSolution {
    /// Scattered field at every mesh vertex.
    pub volume: Vec<Complex64>,
    /// Interface values, primal.
    pub dirichlet: TraceVector,
    /// Neumann density `n_B . grad u`, primal coefficients.
    pub neumann: TraceVector,
    pub condition_estimate: f64,
}

/// Eliminates the FEM interior, then solves
/// `[[S_H + X, Y], [M/2 - K, -V]] (u_S, p) = (f_S, 0)` with `(X, Y) = (0, M)` for
/// Johnson-Nedelec and `(W, M/2 + Kp)` for Costabel.
pub fn direct_coupling_solve(kind: CouplingKind, sub: &FemSubstructure, bios: &BioMatrices) -> Result<CoupledSolution> {
    let n = bios.len();
    if sub.schur.nrows() != n {
        return Err(Error::Dimension { expected: n, got: sub.schur.nrows() });
    }
    if (sub.kappa - bios.kappa).abs() > 1e-14 * bios.kappa {
        return Err(Error::InvalidInput(format!("wavenumbers differ: {} vs {}", sub.kappa, bios.kappa)));
    }
    let mut a = CMat::zeros(2 * n, 2 * n);
    let fem_block = sub.schur.map(|v| Complex64::new(v, 0.0));
    match kind {
        CouplingKind::JohnsonNedelec => {
            set_block(&mut a, 0, 0, &fem_block);
            set_block(&mut a, 0, n, &bios.mass.map(|v| Complex64::new(v, 0.0)));
        }
        CouplingKind::Costabel => {
            set_block(&mut a, 0, 0, &(fem_block + &bios.w));
            set_block(&mut a, 0, n, &bios.half_mass_plus(&bios.kp, 1.0));
        }
    }
    set_block(&mut a, n, 0, &bios.half_mass_plus(&bios.k, -1.0));
    set_block(&mut a, n, n, &(-&bios.v));
    let lu = ComplexLu::new(a)?;
    let mut rhs = sub.f_sigma.clone();
    rhs.resize(2 * n, Complex64::default());
    let mut x = lu.solve(&rhs)?;
    let p = x.split_off(n);
    let volume = sub.extend(&x, true);
    Ok(CoupledSolution {
        volume,
        dirichlet: TraceVector::primal(x),
        neumann: TraceVector::primal(p),
        condition_estimate: lu.condition_estimate(),
    })
}

/// `||(M/2 - K) phi - V p|| / (||(M/2) phi|| + ||V p||)` for primal `phi`, `p`.
pub fn calderon_first_residual(bios: &BioMatrices, phi: &[Complex64], p: &[Complex64]) -> f64 {
    let a = matvec(&bios.half_mass_plus(&bios.k, -1.0), phi);
    let vp = matvec(&bios.v, p);
    let half_m: Vec<Complex64> = crate::krylov::dense::real_matvec(&bios.mass, phi).iter().map(|z| 0.5 * z).collect();
    let r: Vec<Complex64> = a.iter().zip(&vp).map(|(x, y)| x - y).collect();
    norm2(&r) / (norm2(&half_m) + norm2(&vp))
}
