//! Boundary integral operators on the interface polygon.
//!
//! Conventions: the Helmholtz kernel is `G(z) = (i/4) H^(1)_0(kappa |z|)` and
//! the normal `n_B` points toward the origin. With these,
//! `V` uses `G(x - y)`, `K` uses `n_B(y) . grad G(x - y)`, `Kp` uses
//! `n_B(x) . grad G(x - y)`, the Galerkin matrices satisfy `K^T = -Kp`, and the
//! Calderon projector of the unbounded region is `I/2 + [[K, V], [W, Kp]]`.

pub mod assembly;
pub mod calderon;
pub mod kernels;
pub mod quadrature;
pub mod symbols;
pub mod verify;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{InterfaceMesh, Point};
use crate::krylov::{CMat, RMat, RealCholesky};
use crate::specfun::hankel1;

pub use assembly::interface_mass;
pub use calderon::calderon_projector_defect;
pub use kernels::{HelmholtzKernel, YukawaKernel, HELMHOLTZ_CONSTANT};
pub use symbols::{circle_symbol, BioKind};

/// Galerkin matrices of the Helmholtz boundary integral operators, bilinear pairing.
#[derive(Debug, Clone)]
pub struct BioMatrices {
    pub kappa: f64,
    pub constant: Complex64,
    pub interface: InterfaceMesh,
    pub mass: RMat,
    pub v: CMat,
    pub k: CMat,
    pub kp: CMat,
    pub w: CMat,
}

/// Galerkin hypersingular operator of `-Delta + kappa^2`, used as transmission operator.
#[derive(Debug, Clone)]
pub struct YukawaTransmission {
    pub kappa: f64,
    pub wy: RMat,
    pub cholesky: RealCholesky,
}

/// `(i/4) H^(1)_0(kappa |x|)`.
pub fn green_kernel(kappa: f64, x: Point) -> Result<Complex64> {
    let r = x[0].hypot(x[1]);
    if r == 0.0 {
        return Err(Error::InvalidInput("green kernel is singular at the origin".into()));
    }
    Ok(HELMHOLTZ_CONSTANT * hankel1(0, kappa * r)?)
}

pub fn assemble_bios(interface: &InterfaceMesh, kappa: f64) -> Result<BioMatrices> {
    assemble_bios_with_constant(interface, kappa, HELMHOLTZ_CONSTANT)
}

/// Assembly with an arbitrary kernel constant `c` in `c H^(1)_0(kappa r)`.
pub fn assemble_bios_with_constant(interface: &InterfaceMesh, kappa: f64, constant: Complex64) -> Result<BioMatrices> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::InvalidInput(format!("wavenumber must be positive, got {kappa}")));
    }
    let kernel = HelmholtzKernel { kappa, constant };
    let a = assembly::assemble(&kernel, interface, true);
    Ok(BioMatrices {
        kappa,
        constant,
        interface: interface.clone(),
        mass: interface_mass(interface),
        v: a.v,
        k: a.k,
        kp: a.kp,
        w: a.w,
    })
}

pub fn assemble_yukawa_hypersingular(interface: &InterfaceMesh, kappa: f64) -> Result<YukawaTransmission> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::InvalidInput(format!("wavenumber must be positive, got {kappa}")));
    }
    let a = assembly::assemble(&YukawaKernel { mu: kappa }, interface, false);
    let wy = a.w.map(|z| z.re);
    let wy = 0.5 * (&wy + wy.transpose());
    let cholesky = RealCholesky::new(&wy)?;
    Ok(YukawaTransmission { kappa, wy, cholesky })
}

impl BioMatrices {
    pub fn len(&self) -> usize {
        self.mass.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `M/2 + sign * op`, e.g. `M/2 + Kp` or `M/2 - K`.
    pub fn half_mass_plus(&self, op: &CMat, sign: f64) -> CMat {
        op * Complex64::new(sign, 0.0) + crate::krylov::dense::to_complex(&self.mass) * Complex64::new(0.5, 0.0)
    }

    /// Largest relative asymmetry of `V` and `W`, and `||K^T + Kp|| / ||K||`.
    pub fn symmetry_defects(&self) -> (f64, f64, f64) {
        let rel = |a: &CMat, b: &CMat, scale: &CMat| (a - b).norm() / scale.norm();
        (
            rel(&self.v, &self.v.transpose(), &self.v),
            rel(&self.w, &self.w.transpose(), &self.w),
            (self.k.transpose() + &self.kp).norm() / self.k.norm(),
        )
    }
}
