//! Spectral checks of the assembled matrices on a circle.

use num_complex::Complex64;

use super::{circle_symbol, BioKind, BioMatrices};
use crate::geometry::InterfaceMesh;
use crate::krylov::dense::{matvec, real_matvec};
use crate::krylov::{CMat, RMat};

fn mode(angles: &[f64], n: i32) -> Vec<Complex64> {
    angles.iter().map(|t| Complex64::from_polar(1.0, n as f64 * t)).collect()
}

fn pairing(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

impl BioMatrices {
    pub fn matrix(&self, op: BioKind) -> &CMat {
        match op {
            BioKind::V => &self.v,
            BioKind::K => &self.k,
            BioKind::Kp => &self.kp,
            BioKind::W => &self.w,
        }
    }

    /// `(v^H A v) / (v^H M v)` for the nodal Fourier mode `v = e^{i n theta}`.
    pub fn mode_eigenvalue(&self, op: BioKind, n: i32) -> Complex64 {
        let v = mode(&self.interface.angles(), n);
        pairing(&v, &matvec(self.matrix(op), &v)) / pairing(&v, &real_matvec(&self.mass, &v))
    }

    /// Largest relative deviation from the circle symbol over `|n| <= n_max`,
    /// for an interface that discretizes the circle of radius `radius`.
    pub fn symbol_error(&self, op: BioKind, n_max: i32, radius: f64) -> f64 {
        (-n_max..=n_max)
            .map(|n| {
                let s = circle_symbol(op, n, self.kappa, radius);
                (self.mode_eigenvalue(op, n) - s).norm() / s.norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Share of `|F^H A F|^2` off the diagonal, `F` the nodal Fourier basis.
pub fn fourier_offdiagonal_energy(a: &RMat, interface: &InterfaceMesh) -> f64 {
    let angles = interface.angles();
    let n = angles.len() as i32;
    let lo = -(n / 2);
    let basis: Vec<Vec<Complex64>> = (lo..lo + n).map(|m| mode(&angles, m)).collect();
    let images: Vec<Vec<Complex64>> = basis.iter().map(|v| real_matvec(a, v)).collect();
    let (mut diag, mut total) = (0.0, 0.0);
    for (i, u) in basis.iter().enumerate() {
        for (j, img) in images.iter().enumerate() {
            let e = pairing(u, img).norm_sqr();
            total += e;
            if i == j {
                diag += e;
            }
        }
    }
    (total - diag) / total
}

/// Fraction of discrete Fourier energy of nodal values carried by modes `+-p`.
pub fn mode_energy_fraction(values: &[Complex64], p: usize) -> f64 {
    let m = values.len();
    let coeff = |k: usize| -> f64 {
        values
            .iter()
            .enumerate()
            .map(|(j, v)| v * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * ((k * j) % m) as f64 / m as f64))
            .sum::<Complex64>()
            .norm_sqr()
    };
    let total: f64 = values.iter().map(|v| v.norm_sqr()).sum::<f64>() * m as f64;
    let part = if p == 0 || 2 * p == m { coeff(p % m) } else { coeff(p) + coeff(m - p) };
    part / total
}
