//! Discrete Calderon projector diagnostics.
//!
//! The projector acts on primal coefficient pairs `(phi, p)` as
//! `P = I/2 + diag(M^-1, M^-1) [[K, V], [W, Kp]]`. Idempotency alone cannot
//! tell the projector from its complement `I - P`, so the defect also measures
//! how well `P` reproduces the Cauchy data of radiating point sources placed
//! inside the circle.

use num_complex::Complex64;

use super::BioMatrices;
use crate::geometry::Point;
use crate::krylov::dense::{matvec, weighted_norm};
use crate::krylov::RealCholesky;
use crate::specfun::hankel1_01;

/// Fourier modes `|n| <= TEST_MODES` probe idempotency.
const TEST_MODES: i32 = 8;

/// Point-source locations for the reproduction test.
const SOURCES: [Point; 3] = [[0.0, 0.0], [0.5, 0.3], [-0.9, 0.6]];

pub struct Projector<'a> {
    bios: &'a BioMatrices,
    mass: RealCholesky,
}

impl<'a> Projector<'a> {
    pub fn new(bios: &'a BioMatrices) -> Self {
        let mass = RealCholesky::new(&bios.mass).expect("P1 mass matrix is positive definite");
        Self { bios, mass }
    }

    pub fn apply(&self, phi: &[Complex64], p: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let b = self.bios;
        let top: Vec<Complex64> = matvec(&b.k, phi).iter().zip(matvec(&b.v, p)).map(|(x, y)| x + y).collect();
        let bottom: Vec<Complex64> = matvec(&b.w, phi).iter().zip(matvec(&b.kp, p)).map(|(x, y)| x + y).collect();
        let top = self.mass.solve(&top);
        let bottom = self.mass.solve(&bottom);
        (
            top.iter().zip(phi).map(|(c, x)| c + 0.5 * x).collect(),
            bottom.iter().zip(p).map(|(c, x)| c + 0.5 * x).collect(),
        )
    }

    /// Norm with the Neumann part scaled by `1/kappa` so both parts carry the same units.
    fn norm(&self, phi: &[Complex64], p: &[Complex64]) -> f64 {
        let a = weighted_norm(&self.bios.mass, phi);
        let b = weighted_norm(&self.bios.mass, p) / self.bios.kappa;
        a.hypot(b)
    }
}

fn diff(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `max ||(P^2 - P) x|| / ||P x||` over low Fourier modes placed in either component.
pub fn idempotency_defect(bios: &BioMatrices) -> f64 {
    let proj = Projector::new(bios);
    let angles = bios.interface.angles();
    let n = angles.len();
    let zero = vec![Complex64::default(); n];
    let mut worst: f64 = 0.0;
    for mode in -TEST_MODES..=TEST_MODES {
        let e: Vec<Complex64> = angles.iter().map(|t| Complex64::from_polar(1.0, mode as f64 * t)).collect();
        for (phi, p) in [(&e, &zero), (&zero, &e)] {
            let (a, b) = proj.apply(phi, p);
            let (a2, b2) = proj.apply(&a, &b);
            let num = proj.norm(&diff(&a2, &a), &diff(&b2, &b));
            let den = proj.norm(&a, &b);
            if den > 0.0 {
                worst = worst.max(num / den);
            }
        }
    }
    worst
}

/// Nodal Cauchy data `(u, n_B . grad u)` of `u = H^(1)_0(kappa |x - x0|)`.
pub fn point_source_traces(bios: &BioMatrices, source: Point) -> (Vec<Complex64>, Vec<Complex64>) {
    let iface = &bios.interface;
    let n = iface.len();
    let mut dir = Vec::with_capacity(n);
    let mut neu = Vec::with_capacity(n);
    for i in 0..n {
        let x = iface.nodes[i];
        // nodal normal of the circle through the node, pointing to the origin
        let rr = x[0].hypot(x[1]);
        let normal = [-x[0] / rr, -x[1] / rr];
        let z = [x[0] - source[0], x[1] - source[1]];
        let r = z[0].hypot(z[1]);
        let (h0, h1) = hankel1_01(bios.kappa * r);
        dir.push(h0);
        neu.push(-bios.kappa * h1 * (normal[0] * z[0] + normal[1] * z[1]) / r);
    }
    (dir, neu)
}

/// `max ||P x - x|| / ||x||` over point-source Cauchy data.
pub fn reproduction_defect(bios: &BioMatrices) -> f64 {
    let proj = Projector::new(bios);
    SOURCES
        .iter()
        .map(|&s| {
            let (d, nn) = point_source_traces(bios, s);
            let (a, b) = proj.apply(&d, &nn);
            proj.norm(&diff(&a, &d), &diff(&b, &nn)) / proj.norm(&d, &nn)
        })
        .fold(0.0, f64::max)
}

/// Larger of the idempotency and reproduction defects.
pub fn calderon_projector_defect(bios: &BioMatrices) -> f64 {
    idempotency_defect(bios).max(reproduction_defect(bios))
}
