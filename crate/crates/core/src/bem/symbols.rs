//! Fourier symbols of the boundary integral operators on a circle.
//!
//! With `z = kappa R`, `H = H^(1)` and the normal pointing to the centre:
//! `V: (i pi R / 2) J_n H_n`, `K: (i pi z / 2) J'_n H_n - 1/2`,
//! `Kp: -(i pi z / 2) J_n H'_n - 1/2`, `W: -(i pi kappa^2 R / 2) J'_n H'_n`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::specfun::{bessel_jy_sequence, derivative_from_sequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BioKind {
    V,
    K,
    Kp,
    W,
}

impl BioKind {
    pub const ALL: [BioKind; 4] = [BioKind::V, BioKind::K, BioKind::Kp, BioKind::W];

    pub fn name(self) -> &'static str {
        match self {
            BioKind::V => "V",
            BioKind::K => "K",
            BioKind::Kp => "Kp",
            BioKind::W => "W",
        }
    }
}

/// `(J_n, J'_n, H_n, H'_n)` at `z`.
fn bessel_data(n: u32, z: f64) -> (f64, f64, Complex64, Complex64) {
    let m = n as usize;
    let (j, y) = bessel_jy_sequence(m + 1, z);
    let jp = derivative_from_sequence(&j, m);
    let yp = derivative_from_sequence(&y, m);
    (j[m], jp, Complex64::new(j[m], y[m]), Complex64::new(jp, yp))
}

/// Symbol of `op` on mode `e^{i n theta}` of the circle of radius `r`.
pub fn circle_symbol(op: BioKind, n: i32, kappa: f64, r: f64) -> Complex64 {
    let z = kappa * r;
    let (j, jp, h, hp) = bessel_data(n.unsigned_abs(), z);
    let i = Complex64::i();
    match op {
        BioKind::V => i * (PI * r / 2.0) * j * h,
        BioKind::K => i * (PI * z / 2.0) * jp * h - 0.5,
        BioKind::Kp => -i * (PI * z / 2.0) * j * hp - 0.5,
        BioKind::W => -i * (PI * kappa * kappa * r / 2.0) * jp * hp,
    }
}

/// Largest residual of the two mode-wise Calderon identities for `|n| <= n_max`:
/// the exterior Cauchy data `(H_n, -kappa H'_n)` are reproduced by the projector.
pub fn calderon_mode_residual(kappa: f64, r: f64, n_max: u32) -> f64 {
    let z = kappa * r;
    (0..=n_max as i32)
        .map(|n| {
            let (_, _, h, hp) = bessel_data(n as u32, z);
            let (dir, neu) = (h, -kappa * hp);
            let sv = circle_symbol(BioKind::V, n, kappa, r);
            let sk = circle_symbol(BioKind::K, n, kappa, r);
            let skp = circle_symbol(BioKind::Kp, n, kappa, r);
            let sw = circle_symbol(BioKind::W, n, kappa, r);
            let first = (0.5 - sk) * dir - sv * neu;
            let second = sw * dir + (skp - 0.5) * neu;
            (first.norm() / dir.norm()).max(second.norm() / neu.norm())
        })
        .fold(0.0, f64::max)
}
