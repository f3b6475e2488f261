//! Radial kernels for the Helmholtz and Yukawa boundary integral operators.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::specfun::{bessel_k0_log_split, bessel_k0_unchecked, hankel0_log_split, hankel1_01};

/// Standard two-dimensional constant, `G = (i/4) H_0(kappa r)`.
pub const HELMHOLTZ_CONSTANT: Complex64 = Complex64 { re: 0.0, im: 0.25 };

/// A radial kernel `G(r)` with the split `G(r) = lambda ln r + G_reg(r)` near zero.
pub trait RadialKernel: Sync {
    /// `G(r)` and `f(r)` with `grad G(z) = f(|z|) z`, for `r > 0`.
    fn value_and_gradient(&self, r: f64) -> (Complex64, Complex64);

    fn value(&self, r: f64) -> Complex64 {
        self.value_and_gradient(r).0
    }

    /// Coefficient `lambda` of the logarithmic singularity.
    fn log_coefficient(&self) -> Complex64;

    /// Smooth remainder `G(r) - lambda ln r`, finite at `r = 0`.
    fn regular_part(&self, r: f64) -> Complex64;

    /// Coefficient of the `(n_x . n_y) psi_a psi_b` term in the hypersingular form.
    fn normal_term(&self) -> f64;
}

/// `c H^(1)_0(kappa r)`.
#[derive(Debug, Clone, Copy)]
pub struct HelmholtzKernel {
    pub kappa: f64,
    pub constant: Complex64,
}

impl RadialKernel for HelmholtzKernel {
    fn value_and_gradient(&self, r: f64) -> (Complex64, Complex64) {
        let (h0, h1) = hankel1_01(self.kappa * r);
        (self.constant * h0, -self.constant * self.kappa * h1 / r)
    }

    fn log_coefficient(&self) -> Complex64 {
        self.constant * Complex64::new(0.0, 2.0 / PI)
    }

    fn regular_part(&self, r: f64) -> Complex64 {
        let (j0, rem) = hankel0_log_split(self.kappa, r);
        let log_part = if r > 0.0 { self.log_coefficient() * (j0 - 1.0) * r.ln() } else { Complex64::default() };
        log_part + self.constant * rem
    }

    fn normal_term(&self) -> f64 {
        -self.kappa * self.kappa
    }
}

/// `K_0(mu r) / (2 pi)`, the fundamental solution of `-Delta + mu^2`.
#[derive(Debug, Clone, Copy)]
pub struct YukawaKernel {
    pub mu: f64,
}

impl RadialKernel for YukawaKernel {
    fn value_and_gradient(&self, r: f64) -> (Complex64, Complex64) {
        // the hypersingular form only needs values
        (Complex64::new(bessel_k0_unchecked(self.mu * r) / (2.0 * PI), 0.0), Complex64::default())
    }

    fn log_coefficient(&self) -> Complex64 {
        Complex64::new(-1.0 / (2.0 * PI), 0.0)
    }

    fn regular_part(&self, r: f64) -> Complex64 {
        let (i0, rem) = bessel_k0_log_split(self.mu, r);
        let log_part = if r > 0.0 { -(i0 - 1.0) * r.ln() } else { 0.0 };
        Complex64::new((log_part + rem) / (2.0 * PI), 0.0)
    }

    fn normal_term(&self) -> f64 {
        self.mu * self.mu
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{hankel1, mod_bessel_k};

    #[test]
    fn split_reassembles_helmholtz() {
        let k = HelmholtzKernel { kappa: 4.3, constant: HELMHOLTZ_CONSTANT };
        for &r in &[1e-5_f64, 0.01, 0.2, 0.9] {
            let g = k.log_coefficient() * r.ln() + k.regular_part(r);
            let want = HELMHOLTZ_CONSTANT * hankel1(0, 4.3 * r).unwrap();
            assert!((g - want).norm() < 1e-12 * want.norm());
            assert!((k.value(r) - want).norm() < 1e-13 * want.norm());
        }
        assert!((k.log_coefficient() - Complex64::new(-0.5 / PI, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn split_reassembles_yukawa() {
        let k = YukawaKernel { mu: 4.3 };
        for &r in &[1e-5_f64, 0.01, 0.2, 0.9] {
            let g = k.log_coefficient() * r.ln() + k.regular_part(r);
            let want = mod_bessel_k(0, 4.3 * r).unwrap() / (2.0 * PI);
            assert!((g.re - want).abs() < 1e-12 * (want.abs() + r.ln().abs()));
        }
    }

    #[test]
    fn gradient_matches_finite_difference() {
        let k = HelmholtzKernel { kappa: 3.0, constant: HELMHOLTZ_CONSTANT };
        let r = 0.7;
        let d = 1e-6;
        let fd = (k.value(r + d) - k.value(r - d)) / (2.0 * d);
        let (_, f) = k.value_and_gradient(r);
        assert!((fd - f * r).norm() < 1e-8);
    }
}
