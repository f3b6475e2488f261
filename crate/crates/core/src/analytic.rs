//! Plane-wave scattering by the sound-soft unit disk and the table of
//! spurious resonances of the radius-2 interface.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::InterfaceMesh;
use crate::krylov::dense::real_matvec;
use crate::krylov::RMat;
use crate::specfun::{bessel_j_sequence, bessel_jy_sequence, derivative_from_sequence, zeros_below};

/// Scattered field `u_S = -sum_p e^{i p theta} c_p H_|p|(kappa r)` with
/// `c_p = i^|p| J_|p|(kappa) / H_|p|(kappa)`, so that `u_S = -exp(i kappa x_1)` on `r = 1`.
#[derive(Debug, Clone)]
pub struct MieSeries {
    pub kappa: f64,
    pub truncation: usize,
    /// `c_p` for `p = 0..=truncation`.
    pub coefficients: Vec<Complex64>,
}

impl MieSeries {
    /// Series accurate for `1 <= r <= r_max`, truncated at `ceil(kappa r_max) + 15`.
    pub fn new(kappa: f64, r_max: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) || !(r_max >= 1.0) {
            return Err(Error::InvalidInput(format!("bad Mie parameters kappa={kappa}, r_max={r_max}")));
        }
        Self::with_truncation(kappa, (kappa * r_max).ceil() as usize + 15)
    }

    pub fn with_truncation(kappa: f64, truncation: usize) -> Result<Self> {
        if truncation > crate::specfun::MAX_ORDER as usize - 1 {
            return Err(Error::InvalidInput(format!("truncation {truncation} too large")));
        }
        let (j, y) = bessel_jy_sequence(truncation, kappa);
        let coefficients =
            (0..=truncation).map(|p| Complex64::i().powu(p as u32) * j[p] / Complex64::new(j[p], y[p])).collect();
        Ok(Self { kappa, truncation, coefficients })
    }

    /// Whether the last retained coefficient is negligible (below 1e-12 of the largest).
    pub fn truncation_ok(&self) -> bool {
        let max = self.coefficients.iter().map(|c| c.norm()).fold(0.0, f64::max);
        self.coefficients.last().is_some_and(|c| c.norm() <= 1e-12 * max)
    }

    /// `(u_S, d u_S / dr)` at polar coordinates `(r, theta)`.
    pub fn eval_with_derivative(&self, r: f64, theta: f64) -> (Complex64, Complex64) {
        let z = self.kappa * r;
        let pmax = self.truncation;
        let (j, y) = bessel_jy_sequence(pmax + 1, z);
        let mut u = Complex64::default();
        let mut du = Complex64::default();
        for p in 0..=pmax {
            let h = Complex64::new(j[p], y[p]);
            let hp = Complex64::new(derivative_from_sequence(&j, p), derivative_from_sequence(&y, p));
            let weight = if p == 0 { 1.0 } else { 2.0 * (p as f64 * theta).cos() };
            let c = self.coefficients[p] * weight;
            u -= c * h;
            du -= c * hp * self.kappa;
        }
        (u, du)
    }

    pub fn eval(&self, r: f64, theta: f64) -> Complex64 {
        self.eval_with_derivative(r, theta).0
    }

    pub fn dr(&self, r: f64, theta: f64) -> Complex64 {
        self.eval_with_derivative(r, theta).1
    }

    /// `u_S` at a Cartesian point.
    pub fn eval_point(&self, x: [f64; 2]) -> Complex64 {
        self.eval(x[0].hypot(x[1]), x[1].atan2(x[0]))
    }
}

/// Exact traces on the interface in the representations used by the solvers.
#[derive(Debug, Clone)]
pub struct ReferenceTraces {
    /// Nodal values of `u_S`.
    pub dirichlet: Vec<Complex64>,
    /// Nodal values of `n_B . grad u_S = -d u_S / dr`.
    pub neumann: Vec<Complex64>,
    /// `M gamma_N - i T_B gamma_D`, dual.
    pub q_b: Vec<Complex64>,
    /// `-M gamma_N - i T_F gamma_D`, dual.
    pub q_f: Vec<Complex64>,
}

pub fn reference_traces(
    series: &MieSeries,
    interface: &InterfaceMesh,
    mass: &RMat,
    t_b: &RMat,
    t_f: &RMat,
) -> Result<ReferenceTraces> {
    let n = interface.len();
    for m in [mass, t_b, t_f] {
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::Dimension { expected: n, got: m.nrows() });
        }
    }
    let (dirichlet, neumann): (Vec<_>, Vec<_>) = interface
        .nodes
        .iter()
        .map(|x| {
            let (u, du) = series.eval_with_derivative(x[0].hypot(x[1]), x[1].atan2(x[0]));
            (u, -du)
        })
        .unzip();
    let mn = real_matvec(mass, &neumann);
    let tbd = real_matvec(t_b, &dirichlet);
    let tfd = real_matvec(t_f, &dirichlet);
    let i = Complex64::i();
    let q_b = mn.iter().zip(&tbd).map(|(a, b)| a - i * b).collect();
    let q_f = mn.iter().zip(&tfd).map(|(a, b)| -a - i * b).collect();
    Ok(ReferenceTraces { dirichlet, neumann, q_b, q_f })
}

/// One spurious resonance `kappa = j_{p,m} / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resonance {
    pub order: u32,
    pub index: u32,
    pub zero: f64,
    pub kappa: f64,
}

/// Highest Bessel order scanned for resonances.
pub const RESONANCE_MAX_ORDER: u32 = 60;

/// Interface radius whose interior Dirichlet eigenvalues are the resonances.
pub const INTERFACE_RADIUS: f64 = 2.0;

/// Resonances in `[a, b]`, sorted by wavenumber.
pub fn resonances_in(a: f64, b: f64) -> Result<Vec<Resonance>> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidInput(format!("bad interval [{a}, {b}]")));
    }
    let mut out = Vec::new();
    for order in 0..=RESONANCE_MAX_ORDER {
        for (m, zero) in zeros_below(order, b * INTERFACE_RADIUS, usize::MAX).into_iter().enumerate() {
            let kappa = zero / INTERFACE_RADIUS;
            if kappa >= a {
                out.push(Resonance { order, index: m as u32 + 1, zero, kappa });
            }
        }
    }
    out.sort_by(|x, y| x.kappa.total_cmp(&y.kappa));
    Ok(out)
}

/// `|J_order(zero)|`, used to confirm table entries.
pub fn zero_residual(r: &Resonance) -> f64 {
    let n = r.order as usize;
    bessel_j_sequence(n, r.zero)[n].abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sound_soft_condition() {
        let s = MieSeries::new(4.3, 2.0).unwrap();
        for k in 0..24 {
            let t = 2.0 * PI * k as f64 / 24.0;
            let target = -Complex64::from_polar(1.0, 4.3 * t.cos());
            assert!((s.eval(1.0, t) - target).norm() < 1e-8);
        }
    }

    #[test]
    fn truncation_is_converged() {
        let s = MieSeries::new(4.3, 2.0).unwrap();
        assert!(s.truncation_ok());
        let d = MieSeries::with_truncation(4.3, 2 * s.truncation).unwrap();
        let (a, b) = (s.eval(2.0, 0.0), d.eval(2.0, 0.0));
        assert!((a - b).norm() <= 1e-10 * b.norm());
    }

    #[test]
    fn fourier_coefficients_of_the_field() {
        let s = MieSeries::new(4.3, 2.0).unwrap();
        let m = 64;
        let samples: Vec<Complex64> = (0..m).map(|k| s.eval(2.0, 2.0 * PI * k as f64 / m as f64)).collect();
        for p in 0..6i32 {
            let coeff: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(k, u)| u * Complex64::from_polar(1.0, -2.0 * PI * (p * k as i32) as f64 / m as f64))
                .sum::<Complex64>()
                / m as f64;
            let h = crate::specfun::hankel1(p as u32, 8.6).unwrap();
            let expected = -s.coefficients[p as usize] * h;
            assert!((coeff - expected).norm() < 1e-8, "p={p}");
        }
    }

    #[test]
    fn radial_derivative_matches_difference_quotient() {
        let s = MieSeries::new(4.3, 3.0).unwrap();
        let h = 1e-5;
        for &(r, t) in &[(1.3, 0.2), (2.0, 0.0), (2.7, 2.5)] {
            let fd = (s.eval(r + h, t) - s.eval(r - h, t)) / (2.0 * h);
            assert!((fd - s.dr(r, t)).norm() < 1e-6 * (1.0 + fd.norm()));
        }
    }

    #[test]
    fn sommerfeld_decay() {
        // coefficients beyond order 40 are far below rounding at kappa = 4.3
        let s = MieSeries::with_truncation(4.3, 40).unwrap();
        let a = s.eval(50.0, 0.0).norm() * 50f64.sqrt();
        let b = s.eval(100.0, 0.0).norm() * 100f64.sqrt();
        assert!((a - b).abs() <= 0.01 * b);
    }

    #[test]
    fn resonance_table_on_the_sweep_interval() {
        let t = resonances_in(4.28, 4.42).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!((t[0].order, t[0].index), (0, 3));
        assert_eq!((t[1].order, t[1].index), (5, 1));
        assert!((t[0].kappa - 4.3268639565).abs() < 1e-8);
        assert!((t[1].kappa - 4.3857419080).abs() < 1e-8);
        assert!(t.iter().all(|r| zero_residual(r) < 1e-12));
    }

    #[test]
    fn resonance_table_is_sorted_and_complete_on_a_wider_interval() {
        let t = resonances_in(0.5, 3.0).unwrap();
        assert!(t.windows(2).all(|w| w[0].kappa <= w[1].kappa));
        // j_{0,1}, j_{1,1}, j_{2,1} and j_{0,2} lie below 6
        assert_eq!(t.len(), 4);
        assert!((t[0].zero - 2.404825557695773).abs() < 1e-9);
        assert!(resonances_in(3.0, 1.0).is_err());
    }
}
