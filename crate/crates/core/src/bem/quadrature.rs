//! Gauss-Legendre rules and closed-form logarithmic moments on the unit interval.

use std::sync::OnceLock;

/// Nodes and weights of the `n`-point Gauss-Legendre rule mapped to `[0, 1]`.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

pub fn gauss_legendre(n: usize) -> GaussRule {
    assert!(n > 0, "rule needs at least one point");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    GaussRule { nodes, weights }
}

macro_rules! cached_rule {
    ($name:ident, $n:expr) => {
        pub fn $name() -> &'static GaussRule {
            static RULE: OnceLock<GaussRule> = OnceLock::new();
            RULE.get_or_init(|| gauss_legendre($n))
        }
    };
}

cached_rule!(rule6, 6);
cached_rule!(rule8, 8);
cached_rule!(rule10, 10);
cached_rule!(rule12, 12);

/// `int_0^1 int_0^1 psi_a(s) psi_b(t) ln|s - t| ds dt` for `psi_0 = 1 - s`, `psi_1 = s`.
pub const LOG_MOMENTS: [[f64; 2]; 2] = [[-7.0 / 16.0, -5.0 / 16.0], [-5.0 / 16.0, -7.0 / 16.0]];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        for n in 1..=12 {
            let r = gauss_legendre(n);
            assert!((r.weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            for deg in 0..2 * n {
                let q: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(deg as i32)).sum();
                assert!((q - 1.0 / (deg as f64 + 1.0)).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn nodes_are_sorted_inside_interval() {
        let r = gauss_legendre(10);
        assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
        assert!(r.nodes[0] > 0.0 && r.nodes[9] < 1.0);
    }

    #[test]
    fn log_moments_match_graded_quadrature() {
        // independent route: split at the diagonal, substitute t = s u and
        // s = 1 - (1 - t) u on the two halves, grade u = v^4 near the singular end
        let g = gauss_legendre(40);
        let psi = |a: usize, x: f64| if a == 0 { 1.0 - x } else { x };
        for a in 0..2 {
            for b in 0..2 {
                let mut total = 0.0;
                for (s, ws) in g.nodes.iter().zip(&g.weights) {
                    for (v, wv) in g.nodes.iter().zip(&g.weights) {
                        let u = v.powi(4);
                        let du = 4.0 * v.powi(3);
                        // t in (0, s): t = s (1 - u), |s - t| = s u
                        let t = s * (1.0 - u);
                        total += ws * wv * du * s * psi(a, *s) * psi(b, t) * (s * u).ln();
                        // t in (s, 1): t = s + (1 - s) u
                        let t = s + (1.0 - s) * u;
                        total += ws * wv * du * (1.0 - s) * psi(a, *s) * psi(b, t) * ((1.0 - s) * u).ln();
                    }
                }
                assert!((total - LOG_MOMENTS[a][b]).abs() < 1e-6, "{a}{b}: {total}");
            }
        }
    }
}
