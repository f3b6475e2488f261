//! Restarted GMRES for matrix-free complex linear maps.

use num_complex::Complex64;

use super::dense::norm2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmresConfig {
    pub tol: f64,
    pub restart: usize,
    pub max_iter: usize,
}

impl Default for GmresConfig {
    fn default() -> Self {
        Self { tol: 1e-8, restart: 200, max_iter: 400 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GmresReport {
    pub iterations: usize,
    /// Relative residual estimates, one per inner iteration, starting with 1.
    pub residual_history: Vec<f64>,
    /// Recomputed `||b - A x|| / ||b||` of the returned iterate.
    pub final_residual: f64,
    pub converged: bool,
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn axpy(alpha: Complex64, x: &[Complex64], y: &mut [Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    // returns (c, s) with [c s; -conj(s) c] [a; b] = [r; 0]
    let na = a.norm();
    if na == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let nb = b.norm();
    let r = na.hypot(nb);
    let c = na / r;
    let s = (a / na) * b.conj() / r;
    (c, s)
}

/// Solves `apply(x) = b` from a zero initial guess.
pub fn gmres<F>(apply: F, b: &[Complex64], cfg: &GmresConfig) -> (Vec<Complex64>, GmresReport)
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    let n = b.len();
    let mut x = vec![Complex64::default(); n];
    let bnorm = norm2(b);
    let mut history = vec![1.0];
    if bnorm == 0.0 {
        return (x, GmresReport { iterations: 0, residual_history: history, final_residual: 0.0, converged: true });
    }
    let m = cfg.restart.max(1);
    let mut iterations = 0;
    let mut residual = b.to_vec();
    let mut rel = 1.0;
    while iterations < cfg.max_iter {
        let beta = norm2(&residual);
        rel = beta / bnorm;
        if rel <= cfg.tol {
            break;
        }
        let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(m + 1);
        basis.push(residual.iter().map(|z| z / beta).collect());
        let mut h: Vec<Vec<Complex64>> = Vec::with_capacity(m);
        let mut cs: Vec<(f64, Complex64)> = Vec::with_capacity(m);
        let mut g = vec![Complex64::new(beta, 0.0)];
        let mut k = 0;
        while k < m && iterations < cfg.max_iter {
            let mut w = apply(&basis[k]);
            let mut col = vec![Complex64::default(); k + 2];
            for _pass in 0..2 {
                for (j, v) in basis.iter().enumerate() {
                    let hij = dot(v, &w);
                    col[j] += hij;
                    axpy(-hij, v, &mut w);
                }
            }
            let wn = norm2(&w);
            col[k + 1] = Complex64::new(wn, 0.0);
            for (j, &(c, s)) in cs.iter().enumerate() {
                let (a, b) = (col[j], col[j + 1]);
                col[j] = a * c + s * b;
                col[j + 1] = -s.conj() * a + b * c;
            }
            let (c, s) = givens(col[k], col[k + 1]);
            let (a, b) = (col[k], col[k + 1]);
            col[k] = a * c + s * b;
            col[k + 1] = Complex64::default();
            cs.push((c, s));
            let gk = g[k];
            g[k] = gk * c;
            g.push(-s.conj() * gk);
            h.push(col);
            k += 1;
            iterations += 1;
            let est = g[k].norm() / bnorm;
            history.push(est);
            if est <= cfg.tol || wn <= 1e-14 * bnorm {
                break;
            }
            basis.push(w.iter().map(|z| z / wn).collect());
        }
        // back substitution on the k x k triangle
        let mut y = vec![Complex64::default(); k];
        for i in (0..k).rev() {
            let mut s = g[i];
            for j in i + 1..k {
                s -= h[j][i] * y[j];
            }
            y[i] = s / h[i][i];
        }
        for (j, yj) in y.iter().enumerate() {
            axpy(*yj, &basis[j], &mut x);
        }
        let ax = apply(&x);
        residual = b.iter().zip(&ax).map(|(p, q)| p - q).collect();
        rel = norm2(&residual) / bnorm;
    }
    let converged = rel <= cfg.tol;
    (x, GmresReport { iterations, residual_history: history, final_residual: rel, converged })
}
