//! Dense factorizations on column-major `nalgebra` storage.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type RMat = DMatrix<f64>;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct ComplexLu {
    lu: CMat,
    perm: Vec<usize>,
    norm1: f64,
    /// First exactly zero pivot, if any.
    singular_at: Option<usize>,
}

pub fn norm1(a: &CMat) -> f64 {
    a.column_iter().map(|c| c.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

impl ComplexLu {
    pub fn new(mut a: CMat) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::Dimension { expected: n, got: a.ncols() });
        }
        let norm1 = norm1(&a);
        let mut perm: Vec<usize> = (0..n).collect();
        let mut singular_at = None;
        for k in 0..n {
            let col = a.column(k);
            let (mut p, mut best) = (k, 0.0);
            for i in k..n {
                let v = col[i].norm_sqr();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 {
                singular_at.get_or_insert(k);
                continue;
            }
            if p != k {
                a.swap_rows(k, p);
                perm.swap(k, p);
            }
            let data = a.as_mut_slice();
            let (left, right) = data.split_at_mut((k + 1) * n);
            let colk = &mut left[k * n..];
            let inv = colk[k].inv();
            for v in &mut colk[k + 1..] {
                *v *= inv;
            }
            let colk = &colk[k + 1..];
            for colj in right.chunks_exact_mut(n) {
                let f = colj[k];
                if f == ZERO {
                    continue;
                }
                for (x, l) in colj[k + 1..].iter_mut().zip(colk) {
                    *x -= f * l;
                }
            }
        }
        Ok(Self { lu: a, perm, norm1, singular_at })
    }

    pub fn dim(&self) -> usize {
        self.lu.nrows()
    }

    pub fn is_singular(&self) -> bool {
        self.singular_at.is_some()
    }

    fn check(&self) -> Result<()> {
        match self.singular_at {
            Some(k) => Err(Error::Singular(k)),
            None => Ok(()),
        }
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check()?;
        let n = self.dim();
        if b.len() != n {
            return Err(Error::Dimension { expected: n, got: b.len() });
        }
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        let data = self.lu.as_slice();
        for k in 0..n {
            let xk = x[k];
            if xk != ZERO {
                let col = &data[k * n + k + 1..(k + 1) * n];
                for (xi, l) in x[k + 1..].iter_mut().zip(col) {
                    *xi -= xk * l;
                }
            }
        }
        for k in (0..n).rev() {
            x[k] /= data[k * n + k];
            let xk = x[k];
            if xk != ZERO {
                let col = &data[k * n..k * n + k];
                for (xi, u) in x[..k].iter_mut().zip(col) {
                    *xi -= xk * u;
                }
            }
        }
        Ok(x)
    }

    /// Solves `A^T x = b` (conjugate = false) or `A^H x = b` (conjugate = true).
    pub fn solve_transposed(&self, b: &[Complex64], conjugate: bool) -> Result<Vec<Complex64>> {
        self.check()?;
        let n = self.dim();
        if b.len() != n {
            return Err(Error::Dimension { expected: n, got: b.len() });
        }
        let data = self.lu.as_slice();
        let c = |z: Complex64| if conjugate { z.conj() } else { z };
        let mut y = b.to_vec();
        // U^T y = b, column k of U is row k of U^T
        for k in 0..n {
            let col = &data[k * n..k * n + k];
            let mut s = y[k];
            for (u, yi) in col.iter().zip(&y[..k]) {
                s -= c(*u) * yi;
            }
            y[k] = s / c(data[k * n + k]);
        }
        for k in (0..n).rev() {
            let col = &data[k * n + k + 1..(k + 1) * n];
            let mut s = y[k];
            for (l, yi) in col.iter().zip(&y[k + 1..]) {
                s -= c(*l) * yi;
            }
            y[k] = s;
        }
        let mut x = vec![ZERO; n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = y[k];
        }
        Ok(x)
    }

    pub fn solve_adjoint(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        self.solve_transposed(b, true)
    }

    /// Hager-Higham estimate of the 1-norm condition number. Infinite when singular.
    pub fn condition_estimate(&self) -> f64 {
        if self.is_singular() {
            return f64::INFINITY;
        }
        let n = self.dim();
        let mut x = vec![Complex64::new(1.0 / n as f64, 0.0); n];
        let mut est = 0.0;
        for _ in 0..5 {
            let Ok(y) = self.solve(&x) else { return f64::INFINITY };
            let new_est: f64 = y.iter().map(|z| z.norm()).sum();
            let xi: Vec<Complex64> = y
                .iter()
                .map(|z| {
                    let m = z.norm();
                    if m > 0.0 {
                        z / m
                    } else {
                        Complex64::new(1.0, 0.0)
                    }
                })
                .collect();
            let Ok(z) = self.solve_adjoint(&xi) else { return f64::INFINITY };
            if new_est <= est {
                break;
            }
            est = new_est;
            let (j, zmax) =
                z.iter()
                    .enumerate()
                    .map(|(i, v)| (i, v.norm()))
                    .fold((0, 0.0), |acc, v| if v.1 > acc.1 { v } else { acc });
            let zx: f64 = z.iter().zip(&x).map(|(a, b)| (a.conj() * b).re).sum();
            if zmax <= zx {
                break;
            }
            x = vec![ZERO; n];
            x[j] = Complex64::new(1.0, 0.0);
        }
        est * self.norm1
    }
}

/// Cholesky factorization of a real symmetric positive definite matrix.
#[derive(Debug, Clone)]
pub struct RealCholesky {
    l: RMat,
}

impl RealCholesky {
    pub fn new(a: &RMat) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::Dimension { expected: n, got: a.ncols() });
        }
        let mut l = a.clone();
        for j in 0..n {
            let mut d = l[(j, j)];
            for k in 0..j {
                d -= l[(j, k)] * l[(j, k)];
            }
            if !(d > 0.0) {
                return Err(Error::NotPositiveDefinite(format!("pivot {j} is {d:e}")));
            }
            let d = d.sqrt();
            l[(j, j)] = d;
            for i in j + 1..n {
                let mut s = l[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / d;
            }
            for i in 0..j {
                l[(i, j)] = 0.0;
            }
        }
        Ok(Self { l })
    }

    /// Lower factor `L` with `A = L L^T`.
    pub fn factor(&self) -> &RMat {
        &self.l
    }

    pub fn solve_lower(&self, b: &mut [Complex64]) {
        let n = self.l.nrows();
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= b[k] * self.l[(i, k)];
            }
            b[i] = s / self.l[(i, i)];
        }
    }

    pub fn solve_upper(&self, b: &mut [Complex64]) {
        let n = self.l.nrows();
        for i in (0..n).rev() {
            let mut s = b[i];
            for k in i + 1..n {
                s -= b[k] * self.l[(k, i)];
            }
            b[i] = s / self.l[(i, i)];
        }
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let mut x = b.to_vec();
        self.solve_lower(&mut x);
        self.solve_upper(&mut x);
        x
    }
}

pub fn to_complex(a: &RMat) -> CMat {
    a.map(|v| Complex64::new(v, 0.0))
}

pub fn matvec(a: &CMat, x: &[Complex64]) -> Vec<Complex64> {
    let n = a.nrows();
    let mut y = vec![ZERO; n];
    for (j, col) in a.as_slice().chunks_exact(n).enumerate() {
        let xj = x[j];
        if xj == ZERO {
            continue;
        }
        for (yi, a) in y.iter_mut().zip(col) {
            *yi += a * xj;
        }
    }
    y
}

pub fn real_matvec(a: &RMat, x: &[Complex64]) -> Vec<Complex64> {
    let n = a.nrows();
    let mut y = vec![ZERO; n];
    for (j, col) in a.as_slice().chunks_exact(n).enumerate() {
        let xj = x[j];
        for (yi, a) in y.iter_mut().zip(col) {
            *yi += xj * a;
        }
    }
    y
}

pub fn norm2(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `sqrt(x^H M x)` for a real symmetric positive weight `M`.
pub fn weighted_norm(m: &RMat, x: &[Complex64]) -> f64 {
    let mx = real_matvec(m, x);
    x.iter().zip(&mx).map(|(a, b)| (a.conj() * b).re).sum::<f64>().max(0.0).sqrt()
}
