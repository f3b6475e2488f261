//! Singular value decompositions backed by `nalgebra`.

use nalgebra::DVector;
use num_complex::Complex64;

use super::dense::{norm2, CMat, ComplexLu};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct SingularPair {
    pub sigma: f64,
    pub left: Vec<Complex64>,
    pub right: Vec<Complex64>,
}

/// Full SVD with singular values in ascending order.
#[derive(Debug, Clone)]
pub struct FullSvd {
    pub u: CMat,
    pub singular_values: Vec<f64>,
    pub v: CMat,
}

pub fn svd_full(a: &CMat) -> Result<FullSvd> {
    let svd = a.clone().svd(true, true);
    let (Some(u), Some(vt)) = (svd.u, svd.v_t) else {
        return Err(Error::InvalidInput("SVD did not return singular vectors".into()));
    };
    let s = svd.singular_values;
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&i, &j| s[i].total_cmp(&s[j]));
    let v = vt.adjoint();
    let u = CMat::from_fn(u.nrows(), order.len(), |i, k| u[(i, order[k])]);
    let v = CMat::from_fn(v.nrows(), order.len(), |i, k| v[(i, order[k])]);
    Ok(FullSvd { u, singular_values: order.iter().map(|&i| s[i]).collect(), v })
}

/// Singular values only, ascending.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    let mut s: Vec<f64> = a.singular_values().iter().copied().collect();
    s.sort_by(f64::total_cmp);
    s
}

/// The `k` smallest singular pairs from a full SVD.
pub fn svd_smallest(a: &CMat, k: usize) -> Result<Vec<SingularPair>> {
    let svd = svd_full(a)?;
    Ok((0..k.min(svd.singular_values.len()))
        .map(|i| SingularPair {
            sigma: svd.singular_values[i],
            left: svd.u.column(i).iter().copied().collect(),
            right: svd.v.column(i).iter().copied().collect(),
        })
        .collect())
}

/// Smallest singular pair by inverse iteration on `A^H A` using an existing LU.
///
/// Converges quickly when the smallest singular value is well separated, which
/// is the situation near a resonance; callers needing certainty use `svd_smallest`.
pub fn smallest_pair_inverse_iteration(lu: &ComplexLu, iterations: usize) -> Result<SingularPair> {
    inverse_iteration_with(lu.dim(), |x| lu.solve(x), |x| lu.solve_adjoint(x), iterations)
}

/// Inverse iteration given `x -> A^-1 x` and `x -> A^-H x`.
pub fn inverse_iteration_with<S, T>(n: usize, solve: S, solve_adjoint: T, iterations: usize) -> Result<SingularPair>
where
    S: Fn(&[Complex64]) -> Result<Vec<Complex64>>,
    T: Fn(&[Complex64]) -> Result<Vec<Complex64>>,
{
    let mut v: Vec<Complex64> =
        (0..n).map(|i| Complex64::new(1.0 + (i as f64 * 0.7).sin(), (i as f64 * 1.3).cos())).collect();
    let nv = norm2(&v);
    v.iter_mut().for_each(|z| *z /= nv);
    let mut sigma = f64::INFINITY;
    for _ in 0..iterations {
        let w = solve_adjoint(&solve(&v)?)?;
        let nw = norm2(&w);
        if !(nw > 0.0) || !nw.is_finite() {
            return Err(Error::Singular(0));
        }
        let next = (1.0 / nw).sqrt();
        v = w.iter().map(|z| z / nw).collect();
        let converged = (next - sigma).abs() <= 1e-12 * next;
        sigma = next;
        if converged {
            break;
        }
    }
    let u = solve(&v)?;
    let nu = norm2(&u);
    Ok(SingularPair { sigma: 1.0 / nu, left: u.iter().map(|z| z / nu).collect(), right: v })
}

pub fn to_dvector(x: &[Complex64]) -> DVector<Complex64> {
    DVector::from_column_slice(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::krylov::dense::matvec;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random(n: usize, seed: u64) -> CMat {
        let mut rng = StdRng::seed_from_u64(seed);
        CMat::from_fn(n, n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    #[test]
    fn identity_has_unit_singular_values() {
        let s = singular_values(&CMat::identity(7, 7));
        assert!(s.iter().all(|v| (v - 1.0).abs() < 1e-14));
    }

    #[test]
    fn rank_one_has_nine_tiny_values() {
        let u: Vec<Complex64> = (0..10).map(|i| Complex64::new(i as f64 + 1.0, 0.5)).collect();
        let v: Vec<Complex64> = (0..10).map(|i| Complex64::new(1.0, -(i as f64))).collect();
        let a = CMat::from_fn(10, 10, |i, j| u[i] * v[j]);
        let s = singular_values(&a);
        assert!(s[..9].iter().all(|x| *x <= 1e-12 * s[9].max(1.0)), "{s:?}");
    }

    #[test]
    fn reconstruction_of_random_matrix() {
        let a = random(100, 11);
        let svd = svd_full(&a).unwrap();
        let sig = CMat::from_diagonal(&DVector::from_iterator(
            100,
            svd.singular_values.iter().map(|&s| Complex64::new(s, 0.0)),
        ));
        let rec = &svd.u * sig * svd.v.adjoint();
        assert!((rec - &a).norm() <= 1e-10 * a.norm());
    }

    #[test]
    fn smallest_pairs_satisfy_definition() {
        let a = random(40, 2);
        let scale = a.norm();
        for p in svd_smallest(&a, 3).unwrap() {
            let av = matvec(&a, &p.right);
            let r: Vec<Complex64> = av.iter().zip(&p.left).map(|(x, u)| x - u * p.sigma).collect();
            assert!(norm2(&r) <= 1e-8 * scale);
        }
    }

    #[test]
    fn inverse_iteration_matches_svd() {
        let mut a = random(30, 4);
        // plant a small singular value
        let svd = svd_full(&a).unwrap();
        let (u0, v0) = (svd.u.column(0).clone_owned(), svd.v.column(0).clone_owned());
        let s0 = svd.singular_values[0];
        a -= (u0 * v0.adjoint()) * Complex64::new(s0 - 1e-6, 0.0);
        let lu = ComplexLu::new(a.clone()).unwrap();
        let p = smallest_pair_inverse_iteration(&lu, 50).unwrap();
        let s = singular_values(&a);
        assert!((p.sigma / s[0] - 1.0).abs() < 1e-8, "{} vs {}", p.sigma, s[0]);
    }
}
