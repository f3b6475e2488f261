//! Near-kernels of the local boundary operators and of the impedance operators.
//!
//! Singular pairs are computed for the operator expressed in weighted
//! coordinates. Dirichlet-type unknowns `phi` are measured in a norm
//! `phi^H G_D phi` and Neumann-type unknowns `p` (primal coefficients) in
//! `(M p)^H G_D^-1 (M p)`; residuals of rows tested with Dirichlet-type
//! functions are measured with `G_D^-1`, the others with `M^-1 G_D M^-1`.
//! [`Weighting::Energy`] takes `G_D = T`, the Yukawa hypersingular matrix, so
//! that both trace spaces carry their natural energy norms; [`Weighting::Mass`]
//! takes plain `L^2` norms for both kinds of unknown.

use num_complex::Complex64;

use super::local_b::{coupling_matrix, CouplingKind, LocalOperatorB};
use crate::bem::{BioMatrices, YukawaTransmission};
use crate::error::{Error, Result};
use crate::krylov::dense::{real_matvec, weighted_norm};
use crate::krylov::{inverse_iteration_with, svd_smallest, CMat, RMat, SingularPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weighting {
    Mass,
    Energy,
}

/// Index of the Dirichlet-type (0) or Neumann-type (1) slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Dirichlet = 0,
    Neumann = 1,
}

/// Dense weights `row`, `col` and their inverses for both slots.
#[derive(Debug, Clone)]
pub struct TraceWeights {
    pub weighting: Weighting,
    row: [RMat; 2],
    row_inv: [RMat; 2],
    col: [RMat; 2],
    col_inv: [RMat; 2],
}

fn lower_factor(a: &RMat) -> Result<RMat> {
    a.clone().cholesky().map(|c| c.l()).ok_or_else(|| Error::NotPositiveDefinite("weight matrix".into()))
}

fn lower_inverse(l: &RMat) -> Result<RMat> {
    let n = l.nrows();
    l.solve_lower_triangular(&RMat::identity(n, n)).ok_or(Error::Singular(0))
}

impl TraceWeights {
    pub fn new(weighting: Weighting, mass: &RMat, t: &RMat) -> Result<Self> {
        let lm = lower_factor(mass)?;
        let lmi = lower_inverse(&lm)?;
        Ok(match weighting {
            Weighting::Mass => Self {
                weighting,
                row: [lmi.clone(), lmi.clone()],
                row_inv: [lm.clone(), lm.clone()],
                col: [lmi.transpose(), lmi.transpose()],
                col_inv: [lm.transpose(), lm.transpose()],
            },
            Weighting::Energy => {
                let lt = lower_factor(t)?;
                let lti = lower_inverse(&lt)?;
                let minv = lmi.transpose() * &lmi;
                Self {
                    weighting,
                    row: [lti.clone(), lt.transpose() * &minv],
                    row_inv: [lt.clone(), mass * lti.transpose()],
                    col: [lti.transpose(), &minv * &lt],
                    col_inv: [lt.transpose(), &lti * mass],
                }
            }
        })
    }

    /// `row[r] a col[c]`.
    pub fn weigh(&self, a: &CMat, r: Slot, c: Slot) -> CMat {
        let re = a.map(|z| z.re);
        let im = a.map(|z| z.im);
        let (l, rr) = (&self.row[r as usize], &self.col[c as usize]);
        let wr = l * re * rr;
        let wi = l * im * rr;
        CMat::from_fn(a.nrows(), a.ncols(), |i, j| Complex64::new(wr[(i, j)], wi[(i, j)]))
    }

    /// Physical coefficients from weighted coordinates.
    pub fn unweigh(&self, x: &[Complex64], c: Slot) -> Vec<Complex64> {
        real_matvec(&self.col[c as usize], x)
    }

    fn weigh_block_operator(&self, a: &CMat) -> CMat {
        let n = a.nrows() / 2;
        let mut out = CMat::zeros(2 * n, 2 * n);
        for (bi, r) in [Slot::Dirichlet, Slot::Neumann].into_iter().enumerate() {
            for (bj, c) in [Slot::Dirichlet, Slot::Neumann].into_iter().enumerate() {
                let block = a.view((bi * n, bj * n), (n, n)).into_owned();
                out.view_mut((bi * n, bj * n), (n, n)).copy_from(&self.weigh(&block, r, c));
            }
        }
        out
    }
}

/// Smallest singular pair of `local` in weighted coordinates by inverse
/// iteration on its existing factorization. Singular vectors are returned in
/// weighted coordinates.
pub fn local_sigma_min(local: &LocalOperatorB, weights: &TraceWeights, iterations: usize) -> Result<SingularPair> {
    let n = local.len();
    let split_apply = |mats: [&RMat; 2], x: &[Complex64], transpose: bool| -> Vec<Complex64> {
        let (a, b) = x.split_at(n);
        let f = |m: &RMat, v: &[Complex64]| if transpose { real_matvec(&m.transpose(), v) } else { real_matvec(m, v) };
        let mut out = f(mats[0], a);
        out.extend(f(mats[1], b));
        out
    };
    let row_inv_t = [weights.row_inv[0].transpose(), weights.row_inv[1].transpose()];
    let col_inv_t = [weights.col_inv[0].transpose(), weights.col_inv[1].transpose()];
    inverse_iteration_with(
        2 * n,
        |x| {
            let y = local.lu().solve(&split_apply([&weights.row_inv[0], &weights.row_inv[1]], x, false))?;
            Ok(split_apply([&weights.col_inv[0], &weights.col_inv[1]], &y, false))
        },
        |x| {
            let y = local.lu().solve_adjoint(&split_apply([&col_inv_t[0], &col_inv_t[1]], x, false))?;
            Ok(split_apply([&row_inv_t[0], &row_inv_t[1]], &y, false))
        },
        iterations,
    )
}

/// Dominant `|n|` of the discrete Fourier expansion of nodal values on equispaced nodes.
pub fn dominant_mode(values: &[Complex64]) -> usize {
    let m = values.len();
    let energy = |k: usize| -> f64 {
        let c: Complex64 = values
            .iter()
            .enumerate()
            .map(|(j, v)| v * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * ((k * j) % m) as f64 / m as f64))
            .sum();
        c.norm_sqr()
    };
    let mut best = (0, energy(0));
    for k in 1..=m / 2 {
        let e = if 2 * k == m { energy(k) } else { energy(k) + energy(m - k) };
        if e > best.1 {
            best = (k, e);
        }
    }
    best.0
}

/// Principal angle in degrees between two vectors in the `M` inner product.
pub fn principal_angle(mass: &RMat, a: &[Complex64], b: &[Complex64]) -> f64 {
    let mb = real_matvec(mass, b);
    let inner: Complex64 = a.iter().zip(&mb).map(|(x, y)| x.conj() * y).sum();
    let c = inner.norm() / (weighted_norm(mass, a) * weighted_norm(mass, b));
    c.min(1.0).acos().to_degrees()
}

#[derive(Debug, Clone)]
pub struct KernelRecord {
    pub kind: CouplingKind,
    pub kappa: f64,
    pub sigma_min: f64,
    /// Dirichlet part of the smallest right singular vector, primal.
    pub phi: Vec<Complex64>,
    /// Neumann part, primal coefficients.
    pub p: Vec<Complex64>,
    /// `||p - i M^-1 T phi||_M / ||p||_M`
    pub r_jn: f64,
    /// `||phi||_M / ||p||_M`
    pub r_c: f64,
    pub mode_dirichlet: usize,
    pub mode_neumann: usize,
}

impl KernelRecord {
    /// Fourier mode of the component that carries the kernel for this coupling.
    pub fn dominant_mode(&self) -> usize {
        match self.kind {
            CouplingKind::JohnsonNedelec => self.mode_dirichlet,
            CouplingKind::Costabel => self.mode_neumann,
        }
    }

    /// The structure metric that vanishes on the kernel of this coupling.
    pub fn structure_metric(&self) -> f64 {
        match self.kind {
            CouplingKind::JohnsonNedelec => self.r_jn,
            CouplingKind::Costabel => self.r_c,
        }
    }
}

/// Matrix of `A - i B* T B` (not factorized).
pub fn local_matrix(kind: CouplingKind, bios: &BioMatrices, t: &YukawaTransmission) -> CMat {
    let mut a = coupling_matrix(kind, bios);
    let n = bios.len();
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] -= Complex64::new(0.0, t.wy[(i, j)]);
        }
    }
    a
}

/// Full-SVD kernel study of the local operator in the chosen weighting.
pub fn kernel_study(
    kind: CouplingKind,
    bios: &BioMatrices,
    t: &YukawaTransmission,
    weighting: Weighting,
) -> Result<KernelRecord> {
    let n = bios.len();
    let weights = TraceWeights::new(weighting, &bios.mass, &t.wy)?;
    let a = weights.weigh_block_operator(&local_matrix(kind, bios, t));
    let pair = svd_smallest(&a, 1)?.remove(0);
    let (vphi, vp) = pair.right.split_at(n);
    let phi = weights.unweigh(vphi, Slot::Dirichlet);
    let p = weights.unweigh(vp, Slot::Neumann);
    let mass = &bios.mass;
    let chol = crate::krylov::RealCholesky::new(mass)?;
    let t_phi = chol.solve(&real_matvec(&t.wy, &phi));
    let jn_defect: Vec<Complex64> = p.iter().zip(&t_phi).map(|(a, b)| a - Complex64::i() * b).collect();
    let p_norm = weighted_norm(mass, &p);
    Ok(KernelRecord {
        kind,
        kappa: bios.kappa,
        sigma_min: pair.sigma,
        r_jn: weighted_norm(mass, &jn_defect) / p_norm,
        r_c: weighted_norm(mass, &phi) / p_norm,
        mode_dirichlet: dominant_mode(&phi),
        mode_neumann: dominant_mode(&p),
        phi,
        p,
    })
}

fn mass_inverse_times(mass: &RMat, b: &CMat) -> Result<CMat> {
    let chol = mass.clone().cholesky().ok_or_else(|| Error::NotPositiveDefinite("mass".into()))?;
    let re = chol.solve(&b.map(|z| z.re));
    let im = chol.solve(&b.map(|z| z.im));
    Ok(CMat::from_fn(b.nrows(), b.ncols(), |i, j| Complex64::new(re[(i, j)], im[(i, j)])))
}

/// `D* = (M/2 - K) - i V M^-1 T`, acting on Dirichlet-type unknowns.
pub fn impedance_bio(bios: &BioMatrices, t: &RMat) -> Result<CMat> {
    let minv_t = mass_inverse_times(&bios.mass, &t.map(|v| Complex64::new(v, 0.0)))?;
    Ok(bios.half_mass_plus(&bios.k, -1.0) - &bios.v * minv_t * Complex64::i())
}

/// `D = (M/2 + Kp) - i T M^-1 V`, acting on Neumann-type unknowns.
pub fn impedance_bio_adjoint(bios: &BioMatrices, t: &RMat) -> Result<CMat> {
    let minv_v = mass_inverse_times(&bios.mass, &bios.v)?;
    Ok(bios.half_mass_plus(&bios.kp, 1.0) - t.map(|v| Complex64::new(v, 0.0)) * minv_v * Complex64::i())
}

/// Smallest singular value and physical right singular vector of a single
/// interface operator with the given row and column slots.
pub fn near_kernel(a: &CMat, weights: &TraceWeights, row: Slot, col: Slot) -> Result<(f64, Vec<Complex64>)> {
    let pair = svd_smallest(&weights.weigh(a, row, col), 1)?.remove(0);
    Ok((pair.sigma, weights.unweigh(&pair.right, col)))
}

/// Kernel probe of `D*`: smallest singular value and Dirichlet-type vector.
pub fn impedance_bio_kernel(bios: &BioMatrices, t: &RMat, weights: &TraceWeights) -> Result<(f64, Vec<Complex64>)> {
    near_kernel(&impedance_bio(bios, t)?, weights, Slot::Neumann, Slot::Dirichlet)
}

/// Pairwise principal angles (degrees) among the near-kernels of `V`,
/// `M/2 + Kp` and `D`, in that order: `(V, M/2+Kp)`, `(V, D)`, `(M/2+Kp, D)`.
pub fn remark_angles(bios: &BioMatrices, t: &RMat, weights: &TraceWeights) -> Result<[f64; 3]> {
    let (_, kv) = near_kernel(&bios.v, weights, Slot::Neumann, Slot::Neumann)?;
    let (_, kk) = near_kernel(&bios.half_mass_plus(&bios.kp, 1.0), weights, Slot::Dirichlet, Slot::Neumann)?;
    let (_, kd) = near_kernel(&impedance_bio_adjoint(bios, t)?, weights, Slot::Dirichlet, Slot::Neumann)?;
    let m = &bios.mass;
    Ok([principal_angle(m, &kv, &kk), principal_angle(m, &kv, &kd), principal_angle(m, &kk, &kd)])
}
