//! Galerkin assembly over panel pairs of a closed polygon with P1 hat functions.

use num_complex::Complex64;
use rayon::prelude::*;

use super::kernels::RadialKernel;
use super::quadrature::{rule10, rule12, rule6, rule8, LOG_MOMENTS};
use crate::geometry::{InterfaceMesh, Point};
use crate::krylov::{CMat, RMat};

type Local = [[Complex64; 2]; 2];

const ZERO_LOCAL: Local = [[Complex64 { re: 0.0, im: 0.0 }; 2]; 2];

/// Local 2x2 blocks for one panel pair; rows index test functions on `p`.
#[derive(Debug, Clone, Copy)]
pub struct PairBlocks {
    pub v: Local,
    pub k: Local,
    pub kp: Local,
}

fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn lerp(a: Point, b: Point, t: f64) -> Point {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

/// Panels closer than this many panel lengths use the 12-point rule.
const NEAR_FACTOR: f64 = 2.5;
/// Panels farther than this many panel lengths use the 6-point rule.
const FAR_FACTOR: f64 = 8.0;

fn regular_pair<G: RadialKernel>(kernel: &G, mesh: &InterfaceMesh, p: usize, q: usize, gradient: bool) -> PairBlocks {
    let (a0, a1) = mesh.panel(p);
    let (b0, b1) = mesh.panel(q);
    let (lp, lq) = (mesh.lengths[p], mesh.lengths[q]);
    let (np, nq) = (mesh.normals[p], mesh.normals[q]);
    let dmid = {
        let d = sub(mesh.midpoint(p), mesh.midpoint(q));
        dot(d, d).sqrt()
    };
    let lmax = lp.max(lq);
    let rule = if dmid < NEAR_FACTOR * lmax {
        rule12()
    } else if dmid < FAR_FACTOR * lmax {
        rule8()
    } else {
        rule6()
    };
    let mut out = PairBlocks { v: ZERO_LOCAL, k: ZERO_LOCAL, kp: ZERO_LOCAL };
    for (s, ws) in rule.nodes.iter().zip(&rule.weights) {
        let x = lerp(a0, a1, *s);
        let psi_x = [1.0 - s, *s];
        for (t, wt) in rule.nodes.iter().zip(&rule.weights) {
            let y = lerp(b0, b1, *t);
            let psi_y = [1.0 - t, *t];
            let z = sub(x, y);
            let r = dot(z, z).sqrt();
            let w = ws * wt * lp * lq;
            let (g, f) = kernel.value_and_gradient(r);
            let gw = g * w;
            let (fk, fkp) = if gradient {
                (f * (w * dot(nq, z)), f * (w * dot(np, z)))
            } else {
                (Complex64::default(), Complex64::default())
            };
            for a in 0..2 {
                for b in 0..2 {
                    let pp = psi_x[a] * psi_y[b];
                    out.v[a][b] += gw * pp;
                    if gradient {
                        out.k[a][b] += fk * pp;
                        out.kp[a][b] += fkp * pp;
                    }
                }
            }
        }
    }
    out
}

/// Panels sharing one vertex. Both panels are parametrized from the shared
/// vertex; Duffy coordinates with quadratic grading remove the corner singularity.
fn adjacent_pair<G: RadialKernel>(
    kernel: &G,
    mesh: &InterfaceMesh,
    p: usize,
    q: usize,
    p_shared_local: usize,
    q_shared_local: usize,
    gradient: bool,
) -> PairBlocks {
    let (a0, a1) = mesh.panel(p);
    let (b0, b1) = mesh.panel(q);
    let (v, pa) = if p_shared_local == 0 { (a0, a1) } else { (a1, a0) };
    let qb = if q_shared_local == 0 { b1 } else { b0 };
    let (lp, lq) = (mesh.lengths[p], mesh.lengths[q]);
    let (np, nq) = (mesh.normals[p], mesh.normals[q]);
    let hat = |shared: usize, sigma: f64| -> [f64; 2] {
        if shared == 0 {
            [1.0 - sigma, sigma]
        } else {
            [sigma, 1.0 - sigma]
        }
    };
    let rule = rule10();
    let mut out = PairBlocks { v: ZERO_LOCAL, k: ZERO_LOCAL, kp: ZERO_LOCAL };
    let mut add = |sigma: f64, tau: f64, weight: f64| {
        let x = lerp(v, pa, sigma);
        let y = lerp(v, qb, tau);
        let z = sub(x, y);
        let r = dot(z, z).sqrt();
        let w = weight * lp * lq;
        let (g, f) = kernel.value_and_gradient(r);
        let psi_x = hat(p_shared_local, sigma);
        let psi_y = hat(q_shared_local, tau);
        for a in 0..2 {
            for b in 0..2 {
                let pp = psi_x[a] * psi_y[b] * w;
                out.v[a][b] += g * pp;
                if gradient {
                    out.k[a][b] += f * (pp * dot(nq, z));
                    out.kp[a][b] += f * (pp * dot(np, z));
                }
            }
        }
    };
    for (rho, wr) in rule.nodes.iter().zip(&rule.weights) {
        let xi = rho * rho;
        let jac = 2.0 * rho * rho * rho;
        for (eta, we) in rule.nodes.iter().zip(&rule.weights) {
            let w = wr * we * jac;
            add(xi, xi * eta, w);
            add(xi * eta, xi, w);
        }
    }
    out
}

/// Same panel: the logarithmic part is integrated in closed form, the rest by
/// tensor Gauss. The double-layer kernels vanish since `n . (x - y) = 0`.
fn coincident_pair<G: RadialKernel>(kernel: &G, mesh: &InterfaceMesh, p: usize) -> PairBlocks {
    let l = mesh.lengths[p];
    let lambda = kernel.log_coefficient();
    let rule = rule10();
    let mut out = PairBlocks { v: ZERO_LOCAL, k: ZERO_LOCAL, kp: ZERO_LOCAL };
    for a in 0..2 {
        for b in 0..2 {
            out.v[a][b] = lambda * (l * l) * (0.25 * l.ln() + LOG_MOMENTS[a][b]);
        }
    }
    for (s, ws) in rule.nodes.iter().zip(&rule.weights) {
        let psi_x = [1.0 - s, *s];
        for (t, wt) in rule.nodes.iter().zip(&rule.weights) {
            let psi_y = [1.0 - t, *t];
            let g = kernel.regular_part(l * (s - t).abs()) * (ws * wt * l * l);
            for a in 0..2 {
                for b in 0..2 {
                    out.v[a][b] += g * (psi_x[a] * psi_y[b]);
                }
            }
        }
    }
    out
}

pub fn pair_blocks<G: RadialKernel>(
    kernel: &G,
    mesh: &InterfaceMesh,
    p: usize,
    q: usize,
    gradient: bool,
) -> PairBlocks {
    let n = mesh.len();
    if p == q {
        coincident_pair(kernel, mesh, p)
    } else if q == (p + 1) % n {
        // end of p is the start of q
        adjacent_pair(kernel, mesh, p, q, 1, 0, gradient)
    } else if p == (q + 1) % n {
        adjacent_pair(kernel, mesh, p, q, 0, 1, gradient)
    } else {
        regular_pair(kernel, mesh, p, q, gradient)
    }
}

/// Assembled single layer, double layer, adjoint double layer and hypersingular matrices.
pub struct Assembled {
    pub v: CMat,
    pub k: CMat,
    pub kp: CMat,
    pub w: CMat,
}

/// Assembles all four Galerkin matrices for `kernel`. With `gradient = false`
/// the double-layer matrices are left at zero.
pub fn assemble<G: RadialKernel>(kernel: &G, mesh: &InterfaceMesh, gradient: bool) -> Assembled {
    let n = mesh.len();
    let rows: Vec<Vec<PairBlocks>> =
        (0..n).into_par_iter().map(|p| (p..n).map(|q| pair_blocks(kernel, mesh, p, q, gradient)).collect()).collect();
    let zero = CMat::zeros(n, n);
    let (mut v, mut k, mut kp, mut w) = (zero.clone(), zero.clone(), zero.clone(), zero);
    let normal = kernel.normal_term();
    let d = [-1.0, 1.0];
    for (p, row) in rows.iter().enumerate() {
        for (offset, blk) in row.iter().enumerate() {
            let q = p + offset;
            let s: Complex64 = blk.v.iter().flatten().sum();
            let nn = dot(mesh.normals[p], mesh.normals[q]);
            let lpq = mesh.lengths[p] * mesh.lengths[q];
            for a in 0..2 {
                let i = (p + a) % n;
                for b in 0..2 {
                    let j = (q + b) % n;
                    let wl = s * (d[a] * d[b] / lpq) + blk.v[a][b] * (normal * nn);
                    v[(i, j)] += blk.v[a][b];
                    w[(i, j)] += wl;
                    k[(i, j)] += blk.k[a][b];
                    kp[(i, j)] += blk.kp[a][b];
                    if q != p {
                        v[(j, i)] += blk.v[a][b];
                        w[(j, i)] += wl;
                        k[(j, i)] -= blk.kp[a][b];
                        kp[(j, i)] -= blk.k[a][b];
                    }
                }
            }
        }
    }
    Assembled { v, k, kp, w }
}

/// P1 mass matrix on the polygon.
pub fn interface_mass(mesh: &InterfaceMesh) -> RMat {
    let n = mesh.len();
    let mut m = RMat::zeros(n, n);
    for p in 0..n {
        let l = mesh.lengths[p];
        let (i, j) = (p, (p + 1) % n);
        m[(i, i)] += l / 3.0;
        m[(j, j)] += l / 3.0;
        m[(i, j)] += l / 6.0;
        m[(j, i)] += l / 6.0;
    }
    m
}
