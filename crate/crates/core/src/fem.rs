//! P1 finite elements on the annulus: assembly, Dirichlet lifting on the
//! obstacle, the Yukawa Schur-complement transmission operator and the
//! impedance-closed local resolvent of the volume subdomain.

use num_complex::Complex64;

use crate::coupling::{Representation, TraceVector};
use crate::error::{Error, Result};
use crate::geometry::{extract_interface, AnnulusMesh, BoundaryLabel};
use crate::krylov::dense::{real_matvec, RealCholesky};
use crate::krylov::{BandLu, CMat, ComplexLu, Csr, RMat};

#[derive(Debug, Clone)]
pub struct FemSystem {
    pub stiffness: Csr,
    pub mass: Csr,
    /// Vertices on neither boundary.
    pub interior: Vec<usize>,
    /// Obstacle vertices in loop order.
    pub gamma_o: Vec<usize>,
    /// Interface vertices, `sigma[j]` is interface node `j`.
    pub sigma: Vec<usize>,
    pub vertices: Vec<[f64; 2]>,
}

#[derive(Debug, Clone)]
pub struct SchurTransmission {
    pub kappa: f64,
    pub s: RMat,
    pub cholesky: RealCholesky,
}

type Local3 = [[f64; 3]; 3];

fn element_matrices(p: [[f64; 2]; 3]) -> Result<(Local3, Local3)> {
    let [a, b, c] = p;
    let two_area = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
    if !(two_area > 0.0) {
        return Err(Error::InvalidMesh(format!("degenerate or clockwise triangle {p:?}")));
    }
    let area = 0.5 * two_area;
    let gx = [b[1] - c[1], c[1] - a[1], a[1] - b[1]];
    let gy = [c[0] - b[0], a[0] - c[0], b[0] - a[0]];
    let mut k = [[0.0; 3]; 3];
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = (gx[i] * gx[j] + gy[i] * gy[j]) / (4.0 * area);
            m[i][j] = area / 12.0 * if i == j { 2.0 } else { 1.0 };
        }
    }
    Ok((k, m))
}

pub fn assemble_fem(mesh: &AnnulusMesh) -> Result<FemSystem> {
    let nv = mesh.vertices.len();
    let mut kt = Vec::with_capacity(9 * mesh.triangles.len());
    let mut mt = Vec::with_capacity(9 * mesh.triangles.len());
    for tri in &mesh.triangles {
        let (k, m) = element_matrices(tri.map(|i| mesh.vertices[i]))?;
        for a in 0..3 {
            for b in 0..3 {
                kt.push((tri[a], tri[b], k[a][b]));
                mt.push((tri[a], tri[b], m[a][b]));
            }
        }
    }
    let gamma_o = mesh.boundary_loop(BoundaryLabel::GammaO)?;
    let (_, sigma) = extract_interface(mesh)?;
    let mut on_boundary = vec![false; nv];
    for &v in gamma_o.iter().chain(&sigma) {
        on_boundary[v] = true;
    }
    let interior = (0..nv).filter(|&v| !on_boundary[v]).collect();
    Ok(FemSystem {
        stiffness: Csr::from_triplets(nv, nv, kt),
        mass: Csr::from_triplets(nv, nv, mt),
        interior,
        gamma_o,
        sigma,
        vertices: mesh.vertices.clone(),
    })
}

/// Dense `rows x cols` row-major copy of a sparse block.
fn dense_row_major(a: &Csr) -> Vec<f64> {
    let mut out = vec![0.0; a.nrows * a.ncols];
    for i in 0..a.nrows {
        for (j, v) in a.row(i) {
            out[i * a.ncols + j] += v;
        }
    }
    out
}

/// `A_SS - A_SI A_II^-1 A_IS` for a real sparse matrix, eliminating `inner`.
fn schur_complement(a: &Csr, inner: &[usize], outer: &[usize]) -> Result<(RMat, BandLu, Vec<f64>)> {
    let a_ii = a.extract(inner, inner);
    let a_is = a.extract(inner, outer);
    let a_si = a.extract(outer, inner);
    let a_ss = a.extract(outer, outer);
    let lu = BandLu::new(&a_ii)?;
    let ns = outer.len();
    let x = lu.solve_many(&dense_row_major(&a_is), ns);
    let mut s = a_ss.to_dense();
    for i in 0..ns {
        for (k, v) in a_si.row(i) {
            let row = &x[k * ns..(k + 1) * ns];
            for (j, xv) in row.iter().enumerate() {
                s[(i, j)] -= v * xv;
            }
        }
    }
    Ok((s, lu, x))
}

impl FemSystem {
    pub fn helmholtz(&self, kappa: f64) -> Csr {
        self.stiffness.linear_combination(1.0, &self.mass, -kappa * kappa)
    }

    pub fn yukawa(&self, kappa: f64) -> Csr {
        self.stiffness.linear_combination(1.0, &self.mass, kappa * kappa)
    }

    pub fn n_sigma(&self) -> usize {
        self.sigma.len()
    }

    /// `sqrt(u^H M u)` over the whole annulus.
    pub fn l2_norm(&self, u: &[Complex64]) -> f64 {
        let mu = self.mass.matvec(u);
        u.iter().zip(&mu).map(|(a, b)| (a.conj() * b).re).sum::<f64>().max(0.0).sqrt()
    }
}

/// Boundary condition imposed on the obstacle when the Yukawa problem is reduced to the interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ObstacleClosure {
    /// Do-nothing condition: obstacle vertices are eliminated with the interior.
    #[default]
    Natural,
    /// Homogeneous Dirichlet condition: obstacle vertices are removed.
    Dirichlet,
}

/// Yukawa Dirichlet-to-Neumann Schur complement on the interface, natural closure on the obstacle.
pub fn schur_transmission(fem: &FemSystem, kappa: f64) -> Result<SchurTransmission> {
    schur_transmission_with(fem, kappa, ObstacleClosure::Natural)
}

pub fn schur_transmission_with(fem: &FemSystem, kappa: f64, closure: ObstacleClosure) -> Result<SchurTransmission> {
    if !(kappa > 0.0) {
        return Err(Error::InvalidInput(format!("wavenumber must be positive, got {kappa}")));
    }
    let a = fem.yukawa(kappa);
    let inner: Vec<usize> = match closure {
        ObstacleClosure::Natural => {
            let mut is_sigma = vec![false; fem.vertices.len()];
            for &v in &fem.sigma {
                is_sigma[v] = true;
            }
            (0..fem.vertices.len()).filter(|&v| !is_sigma[v]).collect()
        }
        ObstacleClosure::Dirichlet => fem.interior.clone(),
    };
    let (s, _, _) = schur_complement(&a, &inner, &fem.sigma)?;
    let s = 0.5 * (&s + s.transpose());
    let cholesky = RealCholesky::new(&s)?;
    Ok(SchurTransmission { kappa, s, cholesky })
}

/// Nodal values of `-exp(i kappa x_1)` on the obstacle vertices.
pub fn dirichlet_data_planewave(fem: &FemSystem, kappa: f64) -> Vec<Complex64> {
    fem.gamma_o.iter().map(|&v| -Complex64::from_polar(1.0, kappa * fem.vertices[v][0])).collect()
}

/// Helmholtz problem on the annulus reduced to the interface: factorized
/// interior block, Schur complement `S_H` and the lifted obstacle data.
#[derive(Debug)]
pub struct FemSubstructure {
    pub kappa: f64,
    lu: BandLu,
    a_is: Csr,
    /// `S_H = A_SS - A_SI A_II^-1 A_IS`
    pub schur: RMat,
    /// Interior rhs of the lifting, `-A_IO g_O`.
    b_interior: Vec<Complex64>,
    /// Interface rhs after elimination, `b_S - A_SI A_II^-1 b_I`.
    pub f_sigma: Vec<Complex64>,
    pub g_o: Vec<Complex64>,
    interior: Vec<usize>,
    gamma_o: Vec<usize>,
    sigma: Vec<usize>,
    n_vertices: usize,
}

impl FemSubstructure {
    pub fn new(fem: &FemSystem, kappa: f64) -> Result<Self> {
        let a = fem.helmholtz(kappa);
        let (schur, lu, _) = schur_complement(&a, &fem.interior, &fem.sigma)?;
        let g_o = dirichlet_data_planewave(fem, kappa);
        let a_io = a.extract(&fem.interior, &fem.gamma_o);
        let a_so = a.extract(&fem.sigma, &fem.gamma_o);
        let a_si = a.extract(&fem.sigma, &fem.interior);
        let b_interior: Vec<Complex64> = a_io.matvec(&g_o).iter().map(|z| -z).collect();
        let y = lu.solve_complex(&b_interior);
        let f_sigma = a_so.matvec(&g_o).iter().zip(a_si.matvec(&y)).map(|(b, c)| -b - c).collect();
        Ok(Self {
            kappa,
            lu,
            a_is: a.extract(&fem.interior, &fem.sigma),
            schur,
            b_interior,
            f_sigma,
            g_o,
            interior: fem.interior.clone(),
            gamma_o: fem.gamma_o.clone(),
            sigma: fem.sigma.clone(),
            n_vertices: fem.vertices.len(),
        })
    }

    /// Full vertex vector from interface values, solving the interior problem.
    pub fn extend(&self, u_sigma: &[Complex64], include_source: bool) -> Vec<Complex64> {
        let coupling = self.a_is.matvec(u_sigma);
        let rhs: Vec<Complex64> = if include_source {
            self.b_interior.iter().zip(&coupling).map(|(b, c)| b - c).collect()
        } else {
            coupling.iter().map(|c| -c).collect()
        };
        let u_i = self.lu.solve_complex(&rhs);
        let mut u = vec![Complex64::default(); self.n_vertices];
        for (&v, val) in self.interior.iter().zip(u_i) {
            u[v] = val;
        }
        for (&v, &val) in self.sigma.iter().zip(u_sigma) {
            u[v] = val;
        }
        if include_source {
            for (&v, &val) in self.gamma_o.iter().zip(&self.g_o) {
                u[v] = val;
            }
        }
        u
    }

    pub fn sigma_values(&self, u: &[Complex64]) -> Vec<Complex64> {
        self.sigma.iter().map(|&v| u[v]).collect()
    }
}

/// `(A - i B* T_F B)` of the volume subdomain, reduced to the interface and factorized.
#[derive(Debug)]
pub struct LocalOperatorF<'a> {
    pub sub: &'a FemSubstructure,
    pub t_f: &'a SchurTransmission,
    z: ComplexLu,
}

pub fn local_operator_f<'a>(sub: &'a FemSubstructure, t_f: &'a SchurTransmission) -> Result<LocalOperatorF<'a>> {
    let n = sub.schur.nrows();
    if t_f.s.nrows() != n {
        return Err(Error::Dimension { expected: n, got: t_f.s.nrows() });
    }
    let z = CMat::from_fn(n, n, |i, j| Complex64::new(sub.schur[(i, j)], -t_f.s[(i, j)]));
    let z = ComplexLu::new(z)?;
    if z.is_singular() {
        return Err(Error::Singular(0));
    }
    Ok(LocalOperatorF { sub, t_f, z })
}

impl LocalOperatorF<'_> {
    /// Interface values of the solution with incoming data `g`.
    pub fn solve_sigma(&self, g: &TraceVector, include_source: bool) -> Result<Vec<Complex64>> {
        let g = g.expect_len(Representation::Dual, self.sub.f_sigma.len())?;
        let rhs: Vec<Complex64> =
            if include_source { g.iter().zip(&self.sub.f_sigma).map(|(a, b)| a + b).collect() } else { g.to_vec() };
        self.z.solve(&rhs)
    }

    /// Full vertex vector of the solution with incoming data `g`.
    pub fn solve(&self, g: &TraceVector, include_source: bool) -> Result<Vec<Complex64>> {
        let u_sigma = self.solve_sigma(g, include_source)?;
        Ok(self.sub.extend(&u_sigma, include_source))
    }

    /// Outgoing trace `g + 2i T_F u_S` without the obstacle source.
    pub fn scattering(&self, g: &TraceVector) -> Result<TraceVector> {
        let u = self.solve_sigma(g, false)?;
        let tu = real_matvec(&self.t_f.s, &u);
        Ok(TraceVector::dual(g.values.iter().zip(&tu).map(|(a, b)| a + Complex64::new(0.0, 2.0) * b).collect()))
    }

    /// Outgoing trace produced by the obstacle data alone.
    pub fn source_outgoing(&self) -> Result<TraceVector> {
        let zero = TraceVector::zeros(self.sub.f_sigma.len(), Representation::Dual);
        let u = self.solve_sigma(&zero, true)?;
        let tu = real_matvec(&self.t_f.s, &u);
        Ok(TraceVector::dual(tu.iter().map(|b| Complex64::new(0.0, 2.0) * b).collect()))
    }
}
