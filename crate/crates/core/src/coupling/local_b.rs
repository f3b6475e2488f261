//! Coupling operators of the boundary element side and their impedance-closed resolvent.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::{Representation, TraceVector};
use crate::bem::{BioMatrices, YukawaTransmission};
use crate::error::{Error, Result};
use crate::krylov::dense::{real_matvec, RealCholesky};
use crate::krylov::{CMat, ComplexLu, RMat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CouplingKind {
    JohnsonNedelec,
    Costabel,
}

impl CouplingKind {
    pub const ALL: [CouplingKind; 2] = [CouplingKind::JohnsonNedelec, CouplingKind::Costabel];

    pub fn name(self) -> &'static str {
        match self {
            CouplingKind::JohnsonNedelec => "JN",
            CouplingKind::Costabel => "Costabel",
        }
    }
}

impl fmt::Display for CouplingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CouplingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "jn" | "johnson-nedelec" | "johnsonnedelec" => Ok(CouplingKind::JohnsonNedelec),
            "costabel" | "c" => Ok(CouplingKind::Costabel),
            other => Err(Error::InvalidInput(format!("unknown coupling '{other}'"))),
        }
    }
}

pub(crate) fn set_block(dst: &mut CMat, row: usize, col: usize, src: &CMat) {
    dst.view_mut((row, col), (src.nrows(), src.ncols())).copy_from(src);
}

fn complex(a: &RMat, scale: f64) -> CMat {
    a.map(|v| Complex64::new(scale * v, 0.0))
}

/// The `2N x 2N` Galerkin matrix of the coupling operator, unknowns `(phi, p)`
/// as primal coefficients, rows tested with `(v, q)`.
pub fn coupling_matrix(kind: CouplingKind, bios: &BioMatrices) -> CMat {
    let n = bios.len();
    let mut a = CMat::zeros(2 * n, 2 * n);
    let mass = complex(&bios.mass, 1.0);
    match kind {
        CouplingKind::JohnsonNedelec => set_block(&mut a, 0, n, &mass),
        CouplingKind::Costabel => {
            set_block(&mut a, 0, 0, &bios.w);
            set_block(&mut a, 0, n, &bios.half_mass_plus(&bios.kp, 1.0));
        }
    }
    set_block(&mut a, n, 0, &bios.half_mass_plus(&bios.k, -1.0));
    set_block(&mut a, n, n, &(-&bios.v));
    a
}

/// `A - i B* T B`, factorized.
#[derive(Debug, Clone)]
pub struct LocalOperatorB {
    pub kind: CouplingKind,
    pub blocks: CMat,
    pub transmission: RMat,
    pub mass: RMat,
    mass_cholesky: RealCholesky,
    lu: ComplexLu,
}

pub fn local_operator_b(kind: CouplingKind, bios: &BioMatrices, t: &YukawaTransmission) -> Result<LocalOperatorB> {
    let n = bios.len();
    if t.wy.nrows() != n {
        return Err(Error::Dimension { expected: n, got: t.wy.nrows() });
    }
    let mut blocks = coupling_matrix(kind, bios);
    for i in 0..n {
        for j in 0..n {
            blocks[(i, j)] -= Complex64::new(0.0, t.wy[(i, j)]);
        }
    }
    let lu = ComplexLu::new(blocks.clone())?;
    Ok(LocalOperatorB {
        kind,
        blocks,
        transmission: t.wy.clone(),
        mass: bios.mass.clone(),
        mass_cholesky: RealCholesky::new(&bios.mass)?,
        lu,
    })
}

impl LocalOperatorB {
    pub fn len(&self) -> usize {
        self.mass.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn lu(&self) -> &ComplexLu {
        &self.lu
    }

    pub fn condition_estimate(&self) -> f64 {
        self.lu.condition_estimate()
    }

    pub fn mass_cholesky(&self) -> &RealCholesky {
        &self.mass_cholesky
    }

    /// `(phi, p)` primal coefficients solving `(A - i B* T B)(phi, p) = (g, 0)`.
    pub fn solve(&self, g: &TraceVector) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let n = self.len();
        let g = g.expect_len(Representation::Dual, n)?;
        let mut rhs = g.to_vec();
        rhs.resize(2 * n, Complex64::default());
        let mut x = self.lu.solve(&rhs)?;
        let p = x.split_off(n);
        Ok((x, p))
    }

    /// Outgoing trace `g + 2i T phi`.
    pub fn scattering(&self, g: &TraceVector) -> Result<TraceVector> {
        let (phi, _) = self.solve(g)?;
        let t_phi = real_matvec(&self.transmission, &phi);
        Ok(TraceVector::dual(g.values.iter().zip(&t_phi).map(|(a, b)| a + Complex64::new(0.0, 2.0) * b).collect()))
    }

    /// Dirichlet trace (primal) and Neumann trace (dual) for incoming data `g`.
    pub fn reconstruct_traces(&self, g: &TraceVector) -> Result<(TraceVector, TraceVector)> {
        let (phi, p) = self.solve(g)?;
        Ok((TraceVector::primal(phi), TraceVector::primal(p).to_dual(&self.mass)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bem::{assemble_bios, assemble_yukawa_hypersingular};
    use crate::geometry::InterfaceMesh;

    fn setup(kind: CouplingKind) -> (BioMatrices, LocalOperatorB) {
        let iface = InterfaceMesh::circle(2.0, 48).unwrap();
        let bios = assemble_bios(&iface, 4.3).unwrap();
        let t = assemble_yukawa_hypersingular(&iface, 4.3).unwrap();
        let loc = local_operator_b(kind, &bios, &t).unwrap();
        (bios, loc)
    }

    #[test]
    fn block_layout() {
        for kind in CouplingKind::ALL {
            let (bios, loc) = setup(kind);
            let n = bios.len();
            let i = Complex64::i();
            let (r, c) = (3, 7);
            let top_left = match kind {
                CouplingKind::JohnsonNedelec => -i * loc.transmission[(r, c)],
                CouplingKind::Costabel => bios.w[(r, c)] - i * loc.transmission[(r, c)],
            };
            assert!((loc.blocks[(r, c)] - top_left).norm() < 1e-14);
            let top_right = match kind {
                CouplingKind::JohnsonNedelec => Complex64::new(bios.mass[(r, r)], 0.0),
                CouplingKind::Costabel => bios.kp[(r, r)] + 0.5 * bios.mass[(r, r)],
            };
            assert!((loc.blocks[(r, n + r)] - top_right).norm() < 1e-14);
            assert!((loc.blocks[(n + r, r)] - (0.5 * bios.mass[(r, r)] - bios.k[(r, r)])).norm() < 1e-14);
            assert!((loc.blocks[(n + r, n + c)] + bios.v[(r, c)]).norm() < 1e-14);
        }
    }

    #[test]
    fn embedding_and_zero_data() {
        let (bios, loc) = setup(CouplingKind::JohnsonNedelec);
        let n = bios.len();
        let zero = TraceVector::zeros(n, Representation::Dual);
        assert!(loc.scattering(&zero).unwrap().values.iter().all(|z| z.norm() == 0.0));
        let g = TraceVector::dual((0..n).map(|k| Complex64::new(k as f64, 1.0)).collect());
        let (phi, p) = loc.solve(&g).unwrap();
        let mut x = phi.clone();
        x.extend(p);
        let r = crate::krylov::dense::matvec(&loc.blocks, &x);
        for k in 0..n {
            assert!((r[k] - g.values[k]).norm() < 1e-9 * (1.0 + g.values[k].norm()));
            assert!(r[n + k].norm() < 1e-9);
        }
        assert!(loc.solve(&TraceVector::zeros(n, Representation::Primal)).is_err());
    }

    #[test]
    fn off_resonance_conditioning_is_moderate() {
        for kind in CouplingKind::ALL {
            let (_, loc) = setup(kind);
            assert!(loc.condition_estimate() < 1e6);
        }
    }

    #[test]
    fn names_round_trip() {
        for kind in CouplingKind::ALL {
            assert_eq!(kind.name().parse::<CouplingKind>().unwrap(), kind);
        }
        assert!("nope".parse::<CouplingKind>().is_err());
    }
}
