use num_complex::Complex64;

use fembem::analytic::MieSeries;
use fembem::fem::{assemble_fem, FemSubstructure};
use fembem::geometry::{build_annulus_mesh, mesh_resolution};

const KAPPA: f64 = 4.3;

/// Relative L2 error of the FEM solution with exact Dirichlet data on both circles.
fn dirichlet_problem_error(points_per_wavelength: f64) -> f64 {
    let h = mesh_resolution(10.0, points_per_wavelength).unwrap();
    let mesh = build_annulus_mesh(1.0, 2.0, h).unwrap();
    let fem = assemble_fem(&mesh).unwrap();
    let mie = MieSeries::new(KAPPA, 2.0).unwrap();
    let exact: Vec<Complex64> = fem.vertices.iter().map(|&x| mie.eval_point(x)).collect();
    let sub = FemSubstructure::new(&fem, KAPPA).unwrap();
    let u_sigma: Vec<Complex64> = fem.sigma.iter().map(|&v| exact[v]).collect();
    let u = sub.extend(&u_sigma, true);
    let d: Vec<Complex64> = u.iter().zip(&exact).map(|(a, b)| a - b).collect();
    fem.l2_norm(&d) / fem.l2_norm(&exact)
}

#[test]
fn fem_matches_mie_with_second_order() {
    let coarse = dirichlet_problem_error(10.0);
    let fine = dirichlet_problem_error(20.0);
    assert!(fine <= 0.05, "{fine}");
    let order = (coarse / fine).log2();
    assert!((1.6..=2.4).contains(&order), "order {order} from {coarse} {fine}");
}
