//! Wavenumber sweeps on a fixed mesh, compared against the Mie series.

use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;

use fembem::analytic::{reference_traces, resonances_in, MieSeries, ReferenceTraces};
use fembem::bem::{assemble_bios, assemble_yukawa_hypersingular};
use fembem::coupling::kernel::local_sigma_min;
use fembem::coupling::{
    direct_coupling_solve, gosm_build, local_operator_b, CoupledSolution, CouplingKind, ExchangeOperator, TraceWeights,
    Weighting,
};
use fembem::fem::{
    assemble_fem, local_operator_f, schur_transmission_with, FemSubstructure, FemSystem, ObstacleClosure,
};
use fembem::geometry::{build_annulus_mesh, extract_interface, mesh_resolution, InterfaceMesh};
use fembem::krylov::dense::weighted_norm;
use fembem::krylov::{GmresConfig, GmresReport, RMat, RealCholesky};

use crate::output::{fmt_f64, with_suffix, write_table_file};
use crate::{CliError, Config};

pub const OBSTACLE_RADIUS: f64 = 1.0;
pub const INTERFACE_RADIUS: f64 = 2.0;

/// Offsets added around each resonance when refinement is on.
pub const REFINEMENT_OFFSETS: [f64; 7] = [-0.002, -0.001, -0.0005, 0.0, 0.0005, 0.001, 0.002];

/// Inverse-iteration steps for the smallest singular value per row.
pub const SIGMA_ITERATIONS: usize = 200;

pub const SWEEP_HEADER: [&str; 9] = [
    "kappa",
    "coupling",
    "rel_err_qB",
    "rel_err_qF",
    "rel_err_dirichlet",
    "rel_err_neumann",
    "rel_err_volume",
    "gmres_iterations",
    "sigma_min_localB",
];

/// Plotted error fields: column name and file tag.
pub const ERROR_FIELDS: [(&str, &str); 5] = [
    ("rel_err_qB", "qB"),
    ("rel_err_qF", "qF"),
    ("rel_err_dirichlet", "dirichlet"),
    ("rel_err_neumann", "neumann"),
    ("rel_err_volume", "volume"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub kappa: f64,
    pub coupling: CouplingKind,
    pub rel_err_q_b: f64,
    pub rel_err_q_f: f64,
    pub rel_err_dirichlet: f64,
    pub rel_err_neumann: f64,
    pub rel_err_volume: f64,
    /// `-1` marks a failed row.
    pub gmres_iterations: i64,
    pub sigma_min_local_b: f64,
    /// Set when the row could not be computed or GMRES did not converge.
    pub failed: bool,
}

impl SweepRow {
    pub fn failure(kappa: f64, coupling: CouplingKind) -> Self {
        Self {
            kappa,
            coupling,
            rel_err_q_b: f64::NAN,
            rel_err_q_f: f64::NAN,
            rel_err_dirichlet: f64::NAN,
            rel_err_neumann: f64::NAN,
            rel_err_volume: f64::NAN,
            gmres_iterations: -1,
            sigma_min_local_b: f64::NAN,
            failed: true,
        }
    }

    pub fn errors(&self) -> [f64; 5] {
        [self.rel_err_q_b, self.rel_err_q_f, self.rel_err_dirichlet, self.rel_err_neumann, self.rel_err_volume]
    }

    pub fn field(&self, name: &str) -> Option<f64> {
        ERROR_FIELDS.iter().position(|(n, _)| *n == name).map(|i| self.errors()[i])
    }

    pub fn record(&self) -> Vec<String> {
        let mut r = vec![fmt_f64(self.kappa), self.coupling.name().to_string()];
        r.extend(self.errors().iter().map(|&e| fmt_f64(e)));
        r.push(self.gmres_iterations.to_string());
        r.push(fmt_f64(self.sigma_min_local_b));
        r
    }
}

/// Mesh, FEM system and interface shared by every wavenumber.
pub struct Problem {
    pub h: f64,
    pub fem: FemSystem,
    pub interface: InterfaceMesh,
}

impl Problem {
    pub fn new(kappa_mesh: f64, points_per_wavelength: f64) -> Result<Self, CliError> {
        let h = mesh_resolution(kappa_mesh, points_per_wavelength)?;
        let mesh = build_annulus_mesh(OBSTACLE_RADIUS, INTERFACE_RADIUS, h)?;
        let (interface, _) = extract_interface(&mesh)?;
        let fem = assemble_fem(&mesh)?;
        Ok(Self { h, fem, interface })
    }

    pub fn from_config(cfg: &Config) -> Result<Self, CliError> {
        Self::new(cfg.kappa_mesh, cfg.points_per_wavelength)
    }
}

#[derive(Debug, Clone)]
pub struct EvalSettings {
    pub couplings: Vec<CouplingKind>,
    pub gmres: GmresConfig,
    pub closure: ObstacleClosure,
    /// Also solve the monolithic system for comparison.
    pub with_direct: bool,
}

impl EvalSettings {
    pub fn from_config(cfg: &Config) -> Self {
        Self { couplings: cfg.couplings.clone(), gmres: cfg.gmres, closure: cfg.closure, with_direct: false }
    }
}

#[derive(Debug, Clone)]
pub struct CouplingOutcome {
    pub row: SweepRow,
    pub report: GmresReport,
    /// Reconstructed interface values, primal.
    pub dirichlet: Vec<Complex64>,
    /// Reconstructed `n_B . grad u`, primal.
    pub neumann: Vec<Complex64>,
    pub volume: Vec<Complex64>,
    pub direct: Option<CoupledSolution>,
}

#[derive(Debug, Clone)]
pub struct KappaOutcome {
    pub kappa: f64,
    pub reference: ReferenceTraces,
    pub exact_volume: Vec<Complex64>,
    pub couplings: Vec<CouplingOutcome>,
}

fn difference(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `||a - b|| / ||b||` in the norm `x^H M x`.
pub fn relative_mass_error(mass: &RMat, a: &[Complex64], b: &[Complex64]) -> f64 {
    weighted_norm(mass, &difference(a, b)) / weighted_norm(mass, b)
}

/// `||a - b|| / ||b||` in the norm `x^H M^-1 x`, for dual vectors.
pub fn relative_dual_error(mass: &RealCholesky, a: &[Complex64], b: &[Complex64]) -> f64 {
    let norm = |v: &[Complex64]| {
        let mut y = v.to_vec();
        mass.solve_lower(&mut y);
        y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    };
    norm(&difference(a, b)) / norm(b)
}

/// Runs GOSM for every requested coupling at one wavenumber.
pub fn evaluate_kappa(problem: &Problem, kappa: f64, settings: &EvalSettings) -> Result<KappaOutcome, CliError> {
    let fem = &problem.fem;
    let bios = assemble_bios(&problem.interface, kappa)?;
    let t_b = assemble_yukawa_hypersingular(&problem.interface, kappa)?;
    let t_f = schur_transmission_with(fem, kappa, settings.closure)?;
    let sub = FemSubstructure::new(fem, kappa)?;
    let local_f = local_operator_f(&sub, &t_f)?;
    let exchange = ExchangeOperator::new(&t_b.wy, &t_f.s)?;
    let mie = MieSeries::new(kappa, INTERFACE_RADIUS)?;
    let reference = reference_traces(&mie, &problem.interface, &bios.mass, &t_b.wy, &t_f.s)?;
    let exact_volume: Vec<Complex64> = fem.vertices.iter().map(|&x| mie.eval_point(x)).collect();
    let weights = TraceWeights::new(Weighting::Energy, &bios.mass, &t_b.wy)?;
    let mass_chol = RealCholesky::new(&bios.mass)?;
    let mut couplings = Vec::with_capacity(settings.couplings.len());
    for &kind in &settings.couplings {
        let local_b = local_operator_b(kind, &bios, &t_b)?;
        let system = gosm_build(&local_b, &local_f, &exchange)?;
        let sol = system.solve(&settings.gmres)?;
        let (dirichlet, neumann_dual) = local_b.reconstruct_traces(&sol.q_b)?;
        let neumann = neumann_dual.to_primal(&mass_chol)?;
        let volume = local_f.solve(&sol.q_f, true)?;
        let sigma = local_sigma_min(&local_b, &weights, SIGMA_ITERATIONS)?.sigma;
        let direct = if settings.with_direct { Some(direct_coupling_solve(kind, &sub, &bios)?) } else { None };
        let row = SweepRow {
            kappa,
            coupling: kind,
            rel_err_q_b: relative_dual_error(&mass_chol, &sol.q_b.values, &reference.q_b),
            rel_err_q_f: relative_dual_error(&mass_chol, &sol.q_f.values, &reference.q_f),
            rel_err_dirichlet: relative_mass_error(&bios.mass, &dirichlet.values, &reference.dirichlet),
            rel_err_neumann: relative_mass_error(&bios.mass, &neumann.values, &reference.neumann),
            rel_err_volume: fem.l2_norm(&difference(&volume, &exact_volume)) / fem.l2_norm(&exact_volume),
            gmres_iterations: sol.report.iterations as i64,
            sigma_min_local_b: sigma,
            failed: !sol.report.converged,
        };
        couplings.push(CouplingOutcome {
            row,
            report: sol.report,
            dirichlet: dirichlet.values,
            neumann: neumann.values,
            volume,
            direct,
        });
    }
    Ok(KappaOutcome { kappa, reference, exact_volume, couplings })
}

/// Sample wavenumbers: the uniform grid plus, optionally, points around each
/// resonance inside the range. Sorted, duplicates removed.
pub fn sweep_kappas(cfg: &Config) -> Result<Vec<f64>, CliError> {
    cfg.validate()?;
    let steps = ((cfg.kappa_max - cfg.kappa_min) / cfg.kappa_step + 1e-9).floor() as usize;
    let mut ks: Vec<f64> = (0..=steps).map(|k| cfg.kappa_min + k as f64 * cfg.kappa_step).collect();
    if cfg.refine_near_resonances {
        for r in resonances_in(cfg.kappa_min, cfg.kappa_max)? {
            ks.extend(
                REFINEMENT_OFFSETS.iter().map(|d| r.kappa + d).filter(|k| (cfg.kappa_min..=cfg.kappa_max).contains(k)),
            );
        }
    }
    ks.sort_by(f64::total_cmp);
    ks.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    Ok(ks)
}

/// Rows for one wavenumber; a failure becomes sentinel rows for every coupling.
pub fn sweep_rows_at(problem: &Problem, kappa: f64, settings: &EvalSettings) -> Vec<SweepRow> {
    match evaluate_kappa(problem, kappa, settings) {
        Ok(out) => out.couplings.into_iter().map(|c| c.row).collect(),
        Err(e) => {
            eprintln!("kappa {kappa}: {e}");
            settings.couplings.iter().map(|&k| SweepRow::failure(kappa, k)).collect()
        }
    }
}

/// Computes all rows, in parallel across wavenumbers, ordered by wavenumber and then coupling.
pub fn compute_sweep(problem: &Problem, cfg: &Config) -> Result<Vec<SweepRow>, CliError> {
    let kappas = sweep_kappas(cfg)?;
    let settings = EvalSettings::from_config(cfg);
    let per_kappa: Vec<Vec<SweepRow>> = kappas.par_iter().map(|&k| sweep_rows_at(problem, k, &settings)).collect();
    Ok(per_kappa.into_iter().flatten().collect())
}

pub fn write_sweep_csv<W: std::io::Write>(out: W, rows: &[SweepRow]) -> Result<(), CliError> {
    let records: Vec<Vec<String>> = rows.iter().map(SweepRow::record).collect();
    crate::output::write_table(out, &SWEEP_HEADER, &records)
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub csv: std::path::PathBuf,
    pub plots: Vec<std::path::PathBuf>,
}

impl SweepOutcome {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.failed).count()
    }
}

/// Writes `<prefix>.csv` and, if enabled, one `<prefix>_<field>.svg` per error field.
pub fn write_sweep_outputs(prefix: &Path, cfg: &Config, rows: Vec<SweepRow>) -> Result<SweepOutcome, CliError> {
    let csv = with_suffix(prefix, ".csv");
    let records: Vec<Vec<String>> = rows.iter().map(SweepRow::record).collect();
    write_table_file(&csv, &SWEEP_HEADER, &records)?;
    let mut plots = Vec::new();
    if cfg.plots {
        let markers: Vec<f64> = resonances_in(cfg.kappa_min, cfg.kappa_max)?.iter().map(|r| r.kappa).collect();
        for (field, tag) in ERROR_FIELDS {
            let series: Vec<crate::svg::Series> = cfg
                .couplings
                .iter()
                .map(|&kind| crate::svg::Series {
                    label: kind.name().to_string(),
                    points: rows
                        .iter()
                        .filter(|r| r.coupling == kind)
                        .map(|r| (r.kappa, r.field(field).unwrap_or(f64::NAN)))
                        .collect(),
                })
                .collect();
            let path = with_suffix(prefix, &format!("_{tag}.svg"));
            crate::output::ensure_parent(&path)?;
            let plot = crate::svg::Plot {
                title: field.to_string(),
                x_label: "kappa".into(),
                series,
                markers: markers.clone(),
            };
            std::fs::write(&path, plot.render())?;
            plots.push(path);
        }
    }
    Ok(SweepOutcome { rows, csv, plots })
}

pub fn run_sweep(cfg: &Config) -> Result<SweepOutcome, CliError> {
    cfg.validate()?;
    let problem = Problem::from_config(cfg)?;
    let rows = compute_sweep(&problem, cfg)?;
    write_sweep_outputs(&cfg.output, cfg, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_includes_refinement_points() {
        let cfg = Config::default();
        let ks = sweep_kappas(&cfg).unwrap();
        assert_eq!(ks.first().copied(), Some(4.28));
        assert!((ks.last().unwrap() - 4.42).abs() < 1e-12);
        assert!(ks.windows(2).all(|w| w[0] < w[1]));
        assert!(ks.iter().any(|k| (k - 4.326_863_956_5).abs() < 1e-8));
        assert!(ks.iter().any(|k| (k - (4.385_741_908 + 0.0005)).abs() < 1e-8));
        let plain = Config { refine_near_resonances: false, ..Config::default() };
        assert_eq!(sweep_kappas(&plain).unwrap().len(), 71);
    }

    #[test]
    fn failure_row_uses_sentinels() {
        let r = SweepRow::failure(4.3, CouplingKind::Costabel);
        let rec = r.record();
        assert_eq!(rec.len(), SWEEP_HEADER.len());
        assert_eq!(rec[1], "Costabel");
        assert_eq!(rec[2], "NaN");
        assert_eq!(rec[7], "-1");
    }

    #[test]
    fn coarse_sweep_row_is_accurate() {
        let problem = Problem::new(6.0, 10.0).unwrap();
        let settings = EvalSettings {
            couplings: CouplingKind::ALL.to_vec(),
            gmres: GmresConfig::default(),
            closure: ObstacleClosure::Natural,
            with_direct: false,
        };
        let rows = sweep_rows_at(&problem, 4.30, &settings);
        assert_eq!(rows.len(), 2);
        for r in rows {
            assert!(!r.failed);
            assert!(r.errors().iter().all(|e| e.is_finite() && *e < 0.2), "{r:?}");
        }
    }
}
