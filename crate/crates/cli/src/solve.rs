//! Single solve at one wavenumber with trace and volume dumps.

use num_complex::Complex64;

use crate::output::{fmt_f64, with_suffix, write_table_file};
use crate::sweep::{evaluate_kappa, relative_mass_error, CouplingOutcome, EvalSettings, KappaOutcome, Problem};
use crate::{CliError, Config};

pub const TRACE_HEADER: [&str; 11] = [
    "node",
    "x",
    "y",
    "dirichlet_re",
    "dirichlet_im",
    "neumann_re",
    "neumann_im",
    "exact_dirichlet_re",
    "exact_dirichlet_im",
    "exact_neumann_re",
    "exact_neumann_im",
];

pub const VOLUME_HEADER: [&str; 7] = ["vertex", "x", "y", "u_re", "u_im", "exact_re", "exact_im"];

#[derive(Debug, Clone)]
pub struct SolveSummary {
    pub outcome: KappaOutcome,
    /// Relative gap between GOSM and monolithic traces (max of both traces).
    pub direct_gap: f64,
}

impl SolveSummary {
    pub fn coupling(&self) -> &CouplingOutcome {
        &self.outcome.couplings[0]
    }
}

fn complex_fields(z: Complex64) -> [String; 2] {
    [fmt_f64(z.re), fmt_f64(z.im)]
}

pub fn compute_solve(problem: &Problem, cfg: &Config) -> Result<SolveSummary, CliError> {
    let settings = EvalSettings { couplings: vec![cfg.coupling], with_direct: true, ..EvalSettings::from_config(cfg) };
    let outcome = evaluate_kappa(problem, cfg.kappa, &settings)?;
    let c = &outcome.couplings[0];
    let direct = c.direct.as_ref().expect("direct solve requested");
    let mass = fembem::bem::interface_mass(&problem.interface);
    let direct_gap = relative_mass_error(&mass, &c.dirichlet, &direct.dirichlet.values).max(relative_mass_error(
        &mass,
        &c.neumann,
        &direct.neumann.values,
    ));
    Ok(SolveSummary { outcome, direct_gap })
}

/// Prints a summary and writes `<prefix>_traces.csv` and `<prefix>_volume.csv`.
pub fn run_solve(cfg: &Config) -> Result<SolveSummary, CliError> {
    cfg.validate()?;
    let problem = Problem::from_config(cfg)?;
    let summary = compute_solve(&problem, cfg)?;
    let c = summary.coupling();
    let out = &summary.outcome;
    let r = &c.row;
    println!("kappa {} coupling {} mesh h {:.5}", r.kappa, r.coupling, problem.h);
    println!("  vertices {} interface nodes {}", problem.fem.vertices.len(), problem.interface.len());
    println!(
        "  gmres iterations {} converged {} final residual {:.3e}",
        c.report.iterations, c.report.converged, c.report.final_residual
    );
    println!(
        "  relative errors qB {:.4e} qF {:.4e} dirichlet {:.4e} neumann {:.4e} volume {:.4e}",
        r.rel_err_q_b, r.rel_err_q_f, r.rel_err_dirichlet, r.rel_err_neumann, r.rel_err_volume
    );
    println!("  sigma_min of local operator {:.4e}", r.sigma_min_local_b);
    println!("  gap to monolithic solve {:.3e}", summary.direct_gap);

    let traces: Vec<Vec<String>> = problem
        .interface
        .nodes
        .iter()
        .enumerate()
        .map(|(j, x)| {
            let mut row = vec![j.to_string(), fmt_f64(x[0]), fmt_f64(x[1])];
            for z in [c.dirichlet[j], c.neumann[j], out.reference.dirichlet[j], out.reference.neumann[j]] {
                row.extend(complex_fields(z));
            }
            row
        })
        .collect();
    write_table_file(&with_suffix(&cfg.output, "_traces.csv"), &TRACE_HEADER, &traces)?;
    let volume: Vec<Vec<String>> = problem
        .fem
        .vertices
        .iter()
        .enumerate()
        .map(|(j, x)| {
            let mut row = vec![j.to_string(), fmt_f64(x[0]), fmt_f64(x[1])];
            row.extend(complex_fields(c.volume[j]));
            row.extend(complex_fields(out.exact_volume[j]));
            row
        })
        .collect();
    write_table_file(&with_suffix(&cfg.output, "_volume.csv"), &VOLUME_HEADER, &volume)?;
    Ok(summary)
}
