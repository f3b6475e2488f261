//! Near-kernel study of the local boundary operators on the fixed-mesh interface.

use fembem::bem::{assemble_bios, assemble_yukawa_hypersingular};
use fembem::coupling::kernel::{impedance_bio_kernel, remark_angles};
use fembem::coupling::{kernel_study, KernelRecord, TraceWeights, Weighting};

use crate::output::{fmt_f64, with_suffix, write_table_file};
use crate::sweep::Problem;
use crate::{CliError, Config};

pub const KERNEL_HEADER: [&str; 9] =
    ["kappa", "coupling", "weighting", "sigma_min", "r_jn", "r_c", "mode_dirichlet", "mode_neumann", "dominant_mode"];

pub const ANGLE_HEADER: [&str; 6] =
    ["kappa", "weighting", "sigma_min_impedance", "angle_v_k", "angle_v_d", "angle_k_d"];

pub fn weighting_name(w: Weighting) -> &'static str {
    match w {
        Weighting::Energy => "energy",
        Weighting::Mass => "mass",
    }
}

#[derive(Debug, Clone)]
pub struct AngleRecord {
    pub kappa: f64,
    pub weighting: Weighting,
    /// Smallest singular value of the impedance operator `D*`.
    pub sigma_min_impedance: f64,
    /// `(V, M/2+Kp)`, `(V, D)`, `(M/2+Kp, D)` in degrees.
    pub angles: [f64; 3],
}

#[derive(Debug, Clone)]
pub struct KernelStudy {
    pub records: Vec<KernelRecord>,
    pub angles: Vec<AngleRecord>,
}

fn record_row(r: &KernelRecord, w: Weighting) -> Vec<String> {
    vec![
        fmt_f64(r.kappa),
        r.kind.name().to_string(),
        weighting_name(w).to_string(),
        fmt_f64(r.sigma_min),
        fmt_f64(r.r_jn),
        fmt_f64(r.r_c),
        r.mode_dirichlet.to_string(),
        r.mode_neumann.to_string(),
        r.dominant_mode().to_string(),
    ]
}

pub fn compute_kernel_study(problem: &Problem, cfg: &Config) -> Result<KernelStudy, CliError> {
    let mut records = Vec::new();
    let mut angles = Vec::new();
    for &kappa in &cfg.kernel_kappas {
        let bios = assemble_bios(&problem.interface, kappa)?;
        let t = assemble_yukawa_hypersingular(&problem.interface, kappa)?;
        for &kind in &cfg.couplings {
            records.push(kernel_study(kind, &bios, &t, cfg.weighting)?);
        }
        let weights = TraceWeights::new(cfg.weighting, &bios.mass, &t.wy)?;
        let (sigma, _) = impedance_bio_kernel(&bios, &t.wy, &weights)?;
        angles.push(AngleRecord {
            kappa,
            weighting: cfg.weighting,
            sigma_min_impedance: sigma,
            angles: remark_angles(&bios, &t.wy, &weights)?,
        });
    }
    Ok(KernelStudy { records, angles })
}

/// Writes `<prefix>_kernel.csv` and `<prefix>_angles.csv`.
pub fn run_kernel_study(cfg: &Config) -> Result<KernelStudy, CliError> {
    cfg.validate()?;
    let problem = Problem::from_config(cfg)?;
    let study = compute_kernel_study(&problem, cfg)?;
    let rows: Vec<Vec<String>> = study.records.iter().map(|r| record_row(r, cfg.weighting)).collect();
    write_table_file(&with_suffix(&cfg.output, "_kernel.csv"), &KERNEL_HEADER, &rows)?;
    let rows: Vec<Vec<String>> = study
        .angles
        .iter()
        .map(|a| {
            let mut r = vec![fmt_f64(a.kappa), weighting_name(a.weighting).to_string(), fmt_f64(a.sigma_min_impedance)];
            r.extend(a.angles.iter().map(|&x| fmt_f64(x)));
            r
        })
        .collect();
    write_table_file(&with_suffix(&cfg.output, "_angles.csv"), &ANGLE_HEADER, &rows)?;
    for r in &study.records {
        println!(
            "kappa {:.10} {:9} sigma_min {:.3e} r_jn {:.3e} r_c {:.3e} mode {}",
            r.kappa,
            r.kind.name(),
            r.sigma_min,
            r.r_jn,
            r.r_c,
            r.dominant_mode()
        );
    }
    Ok(study)
}
