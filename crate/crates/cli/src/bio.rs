//! Refinement study of the boundary integral operators on a circle.

use fembem::bem::calderon::{idempotency_defect, reproduction_defect};
use fembem::bem::{assemble_bios, BioKind};
use fembem::geometry::InterfaceMesh;

use crate::output::{fmt_f64, with_suffix, write_table_file};
use crate::sweep::INTERFACE_RADIUS;
use crate::{CliError, Config};

/// Fourier modes `|n| <= SYMBOL_MODES` enter the symbol errors.
pub const SYMBOL_MODES: i32 = 20;

pub const BIO_HEADER: [&str; 12] = [
    "panels",
    "kappa",
    "symbol_err_v",
    "symbol_err_k",
    "symbol_err_kp",
    "symbol_err_w",
    "idempotency_defect",
    "reproduction_defect",
    "calderon_defect",
    "asymmetry_v",
    "asymmetry_w",
    "adjoint_defect_k",
];

#[derive(Debug, Clone, PartialEq)]
pub struct BioRow {
    pub panels: usize,
    pub kappa: f64,
    /// `V`, `K`, `Kp`, `W`.
    pub symbol_errors: [f64; 4],
    pub idempotency: f64,
    pub reproduction: f64,
    pub asymmetry_v: f64,
    pub asymmetry_w: f64,
    pub adjoint_defect_k: f64,
}

impl BioRow {
    pub fn calderon_defect(&self) -> f64 {
        self.idempotency.max(self.reproduction)
    }

    fn record(&self) -> Vec<String> {
        let mut r = vec![self.panels.to_string(), fmt_f64(self.kappa)];
        r.extend(self.symbol_errors.iter().map(|&e| fmt_f64(e)));
        r.extend(
            [
                self.idempotency,
                self.reproduction,
                self.calderon_defect(),
                self.asymmetry_v,
                self.asymmetry_w,
                self.adjoint_defect_k,
            ]
            .map(fmt_f64),
        );
        r
    }
}

pub fn bio_row(panels: usize, kappa: f64) -> Result<BioRow, CliError> {
    let iface = InterfaceMesh::circle(INTERFACE_RADIUS, panels)?;
    let bios = assemble_bios(&iface, kappa)?;
    let symbol_errors = [BioKind::V, BioKind::K, BioKind::Kp, BioKind::W]
        .map(|op| bios.symbol_error(op, SYMBOL_MODES, INTERFACE_RADIUS));
    let (asymmetry_v, asymmetry_w, adjoint_defect_k) = bios.symmetry_defects();
    Ok(BioRow {
        panels,
        kappa,
        symbol_errors,
        idempotency: idempotency_defect(&bios),
        reproduction: reproduction_defect(&bios),
        asymmetry_v,
        asymmetry_w,
        adjoint_defect_k,
    })
}

/// Observed orders `log(e_i / e_{i+1}) / log(N_{i+1} / N_i)` of consecutive rows.
pub fn observed_orders(rows: &[BioRow], error: impl Fn(&BioRow) -> f64) -> Vec<f64> {
    rows.windows(2)
        .map(|w| (error(&w[0]) / error(&w[1])).ln() / (w[1].panels as f64 / w[0].panels as f64).ln())
        .collect()
}

/// Writes `<prefix>_bio.csv` and prints the observed orders of the `V` symbol error.
pub fn run_bio_verify(cfg: &Config) -> Result<Vec<BioRow>, CliError> {
    cfg.validate()?;
    let mut panels = cfg.bio_panels.clone();
    panels.sort_unstable();
    panels.dedup();
    let rows: Vec<BioRow> = panels.iter().map(|&n| bio_row(n, cfg.bio_kappa)).collect::<Result<_, _>>()?;
    let records: Vec<Vec<String>> = rows.iter().map(BioRow::record).collect();
    write_table_file(&with_suffix(&cfg.output, "_bio.csv"), &BIO_HEADER, &records)?;
    for r in &rows {
        println!(
            "N {:5} symbol errors V {:.3e} K {:.3e} Kp {:.3e} W {:.3e} calderon {:.3e}",
            r.panels,
            r.symbol_errors[0],
            r.symbol_errors[1],
            r.symbol_errors[2],
            r.symbol_errors[3],
            r.calderon_defect()
        );
    }
    let orders = observed_orders(&rows, |r| r.symbol_errors[0]);
    println!("observed order of the V symbol error: {orders:.3?}");
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_of_synthetic_rows() {
        let mk = |n: usize, e: f64| BioRow {
            panels: n,
            kappa: 1.0,
            symbol_errors: [e; 4],
            idempotency: 0.0,
            reproduction: 0.0,
            asymmetry_v: 0.0,
            asymmetry_w: 0.0,
            adjoint_defect_k: 0.0,
        };
        let o = observed_orders(&[mk(10, 4e-2), mk(20, 1e-2), mk(40, 2.5e-3)], |r| r.symbol_errors[0]);
        assert!(o.iter().all(|x| (x - 2.0).abs() < 1e-12));
    }

    #[test]
    fn coarse_row_has_small_defects() {
        let r = bio_row(64, 4.3).unwrap();
        assert_eq!(r.record().len(), BIO_HEADER.len());
        assert!(r.calderon_defect() < 0.5);
        assert!(r.asymmetry_v < 1e-10);
    }
}
