//! Plain-text `key = value` configuration shared by all subcommands.

use std::path::{Path, PathBuf};

use fembem::coupling::{CouplingKind, Weighting};
use fembem::fem::ObstacleClosure;
use fembem::krylov::GmresConfig;

use crate::CliError;

/// Every key accepted in a config file or as a `--key value` override.
pub const KEYS: &[&str] = &[
    "kappa_min",
    "kappa_max",
    "kappa_step",
    "couplings",
    "kappa_mesh",
    "points_per_wavelength",
    "gmres_tol",
    "gmres_restart",
    "gmres_maxit",
    "output",
    "refine_near_resonances",
    "plots",
    "closure",
    "kernel_kappas",
    "weighting",
    "bio_panels",
    "bio_kappa",
    "kappa",
    "coupling",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub kappa_min: f64,
    pub kappa_max: f64,
    pub kappa_step: f64,
    pub couplings: Vec<CouplingKind>,
    pub kappa_mesh: f64,
    pub points_per_wavelength: f64,
    pub gmres: GmresConfig,
    pub output: PathBuf,
    pub refine_near_resonances: bool,
    pub plots: bool,
    pub closure: ObstacleClosure,
    pub kernel_kappas: Vec<f64>,
    pub weighting: Weighting,
    pub bio_panels: Vec<usize>,
    pub bio_kappa: f64,
    pub kappa: f64,
    pub coupling: CouplingKind,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            kappa_min: 4.28,
            kappa_max: 4.42,
            kappa_step: 0.002,
            couplings: CouplingKind::ALL.to_vec(),
            kappa_mesh: 10.0,
            points_per_wavelength: 20.0,
            gmres: GmresConfig::default(),
            output: PathBuf::from("out/sweep"),
            refine_near_resonances: true,
            plots: true,
            closure: ObstacleClosure::Natural,
            kernel_kappas: vec![4.30, 4.3268639565, 4.3857419080],
            weighting: Weighting::Energy,
            bio_panels: vec![100, 200, 400],
            bio_kappa: 4.3,
            kappa: 4.30,
            coupling: CouplingKind::JohnsonNedelec,
        }
    }
}

fn bad(key: &str, value: &str, why: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{key} = {value}: {why}"))
}

fn parse_f64(key: &str, value: &str) -> Result<f64, CliError> {
    let v: f64 = value.parse().map_err(|e| bad(key, value, e))?;
    if !v.is_finite() {
        return Err(bad(key, value, "not finite"));
    }
    Ok(v)
}

fn parse_usize(key: &str, value: &str) -> Result<usize, CliError> {
    value.parse().map_err(|e| bad(key, value, e))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, CliError> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(bad(key, value, "expected true or false")),
    }
}

fn parse_list<T>(key: &str, value: &str, item: impl Fn(&str) -> Result<T, CliError>) -> Result<Vec<T>, CliError> {
    let items: Vec<T> =
        value.split(',').map(str::trim).filter(|s| !s.is_empty()).map(item).collect::<Result<_, _>>()?;
    if items.is_empty() {
        return Err(bad(key, value, "empty list"));
    }
    Ok(items)
}

impl Config {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let value = value.trim();
        match key {
            "kappa_min" => self.kappa_min = parse_f64(key, value)?,
            "kappa_max" => self.kappa_max = parse_f64(key, value)?,
            "kappa_step" => self.kappa_step = parse_f64(key, value)?,
            "couplings" => {
                self.couplings = parse_list(key, value, |s| s.parse().map_err(|e| bad(key, s, e)))?;
            }
            "kappa_mesh" => self.kappa_mesh = parse_f64(key, value)?,
            "points_per_wavelength" => self.points_per_wavelength = parse_f64(key, value)?,
            "gmres_tol" => self.gmres.tol = parse_f64(key, value)?,
            "gmres_restart" => self.gmres.restart = parse_usize(key, value)?,
            "gmres_maxit" => self.gmres.max_iter = parse_usize(key, value)?,
            "output" => self.output = PathBuf::from(value),
            "refine_near_resonances" => self.refine_near_resonances = parse_bool(key, value)?,
            "plots" => self.plots = parse_bool(key, value)?,
            "closure" => {
                self.closure = match value.to_ascii_lowercase().as_str() {
                    "natural" | "neumann" => ObstacleClosure::Natural,
                    "dirichlet" => ObstacleClosure::Dirichlet,
                    _ => return Err(bad(key, value, "expected natural or dirichlet")),
                }
            }
            "kernel_kappas" => self.kernel_kappas = parse_list(key, value, |s| parse_f64(key, s))?,
            "weighting" => {
                self.weighting = match value.to_ascii_lowercase().as_str() {
                    "energy" => Weighting::Energy,
                    "mass" => Weighting::Mass,
                    _ => return Err(bad(key, value, "expected energy or mass")),
                }
            }
            "bio_panels" => self.bio_panels = parse_list(key, value, |s| parse_usize(key, s))?,
            "bio_kappa" => self.bio_kappa = parse_f64(key, value)?,
            "kappa" => self.kappa = parse_f64(key, value)?,
            "coupling" => self.coupling = value.parse().map_err(|e| bad(key, value, e))?,
            _ => return Err(CliError::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines on top of the current values. Blank lines and
    /// `#` comments are ignored.
    pub fn merge_text(&mut self, text: &str) -> Result<(), CliError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", lineno + 1)))?;
            self.set(key.trim(), value)?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::default();
        cfg.merge_text(&text)?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let fail = |m: String| Err(CliError::Config(m));
        if !(self.kappa_min > 0.0 && self.kappa_min < self.kappa_max) {
            return fail(format!("need 0 < kappa_min < kappa_max, got {} and {}", self.kappa_min, self.kappa_max));
        }
        if !(self.kappa_step > 0.0) {
            return fail(format!("kappa_step must be positive, got {}", self.kappa_step));
        }
        if (self.kappa_max - self.kappa_min) / self.kappa_step > 1e5 {
            return fail("too many wavenumbers in the sweep".into());
        }
        if !(self.kappa_mesh > 0.0 && self.points_per_wavelength > 0.0) {
            return fail("kappa_mesh and points_per_wavelength must be positive".into());
        }
        if !(self.gmres.tol > 0.0 && self.gmres.restart > 0 && self.gmres.max_iter > 0) {
            return fail("gmres_tol, gmres_restart and gmres_maxit must be positive".into());
        }
        if self.kernel_kappas.iter().chain([&self.bio_kappa, &self.kappa]).any(|k| !(*k > 0.0)) {
            return fail("all wavenumbers must be positive".into());
        }
        if self.bio_panels.iter().any(|&n| n < 8) {
            return fail("bio_panels entries must be at least 8".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_lists() {
        let mut c = Config::default();
        c.merge_text("# sweep\nkappa_min = 4.3 # inline\n\ncouplings = costabel\nbio_panels=10, 20\nrefine_near_resonances = no\n")
            .unwrap();
        assert_eq!(c.kappa_min, 4.3);
        assert_eq!(c.couplings, vec![CouplingKind::Costabel]);
        assert_eq!(c.bio_panels, vec![10, 20]);
        assert!(!c.refine_near_resonances);
        c.validate().unwrap();
    }

    #[test]
    fn rejects_bad_input() {
        let mut c = Config::default();
        assert!(c.merge_text("nonsense").is_err());
        assert!(c.merge_text("unknown = 3").is_err());
        assert!(c.merge_text("kappa_step = abc").is_err());
        assert!(c.merge_text("couplings = ").is_err());
        c.merge_text("kappa_min = 5").unwrap();
        assert!(c.validate().is_err());
    }

    #[test]
    fn every_key_is_settable() {
        let sample = |k: &str| match k {
            "couplings" | "coupling" => "jn",
            "output" => "x/y",
            "refine_near_resonances" | "plots" => "true",
            "closure" => "dirichlet",
            "weighting" => "mass",
            "bio_panels" | "gmres_restart" | "gmres_maxit" => "16",
            _ => "4.5",
        };
        for k in KEYS {
            Config::default().set(k, sample(k)).unwrap();
        }
    }
}
