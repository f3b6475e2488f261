//! Command line parsing: a subcommand, an optional config file and per-key overrides.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Arg, ArgMatches, Command};

use crate::config::KEYS;
use crate::{CliError, Config};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Sweep,
    KernelStudy,
    BioVerify,
    Solve,
}

impl Subcommand {
    pub const ALL: [Subcommand; 4] =
        [Subcommand::Sweep, Subcommand::KernelStudy, Subcommand::BioVerify, Subcommand::Solve];

    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Sweep => "sweep",
            Subcommand::KernelStudy => "kernel-study",
            Subcommand::BioVerify => "bio-verify",
            Subcommand::Solve => "solve",
        }
    }

    fn about(self) -> &'static str {
        match self {
            Subcommand::Sweep => "Error and sigma_min sweep over a wavenumber range on a fixed mesh",
            Subcommand::KernelStudy => "Smallest singular pairs of the local boundary operators",
            Subcommand::BioVerify => "Symbol errors and Calderon defects of the boundary operators",
            Subcommand::Solve => "Single GOSM solve with trace and volume dumps",
        }
    }
}

pub fn flag_name(key: &str) -> String {
    key.replace('_', "-")
}

pub fn command() -> Command {
    let sub = |s: Subcommand| {
        let mut c = Command::new(s.name())
            .about(s.about())
            .arg(Arg::new("config").long("config").value_name("PATH").help("key = value configuration file"));
        for key in KEYS {
            c = c.arg(Arg::new(*key).long(flag_name(key)).value_name("VALUE").help(format!("override '{key}'")));
        }
        c
    };
    Command::new("fembem")
        .about("FEM-BEM coupling lab for exterior Helmholtz scattering")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .subcommands(Subcommand::ALL.map(sub))
}

fn config_from(m: &ArgMatches) -> Result<Config, CliError> {
    let mut cfg = match m.get_one::<String>("config") {
        Some(p) => Config::from_file(&PathBuf::from(p))?,
        None => Config::default(),
    };
    for key in KEYS {
        if let Some(v) = m.get_one::<String>(key) {
            cfg.set(key, v)?;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Parses arguments; `Err(clap::Error)` covers help, version and usage errors.
pub fn parse<I, T>(args: I) -> Result<Result<(Subcommand, Config), CliError>, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let m = command().try_get_matches_from(args)?;
    let (name, sm) = m.subcommand().expect("subcommand is required");
    let sub = Subcommand::ALL.into_iter().find(|s| s.name() == name).expect("registered subcommand");
    Ok(config_from(sm).map(|c| (sub, c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use fembem::coupling::CouplingKind;

    #[test]
    fn overrides_apply_after_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.cfg");
        std::fs::write(&path, "kappa_min = 4.30\nkappa_step = 0.01\n").unwrap();
        let (sub, cfg) = parse([
            "fembem",
            "sweep",
            "--config",
            path.to_str().unwrap(),
            "--kappa-step",
            "0.005",
            "--couplings",
            "costabel",
            "--output",
            "x/run",
        ])
        .unwrap()
        .unwrap();
        assert_eq!(sub, Subcommand::Sweep);
        assert_eq!(cfg.kappa_min, 4.30);
        assert_eq!(cfg.kappa_step, 0.005);
        assert_eq!(cfg.couplings, vec![CouplingKind::Costabel]);
        assert_eq!(cfg.output, PathBuf::from("x/run"));
    }

    #[test]
    fn configuration_errors_are_reported() {
        let r = parse(["fembem", "solve", "--kappa-min", "5"]).unwrap();
        assert_eq!(r.unwrap_err().exit_code(), 1);
        assert!(parse(["fembem", "solve", "--config", "/nonexistent/file"]).unwrap().is_err());
        assert!(parse(["fembem", "bogus"]).is_err());
        command().debug_assert();
    }
}
