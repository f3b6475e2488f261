use std::process::ExitCode;

use fembem_cli::args::{parse, Subcommand};
use fembem_cli::{bio, kernel, solve, sweep, CliError};

fn run(sub: Subcommand, cfg: &fembem_cli::Config) -> Result<i32, CliError> {
    match sub {
        Subcommand::Sweep => {
            let out = sweep::run_sweep(cfg)?;
            println!("wrote {} rows to {}", out.rows.len(), out.csv.display());
            for p in &out.plots {
                println!("wrote {}", p.display());
            }
            let failed = out.failures();
            if failed > 0 {
                eprintln!("{failed} rows failed");
                return Ok(2);
            }
        }
        Subcommand::KernelStudy => {
            kernel::run_kernel_study(cfg)?;
        }
        Subcommand::BioVerify => {
            bio::run_bio_verify(cfg)?;
        }
        Subcommand::Solve => {
            let s = solve::run_solve(cfg)?;
            if s.coupling().row.failed {
                return Ok(2);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let parsed = match parse(std::env::args_os()) {
        Ok(p) => p,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let code = match parsed.and_then(|(sub, cfg)| run(sub, &cfg)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
