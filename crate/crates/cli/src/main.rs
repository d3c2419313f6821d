mod commands;
mod config;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use config::{CommonArgs, Format, RunConfig};

/// Norms, densities, potentials and QES spectra of the supersymmetric
/// two-center Coulomb problem.
#[derive(Debug, Parser)]
#[command(name = "twocenter", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Zero-mode norms for every --hbar value.
    Norm,
    /// |Ψ|² on the grid; --kind takes a ground-state kind or bound:n,m,sign,parity.
    Density {
        /// Divide by the norm.
        #[arg(long)]
        normalize: bool,
    },
    /// Explicit bound-state data at delta = 1, QES energies otherwise.
    Spectrum,
    /// Sector potential on the grid.
    Potential,
    /// Invariant checks with measured residuals.
    Verify,
}

fn init_workers() -> Result<()> {
    if let Ok(v) = std::env::var("TWOCENTER_WORKERS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .with_context(|| format!("TWOCENTER_WORKERS must be a positive integer, got {v:?}"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn open_output(cfg: &RunConfig) -> Result<Box<dyn Write>> {
    Ok(match &cfg.out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<()> {
    init_workers()?;
    let cfg = config::resolve(&cli.common)?;
    let table = match cli.command {
        Command::Norm => commands::cmd_norm(&cfg)?,
        Command::Density { normalize } => commands::cmd_density(&cfg, normalize)?,
        Command::Spectrum => commands::cmd_spectrum(&cfg)?,
        Command::Potential => commands::cmd_potential(&cfg)?,
        Command::Verify => {
            let reports = commands::cmd_verify(&cfg)?;
            let mut out = open_output(&cfg)?;
            match cfg.format {
                Format::Json => {
                    serde_json::to_writer_pretty(&mut out, &reports)?;
                    writeln!(out)?;
                }
                Format::Csv => commands::verify_table(&cfg, &reports).write(Format::Csv, &mut out)?,
            }
            out.flush()?;
            return Ok(());
        }
    };
    let mut out = open_output(&cfg)?;
    table.write(cfg.format, &mut out)?;
    out.flush()?;
    Ok(())
}

fn report(kind: &str, message: String, causes: Vec<String>) {
    let body = serde_json::json!({ "error": kind, "message": message, "causes": causes });
    eprintln!("{body}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            report("usage", e.kind().to_string(), vec![e.to_string().trim().to_string()]);
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            report("runtime", e.to_string(), e.chain().skip(1).map(|c| c.to_string()).collect());
            ExitCode::FAILURE
        }
    }
}
