//! `neqcp`: Casimir-Polder and evanescent-laser potentials as data tables.
//!
//! Exit codes: 0 ok, 2 configuration error, 3 tolerance failure, 4 data or
//! domain error.

mod commands;
mod config;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Context;
use config::{Format, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Tolerance(String),
    Domain(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Tolerance(_) => 3,
            CliError::Domain(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Tolerance(m) => write!(f, "tolerance failure: {m}"),
            CliError::Domain(m) => write!(f, "{m}"),
        }
    }
}

impl From<neqcp::Error> for CliError {
    fn from(e: neqcp::Error) -> Self {
        match e {
            neqcp::Error::Tolerance { .. } => CliError::Tolerance(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "neqcp", version, about = "Equilibrium and nonequilibrium atom-surface potentials")]
struct Cli {
    /// TOML run configuration; built-in defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; overrides output.path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; overrides output.format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Surface-plasmon branch: k, ω_sp(k), ω_−(k) and the pole residue.
    Dispersion,
    /// Field and atom parts of U(L), normalized to U at the plasma wavelength.
    Split,
    /// U(L) with the plasmon branch at each T_sp.
    Imbalance,
    /// One evanescent beam: U(L), or barrier/well maps over the scan axes.
    Laser1,
    /// Two evanescent beams: U(L), or barrier/well maps over the scan axes.
    Laser2,
    /// Counter-propagating beams: U(x, L).
    Lattice,
    /// Runs the oracle checks and reports PASS/FAIL.
    Verify,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    }
    let format = cli.format.unwrap_or(cfg.output.format);
    let path = cli.out.clone().or_else(|| cfg.output.path.clone());
    let hash = cfg.hash();
    let ctx = Context::new(cfg);
    let mut sink: Box<dyn Write> = match &path {
        Some(p) => Box::new(std::io::BufWriter::new(
            std::fs::File::create(p).map_err(|e| CliError::Config(format!("cannot create {}: {e}", p.display())))?,
        )),
        None => Box::new(std::io::stdout().lock()),
    };
    let io = |e: std::io::Error| CliError::Config(format!("write failed: {e}"));

    if let Command::Verify = cli.command {
        let checks = commands::verify(&ctx)?;
        for c in &checks {
            writeln!(sink, "{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail).map_err(io)?;
        }
        sink.flush().map_err(io)?;
        let failed = checks.iter().filter(|c| !c.pass).count();
        return match failed {
            0 => Ok(()),
            n => Err(CliError::Tolerance(format!("{n} of {} checks failed", checks.len()))),
        };
    }
    let table = match cli.command {
        Command::Dispersion => commands::dispersion(&ctx)?,
        Command::Split => commands::split(&ctx)?,
        Command::Imbalance => commands::imbalance(&ctx)?,
        Command::Laser1 => commands::laser1(&ctx)?,
        Command::Laser2 => commands::laser2(&ctx)?,
        Command::Lattice => commands::lattice(&ctx)?,
        Command::Verify => unreachable!(),
    };
    table.write(format, &hash, &mut sink).map_err(io)?;
    sink.flush().map_err(io)?;
    let dest = path.map_or("stdout".into(), |p| p.display().to_string());
    eprintln!("neqcp {}: {} rows to {dest} (config {})", table.command, table.rows.len(), &hash[..12]);
    for (k, v) in &table.meta {
        eprintln!("  {k} = {v}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::from_default_env()
        .filter_level(if cli.verbose { log::LevelFilter::Debug } else { log::LevelFilter::Warn })
        .init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("neqcp: {e}");
            ExitCode::from(e.code())
        }
    }
}
