//! Library side of the `ktoeplitz` command-line tool: argument types, config
//! loading, the subcommands and their output writers.

pub mod commands;
pub mod output;
pub mod presets;
pub mod svg;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "ktoeplitz", version, about = "Spectra, edge modes and interface modes of tridiagonal k-Toeplitz operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Essential spectrum, edge report, truncation and homotopy data of one cell.
    Spectrum(Common),
    /// Truncation spectra against their open limit Γ ∪ G₀.
    Openlimit(Common),
    /// Interface assembly spectrum, interface modes and matching functions.
    Interface(Common),
    /// Damped resonator chain resonances, gap modes and perturbation sweeps.
    Resonators(Common),
    /// Disordered chiral chains: zero mode and decay-rate statistics.
    Disorder(Common),
    /// Finite-difference continuum study: bands, σ(B₀) convergence, F(ω²).
    Fdm(Common),
    /// List the bundled presets.
    Presets,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::Openlimit(_) => "openlimit",
            Command::Interface(_) => "interface",
            Command::Resonators(_) => "resonators",
            Command::Disorder(_) => "disorder",
            Command::Fdm(_) => "fdm",
            Command::Presets => "presets",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// JSON config file.
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    pub config: Option<PathBuf>,
    /// Bundled preset name (see `ktoeplitz presets`).
    #[arg(long)]
    pub preset: Option<String>,
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Overrides the config's RNG seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overrides the config's α sample count.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Also write SVG plots.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] ktoeplitz::Error),
}

impl CliError {
    /// 2 for bad configs and unwritable outputs, 3 for numerical failures,
    /// 4 for internal consistency violations.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Core(ktoeplitz::Error::Consistency(_)) => 4,
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Core(_) => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Runs one parsed command and returns the files it wrote.
pub fn run(cli: &Cli) -> CliResult<Vec<PathBuf>> {
    let name = cli.command.name();
    match &cli.command {
        Command::Presets => {
            let width = presets::PRESETS.iter().map(|p| p.name.len()).max().unwrap_or(0);
            for p in presets::PRESETS {
                println!("{:<width$}  {:<11} {}", p.name, p.command, presets::description(p));
            }
            Ok(vec![])
        }
        Command::Spectrum(c) => commands::run_with(name, c, commands::spectrum::run),
        Command::Openlimit(c) => commands::run_with(name, c, commands::openlimit::run),
        Command::Interface(c) => commands::run_with(name, c, commands::interface::run),
        Command::Resonators(c) => commands::run_with(name, c, commands::resonators::run),
        Command::Disorder(c) => commands::run_with(name, c, commands::disorder::run),
        Command::Fdm(c) => commands::run_with(name, c, commands::fdm::run),
    }
}
