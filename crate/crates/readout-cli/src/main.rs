//! `readout`: dispersive qubit readout simulator.
//!
//! Subcommands share one TOML run configuration (see `--print-defaults`)
//! and emit versioned CSV to stdout or `--out`. Exit codes: 0 success,
//! 2 configuration error, 3 infeasible operating point, 4 internal
//! consistency failure.

mod commands;
mod config;
mod presets;
mod table;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use readout_sim::error::ReadoutError;

use crate::config::{Resolved, RunConfig};

/// Top-level failure, mapped onto the documented exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Unusable configuration or command line.
    #[error("configuration error: {0}")]
    Config(String),
    /// Output could not be written or input could not be read.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    /// Simulator rejected the run.
    #[error(transparent)]
    Sim(#[from] ReadoutError),
    /// Monte Carlo statistics disagreed with the analytic pipeline.
    #[error("monte-carlo validation failed: {0}")]
    Validation(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Sim(error) => match error {
                ReadoutError::Infeasible { .. } => 3,
                ReadoutError::UnequalNoise { .. }
                | ReadoutError::NegativeVariance { .. }
                | ReadoutError::TimeGridTooCoarse { .. } => 4,
                _ => 2,
            },
            CliError::Validation(_) => 4,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "readout",
    version,
    about = "Dispersive qubit readout: steady-state, pulsed, and Monte Carlo runs"
)]
struct Cli {
    /// TOML run configuration; defaults apply when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Worker threads for sweeps; library default when omitted.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// Print the default configuration as TOML and exit.
    #[arg(long)]
    print_defaults: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Steady-state single-mode sweep over the pull ratio.
    SingleMode,
    /// Pulsed readout sweep: window, pull, bandwidth, or photon number.
    Multimode,
    /// Intracavity photon number over time.
    CavityPhotons,
    /// Optimize the pulse photon number and window under the photon cap.
    Optimize,
    /// Monte Carlo check of the analytic pipeline.
    Validate {
        /// RNG seed.
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Print a named preset configuration; without a name, list presets.
    Preset {
        /// Preset name.
        name: Option<String>,
    },
}

fn load_config(path: Option<&Path>) -> Result<RunConfig, CliError> {
    match path {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| {
                CliError::Config(format!("cannot read {}: {e}", path.display()))
            })?;
            RunConfig::from_toml(&text)
        }
        None => Ok(RunConfig::default()),
    }
}

fn write_output(path: Option<&Path>, buffer: &[u8]) -> Result<(), CliError> {
    match path {
        Some(path) => fs::write(path, buffer)?,
        None => std::io::stdout().write_all(buffer)?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Config(format!("cannot size the thread pool: {e}")))?;
    }

    if cli.print_defaults {
        let text = RunConfig::default().to_toml();
        return write_output(cli.out.as_deref(), text.as_bytes());
    }

    let command = cli
        .command
        .ok_or_else(|| CliError::Config("missing subcommand; see --help".into()))?;

    let mut buffer = Vec::new();
    let result = match &command {
        Command::Preset { name } => match name {
            None => {
                for preset in presets::names() {
                    writeln!(&mut buffer, "{preset}")?;
                }
                Ok(())
            }
            Some(name) => match presets::lookup(name) {
                Some(text) => {
                    buffer.extend_from_slice(text.as_bytes());
                    Ok(())
                }
                None => Err(CliError::Config(format!(
                    "unknown preset \"{name}\"; known presets: {}",
                    presets::names().collect::<Vec<_>>().join(", ")
                ))),
            },
        },
        _ => {
            let config = load_config(cli.config.as_deref())?;
            let resolved = Resolved::from_config(&config)?;
            match &command {
                Command::SingleMode => commands::single_mode(&resolved, &mut buffer),
                Command::Multimode => commands::multimode(&resolved, &mut buffer),
                Command::CavityPhotons => commands::cavity_photons(&resolved, &mut buffer),
                Command::Optimize => commands::optimize(&resolved, &mut buffer),
                Command::Validate { seed } => {
                    commands::validate_cmd(&resolved, *seed, &mut buffer)
                }
                Command::Preset { .. } => unreachable!("handled above"),
            }
        }
    };
    write_output(cli.out.as_deref(), &buffer)?;
    result
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(error.exit_code())
        }
    }
}
