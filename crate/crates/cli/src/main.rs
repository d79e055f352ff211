//! `srsp`: propagate mixed-state wavefunction ensembles under a
//! semi-relativistic mean-field coupling and audit the conservation laws.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use srsp_cli::commands::converge::{command_converge, ConvergeOptions};
use srsp_cli::commands::run::command_run;
use srsp_cli::commands::verify::{command_verify, VerifyOptions};
use srsp_cli::config::load_config;
use srsp_cli::error::CliError;

#[derive(Parser)]
#[command(name = "srsp", version, about = "Semi-relativistic mean-field ensemble propagator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate the configured ensemble and write diagnostics.csv
    Run {
        /// Path to the run configuration
        config: PathBuf,
    },
    /// Run the verification probes; exits nonzero on any violation
    Verify {
        config: PathBuf,
        /// Trials per probe
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Override the probe seed (defaults to the config seed)
        #[arg(long)]
        seed: Option<u64>,
        /// Corrupt the eigenvalue table first (negative control)
        #[arg(long, hide = true)]
        tamper: bool,
    },
    /// dt-halving and mode-refinement ladders, written to convergence.csv
    Converge {
        config: PathBuf,
        /// Number of dt values in the halving ladder
        #[arg(long, default_value_t = 6)]
        dt_levels: usize,
    },
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config } => command_run(&load_config(&config)?),
        Command::Verify { config, trials, seed, tamper } => {
            command_verify(&load_config(&config)?, &VerifyOptions { trials, seed, tamper })
        }
        Command::Converge { config, dt_levels } => {
            command_converge(&load_config(&config)?, &ConvergeOptions { dt_levels })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.category());
            if let Some(detail) = e.detail() {
                eprintln!("{detail}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
