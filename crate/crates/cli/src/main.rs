//! `relcli`: reliability analysis of fading wireless links from JSON model files.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "relcli", version, about = "Reliability block diagram analysis of fading wireless links")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct GridArgs {
    /// End of the evaluation grid (overrides the model file)
    #[arg(long = "grid-tmax")]
    pub t_max: Option<f64>,
    /// Number of grid intervals (overrides the model file)
    #[arg(long = "grid-steps")]
    pub steps: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Survival, hazard and density curves plus a mean TTTF / deadline summary
    Analyze {
        /// Model file (JSON)
        model: PathBuf,
        /// Output directory, created if missing
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        /// Number of independent retransmissions to model in parallel
        #[arg(long)]
        retransmissions: Option<usize>,
    },
    /// Birnbaum and improvement importance over the grid
    Importance {
        /// Model file (JSON)
        model: PathBuf,
        /// Output directory, created if missing
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Monte Carlo cross-check of the analytic survival curve
    Simulate {
        /// Model file (JSON)
        model: PathBuf,
        /// Number of simulated systems
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        /// Output directory, created if missing
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        /// Simulate the system with this many retransmissions
        #[arg(long)]
        retransmissions: Option<usize>,
    },
    /// Print the model in canonical form (distributions as parameters)
    Export {
        /// Model file (JSON)
        model: PathBuf,
    },
}

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Invalid(String),
    Numerical(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Invalid(m) => f.write_str(m),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<linkrel::Error> for CliError {
    fn from(e: linkrel::Error) -> Self {
        use linkrel::Error as E;
        match e {
            E::QuadratureFailure { .. } | E::HazardUndefined { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Analyze { model, out, grid, retransmissions } => {
            commands::analyze(&model, &out, &grid, retransmissions)
        }
        Command::Importance { model, out, grid } => commands::importance(&model, &out, &grid),
        Command::Simulate { model, samples, seed, out, grid, retransmissions } => {
            commands::simulate(&model, &out, &grid, samples, seed, retransmissions)
        }
        Command::Export { model } => commands::export(&model),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("relcli: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
