//! `bundling`: command-line front end for the bundling solver.

mod commands;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use output::Formats;

#[derive(Parser, Debug)]
#[command(name = "bundling", version, about = "Optimal nested bundling: demand, dominance, menus and LP certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Output directory for artifacts; nothing is written when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Artifact formats to write.
    #[arg(long, default_value = "csv,json", value_parser = Formats::parse)]
    format: Formats,
    /// Type and quantity grid size (overrides the spec).
    #[arg(long, value_parser = clap::value_parser!(u64).range(17..=65537))]
    grid: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sales volumes, dominance relation and assumption checks.
    Analyze {
        #[arg(long)]
        spec: PathBuf,
        /// Print the dominance Hasse diagram as DOT.
        #[arg(long)]
        hasse: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Minimal optimal nested menu with prices and its certificate.
    Solve {
        #[arg(long)]
        spec: PathBuf,
        /// LP discretization for the certificate; 0 skips the LP.
        #[arg(long, default_value_t = 201)]
        types: usize,
        /// Print the menu as CSV on stdout.
        #[arg(long)]
        csv: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Discretized mechanism LP against the best nested menu.
    Verify {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 201)]
        types: usize,
        /// Write the full LP in CPLEX LP format.
        #[arg(long)]
        dump_lp: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Menus along the two-item power family over a range of β.
    Sweep {
        #[arg(long, default_value_t = 0.5)]
        gamma: f64,
        #[arg(long = "beta-range", default_value = "0.1:2.0:0.1", value_parser = commands::parse_range)]
        beta_range: (f64, f64, f64),
        /// Add LP verdicts with this many types.
        #[arg(long)]
        types: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Quality menu from the sales-volume and average-cost envelopes.
    Quality {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Whether requiring a costly action is optimal.
    Screening {
        #[arg(long)]
        spec: PathBuf,
        /// Cross-check on the embedded bundle problem with this many LP types.
        #[arg(long)]
        types: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Full two-item example: γ ∈ {0.5, 4.5} over the β grid with verdicts.
    #[command(name = "reproduce-example1")]
    ReproduceExample1 {
        #[arg(long, default_value_t = 201)]
        types: usize,
        #[command(flatten)]
        common: Common,
    },
}

/// Errors surfaced to the user as JSON on stderr.
#[derive(Debug)]
pub enum CliError {
    Model(bundling::Error),
    Input(String),
    /// The certificate failed; the payload was already printed.
    Invalid(String),
    Internal(String),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> CliError {
        CliError::Input(format!("{}: {e}", path.display()))
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Model(e) if e.is_validation() => 2,
            CliError::Input(_) => 2,
            CliError::Invalid(_) => 3,
            CliError::Model(_) | CliError::Internal(_) => 4,
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            CliError::Model(e) => json!({ "error": e.kind(), "message": e.to_string() }),
            CliError::Input(m) => json!({ "error": "input", "message": m }),
            CliError::Invalid(m) => json!({ "error": "certificate_invalid", "message": m }),
            CliError::Internal(m) => json!({ "error": "internal", "message": m }),
        }
    }
}

impl From<bundling::Error> for CliError {
    fn from(e: bundling::Error) -> Self {
        CliError::Model(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze { spec, hasse, common } => commands::analyze(&spec, hasse, &common),
        Command::Solve { spec, types, csv, common } => commands::solve(&spec, types, csv, &common),
        Command::Verify { spec, types, dump_lp, common } => commands::verify(&spec, types, dump_lp, &common),
        Command::Sweep { gamma, beta_range, types, common } => commands::sweep(gamma, beta_range, types, &common),
        Command::Quality { spec, common } => commands::quality(&spec, &common),
        Command::Screening { spec, types, common } => commands::screening(&spec, types, &common),
        Command::ReproduceExample1 { types, common } => commands::reproduce_example1(types, &common),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
