//! Argument parsing and subcommands for the `cvclone` binary.
//!
//! Every subcommand produces a report (JSON or CSV) plus a pass/fail verdict.
//! Exit codes: 0 success, 1 tolerance failure, 2 usage error.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cvclone::{Complex64, Error};

mod commands;

pub use commands::Outcome;

/// Acceptance tolerance for simulated-vs-closed-form comparisons.
pub const TOLERANCE: f64 = 1e-9;
/// Largest N accepted on the command line.
pub const MAX_N: u32 = 64;

pub const EXIT_OK: u8 = 0;
pub const EXIT_TOLERANCE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "cvclone",
    version,
    about = "Gaussian cloning and telecloning experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the 1→N cloner and report per-clone moments and fidelities.
    Clone(CloneArgs),
    /// Tabulate the simulated clone Q function against the closed form.
    Qgrid(GridArgs),
    /// Run telecloning over the multimode resource state.
    Teleclone(TelecloneArgs),
    /// Cross-check the Gaussian backend against the truncated-Fock simulator.
    OracleCheck(OracleArgs),
    /// Simulated and closed-form fidelity for a range of N.
    FidelityTable(TableArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Report format (defaults to json, or csv for tabular subcommands).
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct CloneArgs {
    /// Number of clones.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=MAX_N as i64))]
    pub n: u32,
    /// Input amplitude as "re,im".
    #[arg(long, default_value = "0,0", value_parser = parse_complex, allow_hyphen_values = true)]
    pub xi: Complex64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[command(flatten)]
    pub clone: CloneArgs,
    /// Grid center as "re,im" (defaults to ξ).
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub center: Option<Complex64>,
    /// Half-width of the grid along each axis.
    #[arg(long, default_value_t = 3.0)]
    pub half_width: f64,
    /// Points per axis.
    #[arg(long, default_value_t = 41)]
    pub points: usize,
}

#[derive(Debug, Clone, Args)]
pub struct TelecloneArgs {
    /// Number of clones.
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..=MAX_N as i64))]
    pub n: u32,
    /// Input amplitude as "re,im".
    #[arg(long, default_value = "0,0", value_parser = parse_complex, allow_hyphen_values = true)]
    pub xi: Complex64,
    /// Monte Carlo seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Monte Carlo shots.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(2..))]
    pub samples: u64,
    /// Include every Bell outcome in the report.
    #[arg(long)]
    pub log_outcomes: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    /// Number of clones.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=MAX_N as i64))]
    pub n: u32,
    /// Input amplitude as "re,im".
    #[arg(long, default_value = "0,0", value_parser = parse_complex, allow_hyphen_values = true)]
    pub xi: Complex64,
    /// Fock levels kept per vibrational mode.
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(2..=512))]
    pub cutoff: u32,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    /// Smallest N in the table.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=MAX_N as i64))]
    pub n_min: u32,
    /// Largest N in the table.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..=MAX_N as i64))]
    pub n_max: u32,
    /// Input amplitude as "re,im".
    #[arg(long, default_value = "1,0", value_parser = parse_complex, allow_hyphen_values = true)]
    pub xi: Complex64,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// Parses `"re,im"` (or a bare real number).
pub fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let parse = |p: &str| {
        p.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("expected a finite number, got {p:?}"))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(parse(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(parse(re)?, parse(im)?)),
        _ => Err(format!("expected \"re,im\", got {s:?}")),
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Simulation(Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Simulation(e) => write!(f, "simulation error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(msg) => CliError::Usage(msg),
            other => CliError::Simulation(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Simulation(_) => EXIT_TOLERANCE,
        }
    }
}

/// Runs a parsed command without touching stdout or the filesystem.
pub fn run(cli: &Cli) -> std::result::Result<Outcome, CliError> {
    match &cli.command {
        Command::Clone(a) => commands::clone(a),
        Command::Qgrid(a) => commands::qgrid(a),
        Command::Teleclone(a) => commands::teleclone(a),
        Command::OracleCheck(a) => commands::oracle_check(a),
        Command::FidelityTable(a) => commands::fidelity_table(a),
    }
}

fn output_args(cli: &Cli) -> &OutputArgs {
    match &cli.command {
        Command::Clone(a) => &a.out,
        Command::Qgrid(a) => &a.clone.out,
        Command::Teleclone(a) => &a.out,
        Command::OracleCheck(a) => &a.out,
        Command::FidelityTable(a) => &a.out,
    }
}

/// Runs a command, writes its report and returns the process exit code.
pub fn execute(cli: &Cli) -> u8 {
    let outcome = match run(cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("{e}");
            return e.exit_code();
        }
    };
    let written = match &output_args(cli).output {
        Some(path) => fs::write(path, &outcome.body),
        None => io::stdout().lock().write_all(&outcome.body),
    };
    if let Err(e) = written {
        eprintln!("cannot write report: {e}");
        return EXIT_USAGE;
    }
    eprintln!(
        "{} [{}]",
        outcome.summary,
        if outcome.passed { "ok" } else { "FAIL" }
    );
    if outcome.passed {
        EXIT_OK
    } else {
        EXIT_TOLERANCE
    }
}
