//! `nullity`: batch runner for the nullity-core experiments.

mod commands;
mod table;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "nullity", version, about = "Sobolev nullity experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON configuration; every field has a default.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (stdout if omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads for independent rows (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Seed for randomized inputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify the committed truth table and compare with the expected verdicts.
    Zoo,
    /// Classify one Cantor set on an (s, p) grid.
    Classify,
    /// Fourier norms of fat Cantor levels, with gap-sum partial sums.
    NormSweep,
    /// Grid capacities cap and Cap of a union of intervals.
    Capacity,
    /// Capacity of small balls and the fitted power law.
    Scaling,
    /// Swiss-cheese non-nullity certificate.
    Cheese,
    /// Trial-function bounds for [-a, a] next to the grid obstacle problem.
    AppendixB,
    /// Sampled threshold curve with its shape checks.
    ThresholdCurve,
}

/// Failure classes, one per exit code.
#[derive(Debug)]
pub enum CliError {
    Mismatch(String),
    NonConvergence(String),
    Config(String),
    Io(std::io::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Mismatch(_) => 2,
            CliError::NonConvergence(_) => 3,
            CliError::Config(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Mismatch(m) => write!(f, "mismatch: {m}"),
            CliError::NonConvergence(m) => write!(f, "non-convergence: {m}"),
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<nullity_core::Error> for CliError {
    fn from(e: nullity_core::Error) -> Self {
        match e {
            nullity_core::Error::NonConvergence { .. } => CliError::NonConvergence(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let raw = match &cli.config {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?,
        None => "{}".to_string(),
    };
    let ctx = commands::Context { seed: cli.seed };
    let (table, verdict) = match cli.command {
        Command::Zoo => commands::zoo(&raw)?,
        Command::Classify => commands::classify(&raw)?,
        Command::NormSweep => commands::norm_sweep(&raw)?,
        Command::Capacity => commands::capacity(&raw)?,
        Command::Scaling => commands::scaling(&raw)?,
        Command::Cheese => commands::cheese(&raw, &ctx)?,
        Command::AppendixB => commands::appendix_b(&raw)?,
        Command::ThresholdCurve => commands::threshold_curve(&raw)?,
    };
    let mut out: Box<dyn Write> = match &cli.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    };
    table.write(cli.format, &mut out)?;
    out.flush()?;
    verdict
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nullity: {e}");
            ExitCode::from(e.code())
        }
    }
}
