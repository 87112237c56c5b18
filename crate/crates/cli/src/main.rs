//! `eea`: build, analyze, certify, mix and audit evolution algebras of
//! graphs.
//!
//! Exit codes: 0 success, 1 certified false (or assertable audit failure),
//! 2 usage or I/O error, 3 inconclusive, 4 resource cap exceeded.

mod commands;
mod family;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eea_core::caps::{DEFAULT_COEFFICIENT_BITS, DEFAULT_ENUMERATION_CAP, DEFAULT_GROUP_ORDER};
use eea_core::{Error, FieldDescriptor, LogBase, ResourceCaps, MAX_ENUMERATION_CAP};

pub const EXIT_FALSE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INCONCLUSIVE: u8 = 3;
pub const EXIT_CAP: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "eea", version, about = "Evolution algebras of expander graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a family member and write its algebra JSON.
    Gen(CommonArgs),
    /// Graph statistics, Cheeger constant, spectrum and structure.
    Analyze(CommonArgs),
    /// Decide whether the algebra is an h-expander (needs --h).
    Certify(CommonArgs),
    /// Simulate the Markov chain of a doubly stochastic algebra.
    Mix(CommonArgs),
    /// Evaluate every applicable quantitative claim.
    Audit(CommonArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
    Dot,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LogBaseArg {
    Natural,
    Two,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Family spec, e.g. `cycle:6`, `lps:5:13`, or `kron cycle:4 cycle:4`.
    #[arg(value_name = "FAMILY", conflicts_with = "input", required_unless_present = "input")]
    pub source: Vec<String>,
    /// Read the algebra from a JSON file instead of a family.
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    /// `rational`, `real` or `prime:<p>`.
    #[arg(long, default_value = "rational", value_parser = parse_field)]
    pub field: FieldDescriptor,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub d: Option<u64>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Use random-walk weights 1/deg on the family's graph.
    #[arg(long)]
    pub walk: bool,
    /// Put 1 on the diagonal.
    #[arg(long)]
    pub loops: bool,
    /// Window length: mixing steps, or the persistency window.
    #[arg(long)]
    pub kmax: Option<usize>,
    /// Mixing threshold.
    #[arg(long, default_value_t = 0.01)]
    pub eps: f64,
    /// Expansion threshold for `certify` (rational, e.g. `2/3`).
    #[arg(long)]
    pub h: Option<String>,
    /// Starting generator for `mix`.
    #[arg(long, default_value_t = 0)]
    pub start: usize,
    /// Audit consecutive seeds `seed..seed+N` of a random family.
    #[arg(long)]
    pub sweep: Option<u64>,
    /// Logarithm base used by the audit bounds.
    #[arg(long, value_enum, default_value = "natural")]
    pub log_base: LogBaseArg,
    /// Exact Cheeger enumeration cap (vertices).
    #[arg(long, env = "EEA_ENUM_CAP", default_value_t = DEFAULT_ENUMERATION_CAP)]
    pub cap: usize,
    /// Bit-length cap for exact plenary coefficients.
    #[arg(long, env = "EEA_MAX_BITS", default_value_t = DEFAULT_COEFFICIENT_BITS)]
    pub max_bits: u64,
    /// Largest group order built by closure.
    #[arg(long, env = "EEA_GROUP_CAP", default_value_t = DEFAULT_GROUP_ORDER)]
    pub group_cap: usize,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the main output here instead of stdout.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

impl CommonArgs {
    pub fn caps(&self) -> Result<ResourceCaps, Error> {
        if self.cap == 0 || self.cap > MAX_ENUMERATION_CAP {
            return Err(Error::InvalidArgument(format!(
                "--cap must lie in 1..={MAX_ENUMERATION_CAP}"
            )));
        }
        if self.max_bits == 0 || self.group_cap == 0 {
            return Err(Error::InvalidArgument("caps must be positive".into()));
        }
        Ok(ResourceCaps {
            enumeration: self.cap,
            coefficient_bits: self.max_bits,
            group_order: self.group_cap,
        })
    }

    pub fn log_base(&self) -> LogBase {
        match self.log_base {
            LogBaseArg::Natural => LogBase::Natural,
            LogBaseArg::Two => LogBase::Two,
        }
    }
}

fn parse_field(s: &str) -> Result<FieldDescriptor, String> {
    FieldDescriptor::parse(s).map_err(|e| e.to_string())
}

/// Exit status for a library error.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Inconclusive { .. } => EXIT_INCONCLUSIVE,
        Error::EnumerationCapExceeded { .. }
        | Error::CoefficientCapExceeded { .. }
        | Error::GroupOrderCapExceeded { .. }
        | Error::RejectionCapExceeded { .. } => EXIT_CAP,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gen(args) => commands::gen(args),
        Command::Analyze(args) => commands::analyze(args),
        Command::Certify(args) => commands::certify(args),
        Command::Mix(args) => commands::mix(args),
        Command::Audit(args) => commands::audit(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(commands::CliError::Core(err)) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
        Err(commands::CliError::Io(err)) => {
            eprintln!("error: {err}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
