//! Command-line front end. Every command loads its inputs, calls into
//! `morita-core` and renders a [`report::Report`].

pub mod commands;
pub mod expr;
pub mod input;
pub mod report;

use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use report::{Format, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_REFUTED: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_NO_INPUT: i32 = 66;
pub const EXIT_VIOLATION: i32 = 70;
pub const EXIT_CANT_CREATE: i32 = 73;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid input: {0}")]
    Data(String),
    #[error("cannot open input: {0}")]
    MissingInput(String),
    #[error("theorem violation: {0}")]
    Violation(String),
    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
            CliError::MissingInput(_) => EXIT_NO_INPUT,
            CliError::Violation(_) => EXIT_VIOLATION,
            CliError::Output(_) => EXIT_CANT_CREATE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Machine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    Direct,
    Chain,
    Both,
}

#[derive(Debug, Parser)]
#[command(name = "morita-kit", version, about = "Finite inverse semigroups and their Morita equivalence")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Text, global = true)]
    pub format: FormatArg,
    /// Largest semigroup a construction expression may build.
    #[arg(long, default_value_t = 256, global = true)]
    pub limit: usize,
    #[command(subcommand)]
    pub command: Command,
}

/// Inputs are table files (`n=...`), context files (`context`), files
/// holding an expression, or expressions given inline.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a table is an inverse semigroup.
    Validate { input: String },
    /// Structural invariants.
    Invariants { input: String },
    /// Covering pairs of the natural partial order.
    Order { input: String },
    /// Universal groupoid of germs.
    Groupoid {
        input: String,
        /// Restrict to ultrafilters.
        #[arg(long)]
        tight: bool,
    },
    /// Tight groupoid.
    Tight { input: String },
    /// The idempotent splitting and its subcategory of split monos.
    Karoubi { input: String },
    /// Decide equivalence of the idempotent splittings.
    CatEquiv { left: String, right: String },
    /// Check whether a subset (indices or element names, comma separated) is enlarged by the semigroup.
    EnlargeCheck { input: String, subset: String },
    /// Write the canonical context of an enlargement.
    ContextFromEnlargement {
        input: String,
        subset: String,
        #[arg(short = 'o')]
        output: PathBuf,
    },
    /// Verify a context and its derived identities.
    ContextVerify { input: String },
    /// Tensor two contexts.
    Compose {
        left: String,
        right: String,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Groupoid equivalence witness for a context.
    Witness { input: String },
    /// Search for an equivalence bimodule.
    MeSearch {
        left: String,
        right: String,
        #[arg(long, default_value_t = 8)]
        max_x: usize,
        /// Seconds per strategy.
        #[arg(long, default_value_t = 30)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Strategy::Both)]
        strategy: Strategy,
        /// Largest semigroup visited by the chain strategy.
        #[arg(long, default_value_t = 64)]
        max_chain: usize,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Compare the invariants of two semigroups.
    Compare { left: String, right: String },
}

pub struct Outcome {
    pub report: Report,
    pub code: i32,
}

/// Parses `argv` (program name first), runs the command and returns the
/// rendered output, the text for stderr and the exit code.
pub fn run(argv: &[String]) -> (String, String, i32) {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK { (text, String::new(), code) } else { (String::new(), text, code) };
        }
    };
    let format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Machine => Format::Machine,
    };
    let echo = argv.iter().skip(1).cloned().collect::<Vec<_>>().join(" ");
    match commands::dispatch(&cli, echo) {
        Ok(out) => (out.report.render(format), String::new(), out.code),
        Err(e) => (String::new(), format!("morita-kit: {e}\n"), e.exit_code()),
    }
}

pub(crate) fn budget(secs: u64) -> Result<Duration, CliError> {
    if secs == 0 {
        return Err(CliError::Usage("--budget must be positive".into()));
    }
    Ok(Duration::from_secs(secs))
}
