//! Library half of the `ergo` binary: argument definitions, element I/O,
//! report rendering and the verification suites.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub mod commands;
pub mod input;
pub mod output;
pub mod verify;

pub use input::{parse_element, parse_set};
pub use output::{emit_report, Format, Output};
pub use verify::{run_verify, RunReport, Scale, Suite};

/// Seed used by randomized commands when `--seed` is absent.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] ergo_core::Error),
}

impl CliError {
    /// 1 for a failed consistency check, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(ergo_core::Error::CriterionMismatch { .. }) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ergo", version, about = "Exact computations in full groups of the dyadic odometer")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

/// Elements are given as inline JSON, a file path, or `-` for stdin.
/// Sets are JSON too, or the shorthand `depth:s,s,…` (e.g. `2:0,3`).
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the seeded property suites.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value = "quick")]
        scale: Scale,
    },
    /// Index of an element.
    Index { element: String },
    /// The product `U∘V`.
    Compose { u: String, v: String },
    Inverse { element: String },
    /// First-return map of an element on a set.
    Induce {
        element: String,
        #[arg(long)]
        set: String,
    },
    /// Periodic, almost positive and almost negative parts.
    Decompose { element: String },
    /// A positive element as a product of induced odometers.
    FactorPositive { element: String },
    /// Induced odometers and periodic factors followed by a power of T.
    NormalForm { element: String },
    /// A periodic element as a product of involutions.
    FactorInvolutions { element: String },
    /// Whether a set supports an n-cycle of its induced odometer.
    Ncycle {
        #[arg(long)]
        set: String,
        /// Cycle length.
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 6)]
        max_extra_depth: u32,
    },
    /// Two-sided escape times of a set.
    Escape {
        #[arg(long)]
        set: String,
    },
    /// Escape integrals of the tower family A_1, …, A_max_m.
    EscapeFamily {
        #[arg(long, default_value_t = 6)]
        max_m: u32,
    },
    /// Distance table of the skyscraper involutions, or one of them with `--n`.
    Counterexample {
        #[arg(long, default_value_t = 10)]
        max_n: u32,
        #[arg(long, conflicts_with = "max_n")]
        n: Option<u32>,
    },
    /// A random element.
    Random {
        #[arg(long, default_value_t = 4)]
        depth: u32,
        /// Wrap bound: cocycle values lie within `max_shift + 1` turns.
        #[arg(long, default_value_t = 2)]
        max_shift: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

/// Runs a parsed command line, returning the rendered output and exit code.
pub fn run(cli: &Cli) -> Result<(Vec<u8>, i32), CliError> {
    let (out, status) = commands::execute(&cli.command)?;
    Ok((emit_report(&out, cli.format), status))
}
