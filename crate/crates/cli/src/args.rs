//! Command-line surface.
//!
//! `drazinlab <compute|verify|search|lemmas> [flags]`. Machine-readable JSON
//! goes to stdout (or `--out FILE`, leaving stdout quiet); a human summary
//! goes to stderr. Exit codes classify outcomes: 0 pass, 1 identity failure,
//! 2 parse error, 3 dimension/field error, 4 conditions not met, 5 space too
//! large, 6 sampling exhausted.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "drazinlab",
    version,
    about = "Exact Drazin inverses and identity verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Parallel workers for per-pair verification (default: DRAZINLAB_JOBS or 1)
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the Drazin inverse, index and spectral idempotent of a matrix
    Compute(ComputeArgs),
    /// Check the condition flags of a pair and verify the identity suite
    Verify(VerifyArgs),
    /// Generate witness pairs, exhaustively or by sampling
    Search(SearchArgs),
    /// Run the supporting-identity table for a pair
    Lemmas(LemmasArgs),
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    /// Matrix JSON file
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,

    /// Write the report here instead of stdout
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Pair JSON file ({"a": .., "b": ..}, an array of those, or a search batch)
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,

    /// Identities to run (default: product,asymmetry,sum,xi-relation,commuting-sum)
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    pub identities: Option<Vec<IdentityKind>>,

    /// Depth for the supporting-identity suite; passing this adds `lemmas`
    /// to the identity list
    #[arg(long = "lemmas-depth", value_name = "K")]
    pub lemmas_depth: Option<usize>,

    /// Only compute and report the condition flags, never failing on them
    #[arg(long)]
    pub allow_unconditioned: bool,

    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Field tag: `"q"` or `"gf:<p>"`
    #[arg(long)]
    pub field: String,

    /// Matrix dimension n
    #[arg(long)]
    pub dim: usize,

    #[arg(long, value_enum)]
    pub mode: ModeArg,

    /// Number of pairs to sample (ignored in exhaustive mode)
    #[arg(long, default_value_t = 10)]
    pub count: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Keep only pairs with ab != ba
    #[arg(long)]
    pub noncommuting: bool,

    /// Run the identity suite on every pair and append verdicts
    #[arg(long)]
    pub verify: bool,

    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LemmasArgs {
    /// Pair JSON file
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,

    /// Indexed identities run for i = 1..=depth (raised to the dimension)
    #[arg(long, default_value_t = 4)]
    pub depth: usize,

    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Random,
    Commuting,
    Block,
}

/// Selectable identity checks. `CommutingSum` runs only on commuting pairs
/// (it is skipped, not failed, elsewhere); `Asymmetry` is informational and
/// never drives the exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IdentityKind {
    Product,
    Asymmetry,
    Sum,
    XiRelation,
    CommutingSum,
    Lemmas,
}

impl IdentityKind {
    pub fn default_set() -> Vec<IdentityKind> {
        vec![
            IdentityKind::Product,
            IdentityKind::Asymmetry,
            IdentityKind::Sum,
            IdentityKind::XiRelation,
            IdentityKind::CommutingSum,
        ]
    }
}
