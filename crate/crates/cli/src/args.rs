use std::path::PathBuf;

use avoidance_core::enumerate::DEFAULT_WARN_NODES;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "avoidance", version, about = "Enumerate pattern-avoiding permutations and analyze their counting sequences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads (default: one per core).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count avoiders of a pattern set for every length up to --n.
    Count(CountArgs),
    /// Run a structural verification suite.
    Verify(VerifyArgs),
    /// Guess generating functions and estimate growth for a series.
    Analyze(AnalyzeArgs),
}

/// A pattern set given literally or as a family.
#[derive(Args, Debug, Clone, Default)]
pub struct ClassArgs {
    /// Comma-separated patterns, e.g. 123,132.
    #[arg(long, value_name = "LIST")]
    pub patterns: Option<String>,

    /// Family A(k) or A(k,i): `A 5`, `A 5 1`, `A(5,1)`, or `A` with --k/--i.
    #[arg(long, num_args = 1..=3, value_name = "FAMILY")]
    pub family: Option<Vec<String>>,

    #[arg(long)]
    pub k: Option<usize>,

    #[arg(long)]
    pub i: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[command(flatten)]
    pub class: ClassArgs,

    /// Largest length to count.
    #[arg(long)]
    pub n: usize,

    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Warn when the enumeration is projected to visit more nodes.
    #[arg(long, default_value_t = DEFAULT_WARN_NODES)]
    pub warn_nodes: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// The map from Av(A(k,k-1)) into Av(A(k,k)).
    Injection,
    /// Robinson-Schensted round trip, involutions and descents.
    Rsk,
    /// av_n(A(k)) = n av_(n-1)(12..k-1) against enumeration.
    ProductFormula,
    /// Rank-word encoding round trip and injectivity.
    RankWords,
    /// Tableau lower bound against av_n(A(k,k)).
    LowerBound,
    /// Squared tableau counts against av_n(12..k).
    Tableaux,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,

    #[arg(long)]
    pub k: Option<usize>,

    /// Largest length to check.
    #[arg(long)]
    pub n: usize,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Series file (JSON or CSV) to analyze.
    #[arg(long, conflicts_with_all = ["patterns", "family"])]
    pub input: Option<PathBuf>,

    #[command(flatten)]
    pub class: ClassArgs,

    /// Largest length to count when the series comes from a pattern set.
    #[arg(long)]
    pub n: Option<usize>,

    /// ODE file to check against the series.
    #[arg(long)]
    pub ode: Option<PathBuf>,

    #[arg(long, default_value_t = 3)]
    pub max_order: usize,

    #[arg(long, default_value_t = 4)]
    pub max_degree: usize,

    /// Held-out coefficient equations for D-finite guessing (at least 5).
    #[arg(long, default_value_t = 5)]
    pub holdout: usize,

    /// Significant digits for singularity locations (1 to 15).
    #[arg(long, default_value_t = 12)]
    pub precision: u32,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Everything that determines a run, embedded in each report.
#[derive(Serialize, Debug, Default)]
pub struct RunConfig {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<Suite>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub patterns: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warn_nodes: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holdout: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}
