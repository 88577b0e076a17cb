//! Subcommands and their parameters. The same types are read from the command
//! line and from `[run]` tables of config files.

use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub const DEFAULT_LIMIT: usize = nilgrowth::metric::DEFAULT_LIMIT;

fn default_limit() -> usize {
    DEFAULT_LIMIT
}
fn default_budget() -> u128 {
    10_000_000
}
fn default_n_min() -> u64 {
    4
}
fn default_seed() -> u64 {
    7
}
fn default_report_limit() -> usize {
    3_000_000
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Text => "txt",
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthMode {
    Word,
    Phi,
    Compare,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// List the catalog groups with their dimension and class
    ListGroups(ListArgs),
    /// Enumerate a word-metric ball: one row per element with its length
    Ball(BallArgs),
    /// Per-coordinate bounds on the entries of ball elements
    Bounds(BoundsArgs),
    /// Lower and upper central series, weights and Bass degree
    Series(SeriesArgs),
    /// Minimal graded weights and the resulting exponent
    Solve(SolveArgs),
    /// Check whether a lattice quotient fully detects a ball
    Detect(DetectArgs),
    /// Smallest-index lattice quotient detecting a ball
    Search(SearchArgs),
    /// Word growth, phi upper estimates, or both with a verdict
    Growth(GrowthArgs),
    /// Certified graded quotient for a ball, with its bound table
    Certify(CertifyArgs),
    /// Run the randomized property suite
    Report(ReportArgs),
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ListArgs {
    #[arg(long, value_enum, default_value = "text")]
    #[serde(default = "text")]
    pub out: Format,
}

fn text() -> Format {
    Format::Text
}
fn csv() -> Format {
    Format::Csv
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallArgs {
    #[arg(long)]
    pub group: String,
    /// Comma-separated generator words; defaults to the standard generators
    #[arg(long)]
    #[serde(default)]
    pub gens: Option<String>,
    #[arg(long)]
    pub radius: u32,
    #[arg(long, default_value_t = DEFAULT_LIMIT)]
    #[serde(default = "default_limit")]
    pub limit: usize,
    #[arg(long, value_enum, default_value = "csv")]
    #[serde(default = "csv")]
    pub out: Format,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    #[serde(default)]
    pub gens: Option<String>,
    #[arg(long)]
    pub n: u64,
    #[arg(long, value_enum, default_value = "csv")]
    #[serde(default = "csv")]
    pub out: Format,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long, value_enum, default_value = "text")]
    #[serde(default = "text")]
    pub out: Format,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long, value_enum, default_value = "text")]
    #[serde(default = "text")]
    pub out: Format,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    #[serde(default)]
    pub gens: Option<String>,
    #[arg(long)]
    pub n: u32,
    /// One modulus per live coordinate, comma-separated
    #[arg(long)]
    pub moduli: String,
    /// Enumerate B(2n) instead of comparing against coordinate bounds
    #[arg(long)]
    #[serde(default)]
    pub exhaustive: bool,
    #[arg(long, default_value_t = DEFAULT_LIMIT)]
    #[serde(default = "default_limit")]
    pub limit: usize,
    #[arg(long, value_enum, default_value = "text")]
    #[serde(default = "text")]
    pub out: Format,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    #[serde(default)]
    pub gens: Option<String>,
    #[arg(long)]
    pub n: u32,
    /// Largest modulus tried on any coordinate
    #[arg(long)]
    pub cap: u64,
    /// Largest number of moduli vectors the search may enumerate
    #[arg(long, default_value_t = 10_000_000)]
    #[serde(default = "default_budget")]
    pub budget: u128,
    #[arg(long, default_value_t = DEFAULT_LIMIT)]
    #[serde(default = "default_limit")]
    pub limit: usize,
    #[arg(long, value_enum, default_value = "text")]
    #[serde(default = "text")]
    pub out: Format,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    #[serde(default)]
    pub gens: Option<String>,
    #[arg(long, value_enum)]
    pub mode: GrowthMode,
    #[arg(long)]
    pub n_max: u64,
    /// Smallest n of the power-of-two grid used for phi estimates
    #[arg(long, default_value_t = 4)]
    #[serde(default = "default_n_min")]
    pub n_min: u64,
    #[arg(long, default_value_t = DEFAULT_LIMIT)]
    #[serde(default = "default_limit")]
    pub limit: usize,
    #[arg(long, value_enum, default_value = "csv")]
    #[serde(default = "csv")]
    pub out: Format,
    /// Also write a log-log SVG plot of the series
    #[arg(long)]
    #[serde(default)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifyArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    #[serde(default)]
    pub gens: Option<String>,
    #[arg(long)]
    pub n: u64,
    #[arg(long, value_enum, default_value = "text")]
    #[serde(default = "text")]
    pub out: Format,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportArgs {
    #[arg(long, default_value_t = 7)]
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// State limit for the ball enumerations in the bound-soundness checks
    #[arg(long, default_value_t = 3_000_000)]
    #[serde(default = "default_report_limit")]
    pub limit: usize,
    #[arg(long, value_enum, default_value = "text")]
    #[serde(default = "text")]
    pub out: Format,
}

impl Command {
    pub fn format(&self) -> Format {
        match self {
            Command::ListGroups(a) => a.out,
            Command::Ball(a) => a.out,
            Command::Bounds(a) => a.out,
            Command::Series(a) => a.out,
            Command::Solve(a) => a.out,
            Command::Detect(a) => a.out,
            Command::Search(a) => a.out,
            Command::Growth(a) => a.out,
            Command::Certify(a) => a.out,
            Command::Report(a) => a.out,
        }
    }

    pub fn group_mut(&mut self) -> Option<&mut String> {
        match self {
            Command::ListGroups(_) | Command::Report(_) => None,
            Command::Ball(a) => Some(&mut a.group),
            Command::Bounds(a) => Some(&mut a.group),
            Command::Series(a) => Some(&mut a.group),
            Command::Solve(a) => Some(&mut a.group),
            Command::Detect(a) => Some(&mut a.group),
            Command::Search(a) => Some(&mut a.group),
            Command::Growth(a) => Some(&mut a.group),
            Command::Certify(a) => Some(&mut a.group),
        }
    }

    pub fn plot_path(&self) -> Option<&PathBuf> {
        match self {
            Command::Growth(a) => a.plot.as_ref(),
            _ => None,
        }
    }
}
