//! Command layer of the `dars` tool: argument definitions and the four
//! subcommands, usable in-process.

mod commands;
mod manifest;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dars_core::select::{ComplementaryMode, Method, SolverKind, DEFAULT_MAX_EXACT_N};

#[derive(Debug, Parser, Serialize)]
#[command(name = "dars", version, about = "Dependency-aware requirement selection")]
pub struct Cli {
    /// Seed recorded in the manifest; overrides the seed of a simulation config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for every output file.
    #[arg(long, global = true, default_value = ".")]
    output_dir: PathBuf,
    /// Only report errors.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Identify explicit value dependencies from a 0/1 preference matrix.
    Identify(IdentifyArgs),
    /// All-pairs dependency strengths, influences and densities of a graph.
    Analyze(AnalyzeArgs),
    /// Select requirements under a budget with one of the selection models.
    Select(SelectArgs),
    /// Run a simulation grid or runtime sweep from a JSON config.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct IdentifyArgs {
    /// CSV with one row per user and one 0/1 column per requirement.
    preferences: PathBuf,
    /// The first row names the requirements.
    #[arg(long)]
    header: bool,
    /// Confidence level of the odds-ratio test.
    #[arg(long, default_value_t = 0.95)]
    confidence: f64,
    /// Keep every nonzero score instead of testing significance.
    #[arg(long)]
    no_significance: bool,
    /// Scores below this map to strength 0 (piecewise-linear membership).
    #[arg(long, default_value_t = 0.0)]
    low: f64,
    /// Scores above this map to strength 1 (piecewise-linear membership).
    #[arg(long, default_value_t = 1.0)]
    high: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct AnalyzeArgs {
    /// Dependency CSV: from,to,quality,strength (1-based requirement numbers).
    dependencies: PathBuf,
    /// Number of requirements; defaults to the largest number in the file.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverArg {
    Bnb,
    Exhaustive,
}

impl From<SolverArg> for SolverKind {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::Bnb => SolverKind::BranchAndBound,
            SolverArg::Exhaustive => SolverKind::Exhaustive,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplementaryArg {
    /// Maximise weighted value with at least `floor` requirements.
    CountFloor,
    /// Maximise the number of requirements with weighted value at least `floor`.
    ValueFloor,
}

impl From<ComplementaryArg> for ComplementaryMode {
    fn from(c: ComplementaryArg) -> Self {
        match c {
            ComplementaryArg::CountFloor => ComplementaryMode::MaxValueWithCountFloor,
            ComplementaryArg::ValueFloor => ComplementaryMode::MaxCountWithValueFloor,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct SelectArgs {
    /// Requirement CSV: id,cost,value,probability.
    #[arg(long)]
    requirements: PathBuf,
    /// Precedence CSV: i,j,kind with kind precedes or conflicts.
    #[arg(long)]
    precedence: Option<PathBuf>,
    /// Dependency CSV: from,to,quality,strength.
    #[arg(long)]
    dependencies: Option<PathBuf>,
    #[arg(long, default_value = "dars", value_parser = parse_method)]
    method: Method,
    /// Budget as a percentage of the total cost: `50`, `10,20,30` or `1..100`.
    #[arg(long, conflicts_with = "budget")]
    budget_pct: Option<String>,
    /// Absolute budget.
    #[arg(long)]
    budget: Option<f64>,
    /// Absolute cap on the accumulated value of the selection.
    #[arg(long, conflicts_with = "value_cap_pct")]
    value_cap: Option<f64>,
    /// Value cap as a percentage of the total value; same forms as --budget-pct.
    #[arg(long)]
    value_cap_pct: Option<String>,
    /// Also write the linearised integer program of each problem.
    #[arg(long)]
    emit_lp: bool,
    /// Weigh the overall value by value instead of expected value.
    #[arg(long)]
    nominal_values: bool,
    #[arg(long, value_enum, default_value = "bnb")]
    solver: SolverArg,
    #[arg(long, default_value_t = DEFAULT_MAX_EXACT_N)]
    max_exact_n: usize,
    /// Use greedy + local search above --max-exact-n instead of failing.
    #[arg(long)]
    heuristic: bool,
    #[arg(long, value_enum, default_value = "count-floor")]
    complementary_mode: ComplementaryArg,
    #[arg(long, default_value_t = 0.0)]
    complementary_floor: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    /// JSON simulation config.
    config: PathBuf,
    /// Time solves across the config's `n_values` instead of running the grid.
    #[arg(long)]
    sweep: bool,
    /// Evaluate grid cells one after another.
    #[arg(long)]
    sequential: bool,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: dars_core::Error| e.to_string())
}

/// Process exit status and message of a failed command.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_INFEASIBLE: u8 = 3;
pub const EXIT_CAPACITY: u8 = 4;

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        Self { code: EXIT_INPUT, message: message.into() }
    }

    fn infeasible(message: impl Into<String>) -> Self {
        Self { code: EXIT_INFEASIBLE, message: message.into() }
    }

    /// Library error, optionally tied to the file it came from.
    fn from_core(e: dars_core::Error, path: Option<&std::path::Path>) -> Self {
        let code = match e {
            dars_core::Error::Capacity { .. } => EXIT_CAPACITY,
            _ => EXIT_INPUT,
        };
        let message = match path {
            Some(p) => format!("{}: {e}", p.display()),
            None => e.to_string(),
        };
        Self { code, message }
    }
}

impl From<dars_core::Error> for CliError {
    fn from(e: dars_core::Error) -> Self {
        Self::from_core(e, None)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::input(e.to_string())
    }
}

/// Runs the parsed command, writing progress lines to `out` unless quiet.
pub fn run(cli: &Cli, out: &mut dyn std::io::Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Identify(a) => commands::identify(cli, a, out),
        Command::Analyze(a) => commands::analyze(cli, a, out),
        Command::Select(a) => commands::select(cli, a, out),
        Command::Simulate(a) => commands::simulate(cli, a, out),
    }
}
