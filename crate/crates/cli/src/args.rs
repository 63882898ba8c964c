//! Command-line arguments.

use std::net::IpAddr;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "biprom", version, about = "Bipolar PROMETHEE with 2-additive bicapacities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Positive, negative and net flows for given parameters.
    Flows(EvaluateArgs),
    /// PROMETHEE I partial order and PROMETHEE II ranking.
    Rank(EvaluateArgs),
    /// Constructive elicitation of a compatible bicapacity.
    Elicit(StatementArgs),
    /// Necessary and possible preference relations.
    Ror(StatementArgs),
    /// Session-based HTTP service.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Table,
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    /// Problem file: JSON, or CSV together with `--criteria`.
    #[arg(long)]
    pub problem: PathBuf,
    /// Criterion definitions (JSON array) for a CSV problem.
    #[arg(long)]
    pub criteria: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// 2-additive bicapacity (JSON).
    #[arg(long, conflicts_with = "weights", required_unless_present = "weights")]
    pub bicapacity: Option<PathBuf>,
    /// Additive weights, comma separated, summing to one.
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<f64>>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct StatementArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Statement file (JSON array). Repeat to supply one batch per iteration;
    /// `ror` reports the last iteration with its diff against the previous.
    #[arg(long, required = true)]
    pub statements: Vec<PathBuf>,
    #[arg(long)]
    pub eps_threshold: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub bind: IpAddr,
    /// Directory holding one file per session.
    #[arg(long, default_value = "sessions", conflicts_with = "ephemeral")]
    pub store: PathBuf,
    /// Keep sessions in memory only.
    #[arg(long)]
    pub ephemeral: bool,
    /// Static assets served under `/`.
    #[arg(long)]
    pub assets: Option<PathBuf>,
    #[arg(long)]
    pub eps_threshold: Option<f64>,
}
