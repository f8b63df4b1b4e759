use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "heavytail-cs", version, about = "Anytime-valid confidence sequences for heavy-tailed streams")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Uniform-in-time miscoverage over seeded replications.
    Coverage(RunArgs),
    /// Interval widths at checkpoints, with theoretical bounds.
    Width(RunArgs),
    /// Catoni width against the LIL floor (p = 2 only).
    LilCheck(RunArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Coverage(_) => "coverage",
            Command::Width(_) => "width",
            Command::LilCheck(_) => "lil-check",
        }
    }

    pub fn args(&self) -> &RunArgs {
        match self {
            Command::Coverage(a) | Command::Width(a) | Command::LilCheck(a) => a,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    Catoni,
    Ds,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistKind {
    Gaussian,
    CenteredPareto,
    StudentT,
    TwoPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScheduleKind {
    PowerLaw,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// JSON file with any subset of the run settings; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub method: Option<MethodChoice>,

    #[arg(long, value_enum)]
    pub dist: Option<DistKind>,
    /// Gaussian mean.
    #[arg(long, allow_hyphen_values = true)]
    pub mean: Option<f64>,
    /// Gaussian standard deviation.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Pareto shape (tail index).
    #[arg(long)]
    pub shape: Option<f64>,
    /// Pareto scale.
    #[arg(long)]
    pub scale: Option<f64>,
    /// Student-t degrees of freedom.
    #[arg(long)]
    pub df: Option<f64>,
    /// Student-t location.
    #[arg(long, allow_hyphen_values = true)]
    pub location: Option<f64>,
    /// Two-point support, e.g. `-1,1`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub values: Option<Vec<f64>>,
    /// Two-point probabilities, e.g. `0.5,0.5`.
    #[arg(long, value_delimiter = ',')]
    pub probs: Option<Vec<f64>>,

    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Horizon N.
    #[arg(long = "n")]
    pub n: Option<u64>,
    /// Replications R.
    #[arg(long)]
    pub reps: Option<u64>,

    /// Catoni weights; Dubins-Savage always uses its width-optimal weights.
    #[arg(long, value_enum)]
    pub schedule: Option<ScheduleKind>,
    /// Power-law scale c in λ_t = c t^(-1/p).
    #[arg(long)]
    pub c: Option<f64>,
    /// Custom weights, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub lambdas: Option<Vec<f64>>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    /// Dubins-Savage b.
    #[arg(long)]
    pub b: Option<f64>,
    /// Moment bound v_p; defaults to the true moment of the distribution.
    #[arg(long = "v-p")]
    pub v_p: Option<f64>,
    /// Defaults to $HEAVYTAIL_CS_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Coverage is checked every `stride` steps and at N.
    #[arg(long)]
    pub stride: Option<u64>,
    /// Width checkpoints, comma separated; log-spaced by default.
    #[arg(long, value_delimiter = ',')]
    pub checkpoints: Option<Vec<u64>>,
    /// Floor coefficient for lil-check; defaults to sigma·sqrt(2).
    #[arg(long)]
    pub a: Option<f64>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Report path; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Log-log width plot.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Worker threads for replications. Does not change results.
    #[arg(long)]
    pub threads: Option<usize>,
}
