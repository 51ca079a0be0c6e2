use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "ucluster", version, about = "Clustering of uncertain graphs by connection probability")]
pub struct Cli {
    /// TOML file supplying defaults for any option; flags and env vars win.
    #[arg(long, global = true, env = "UCLUSTER_CONFIG")]
    pub config: Option<PathBuf>,

    /// Worker threads (default: all cores). Never affects results.
    #[arg(long, global = true, env = "UCLUSTER_WORKERS")]
    pub workers: Option<usize>,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true, env = "UCLUSTER_OUTPUT")]
    pub output: Option<PathBuf>,

    /// Also append a CSV summary row to this file.
    #[arg(long, global = true, env = "UCLUSTER_CSV")]
    pub csv: Option<PathBuf>,

    /// Include wall-clock durations in the report (makes output non-reproducible).
    #[arg(long, global = true)]
    pub timings: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cluster maximising the minimum connection probability.
    Mcp(ClusterArgs),
    /// Cluster maximising the average connection probability.
    Acp(ClusterArgs),
    /// Farthest-first baseline on -ln(p) shortest paths.
    Gmm(ClusterArgs),
    /// Re-score a clustering report.
    Metrics(MetricsArgs),
    /// Exact connection probability of a node pair.
    Oracle(PairArgs),
    /// Monte Carlo connection probability of a node pair.
    Estimate(PairArgs),
    /// Pairwise agreement of a clustering with reference complexes.
    Eval(EvalArgs),
    /// Run one algorithm over several k and emit CSV.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleModeArg {
    Practical,
    Theory,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorArg {
    Mc,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariantArg {
    Practical,
    Theory,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleArg {
    Doubling,
    Geometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Mcp,
    Acp,
    Gmm,
}

/// Options shared by every subcommand that clusters or estimates.
#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Number of clusters.
    #[arg(long, env = "UCLUSTER_K")]
    pub k: Option<usize>,
    /// Guess-schedule granularity [default: 0.1].
    #[arg(long, env = "UCLUSTER_GAMMA")]
    pub gamma: Option<f64>,
    /// Relative error of the Monte Carlo estimates [default: 0.1].
    #[arg(long, env = "UCLUSTER_EPSILON")]
    pub epsilon: Option<f64>,
    /// Smallest probability threshold tried [default: 0.0001].
    #[arg(long, env = "UCLUSTER_P_LOW")]
    pub p_low: Option<f64>,
    /// Only paths of at most this many hops count [default: unlimited].
    #[arg(long, env = "UCLUSTER_DEPTH")]
    pub depth: Option<usize>,
    /// Master seed of the possible-world sampler [default: 42].
    #[arg(long, env = "UCLUSTER_SEED")]
    pub seed: Option<u64>,
    /// Pool sizing policy [default: practical].
    #[arg(long, value_enum, env = "UCLUSTER_SAMPLE_MODE")]
    pub sample_mode: Option<SampleModeArg>,
    /// Worlds in the first pool under practical sizing [default: 50].
    #[arg(long, env = "UCLUSTER_SAMPLES_INIT")]
    pub samples_init: Option<usize>,
    /// Connection-probability estimator [default: mc].
    #[arg(long, value_enum, env = "UCLUSTER_ESTIMATOR")]
    pub estimator: Option<EstimatorArg>,
    /// ACP variant [default: practical].
    #[arg(long, value_enum, env = "UCLUSTER_ACP_VARIANT")]
    pub acp_variant: Option<VariantArg>,
    /// Threshold guess sequence [default: doubling].
    #[arg(long, value_enum, env = "UCLUSTER_SCHEDULE")]
    pub schedule: Option<ScheduleArg>,
    /// Uncertain-edge limit of the exact estimator [default: 25].
    #[arg(long, env = "UCLUSTER_EXACT_LIMIT")]
    pub exact_limit: Option<usize>,
    /// Largest pool the algorithms may build [default: 5000000].
    #[arg(long, env = "UCLUSTER_MAX_SAMPLES")]
    pub max_samples: Option<usize>,
    /// Score with a fresh pool of this many worlds instead of the clustering's pool.
    #[arg(long, env = "UCLUSTER_EVAL_SAMPLES")]
    pub eval_samples: Option<usize>,
    /// Seed of the fresh evaluation pool [default: the master seed].
    #[arg(long, env = "UCLUSTER_EVAL_SEED")]
    pub eval_seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    /// Edge list: one `u v p` triple per line.
    pub graph: PathBuf,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    pub graph: PathBuf,
    /// Report written by `mcp`, `acp` or `gmm`.
    pub clustering: PathBuf,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    pub graph: PathBuf,
    pub u: String,
    pub v: String,
    /// Worlds to sample (`estimate` only) [default: 10000].
    #[arg(long, env = "UCLUSTER_SAMPLES")]
    pub samples: Option<usize>,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub graph: PathBuf,
    pub clustering: PathBuf,
    /// Reference complexes: `<id> <member> <member> ...` per line.
    pub truth: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub graph: PathBuf,
    #[arg(long, value_enum)]
    pub algorithm: Algorithm,
    /// Comma-separated cluster counts.
    #[arg(long, value_delimiter = ',', required = true)]
    pub ks: Vec<usize>,
    #[command(flatten)]
    pub options: Options,
}
