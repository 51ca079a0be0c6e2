use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use ucluster_core::clustering::{
    AcpVariant, DriverConfig, EstimatorKind, SampleMode, ScheduleKind,
};
use ucluster_core::oracle::DEFAULT_UNCERTAIN_EDGE_LIMIT;

use crate::args::{EstimatorArg, Options, SampleModeArg, ScheduleArg, VariantArg};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_EVAL_SAMPLES: usize = 1000;
pub const DEFAULT_PAIR_SAMPLES: usize = 10_000;

/// Option values read from a `--config` file; every key is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub k: Option<usize>,
    pub gamma: Option<f64>,
    pub epsilon: Option<f64>,
    pub p_low: Option<f64>,
    pub depth: Option<usize>,
    pub seed: Option<u64>,
    pub sample_mode: Option<SampleModeArg>,
    pub samples_init: Option<usize>,
    pub estimator: Option<EstimatorArg>,
    pub acp_variant: Option<VariantArg>,
    pub schedule: Option<ScheduleArg>,
    pub exact_limit: Option<usize>,
    pub max_samples: Option<usize>,
    pub eval_samples: Option<usize>,
    pub eval_seed: Option<u64>,
    pub samples: Option<usize>,
    pub workers: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

/// Fully resolved run parameters, as recorded in every report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub k: Option<usize>,
    pub gamma: f64,
    pub epsilon: f64,
    pub p_low: f64,
    pub depth: Option<usize>,
    pub seed: u64,
    pub sample_mode: SampleModeArg,
    pub samples_init: usize,
    pub estimator: EstimatorArg,
    pub acp_variant: VariantArg,
    pub schedule: ScheduleArg,
    pub exact_limit: usize,
    pub max_samples: usize,
    pub eval_samples: Option<usize>,
    pub eval_seed: Option<u64>,
}

impl Default for Settings {
    fn default() -> Self {
        let base = DriverConfig::new(1);
        Self {
            k: None,
            gamma: base.gamma,
            epsilon: base.epsilon,
            p_low: base.p_low,
            depth: None,
            seed: DEFAULT_SEED,
            sample_mode: SampleModeArg::Practical,
            samples_init: base.initial_samples,
            estimator: EstimatorArg::Mc,
            acp_variant: VariantArg::Practical,
            schedule: ScheduleArg::Doubling,
            exact_limit: DEFAULT_UNCERTAIN_EDGE_LIMIT,
            max_samples: base.max_samples,
            eval_samples: None,
            eval_seed: None,
        }
    }
}

impl Settings {
    /// Flags (and their env vars) over config file over built-in defaults.
    pub fn resolve(opts: &Options, file: &FileConfig) -> Self {
        Self::resolve_over(opts, file, &Self::default())
    }

    /// As [`Settings::resolve`], falling back to `base` instead of the defaults.
    pub fn resolve_over(opts: &Options, file: &FileConfig, base: &Settings) -> Self {
        Self {
            k: opts.k.or(file.k).or(base.k),
            gamma: opts.gamma.or(file.gamma).unwrap_or(base.gamma),
            epsilon: opts.epsilon.or(file.epsilon).unwrap_or(base.epsilon),
            p_low: opts.p_low.or(file.p_low).unwrap_or(base.p_low),
            depth: opts.depth.or(file.depth).or(base.depth),
            seed: opts.seed.or(file.seed).unwrap_or(base.seed),
            sample_mode: opts.sample_mode.or(file.sample_mode).unwrap_or(base.sample_mode),
            samples_init: opts.samples_init.or(file.samples_init).unwrap_or(base.samples_init),
            estimator: opts.estimator.or(file.estimator).unwrap_or(base.estimator),
            acp_variant: opts.acp_variant.or(file.acp_variant).unwrap_or(base.acp_variant),
            schedule: opts.schedule.or(file.schedule).unwrap_or(base.schedule),
            exact_limit: opts.exact_limit.or(file.exact_limit).unwrap_or(base.exact_limit),
            max_samples: opts.max_samples.or(file.max_samples).unwrap_or(base.max_samples),
            eval_samples: opts.eval_samples.or(file.eval_samples).or(base.eval_samples),
            eval_seed: opts.eval_seed.or(file.eval_seed).or(base.eval_seed),
        }
    }

    pub fn require_k(&self) -> Result<usize> {
        self.k.context("--k is required")
    }

    pub fn is_exact(&self) -> bool {
        self.estimator == EstimatorArg::Exact
    }

    pub fn driver(&self, k: usize) -> DriverConfig {
        DriverConfig {
            k,
            gamma: self.gamma,
            epsilon: self.epsilon,
            p_low: self.p_low,
            depth: self.depth,
            seed: self.seed,
            sample_mode: match self.sample_mode {
                SampleModeArg::Practical => SampleMode::Practical,
                SampleModeArg::Theory => SampleMode::Theory,
            },
            initial_samples: self.samples_init,
            max_samples: self.max_samples,
            estimator: match self.estimator {
                EstimatorArg::Mc => EstimatorKind::MonteCarlo,
                EstimatorArg::Exact => EstimatorKind::Exact,
            },
            exact_limit: self.exact_limit,
            schedule: match self.schedule {
                ScheduleArg::Doubling => ScheduleKind::Doubling,
                ScheduleArg::Geometric => ScheduleKind::Geometric,
            },
            acp_variant: match self.acp_variant {
                VariantArg::Practical => AcpVariant::Practical,
                VariantArg::Theory => AcpVariant::Theory,
            },
            ..DriverConfig::new(k)
        }
    }
}
