use serde::{Deserialize, Serialize};

use super::{partial_clustering, CandidateRule, Clustering, GuessSchedule, Objective, PartialParams, ScheduleKind};
use crate::error::{invalid, Result};
use crate::graph::UncertainGraph;
use crate::oracle::{
    effective_depth, samples_acp, samples_mcp, ConnectionOracle, ExactOracle, MonteCarloOracle,
    DEFAULT_UNCERTAIN_EDGE_LIMIT,
};
use crate::world::WorldSamplePool;

/// How Monte Carlo pools are dimensioned as the threshold guess drops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleMode {
    /// Start small and double per guess, capped by the theoretical count.
    #[default]
    Practical,
    /// The count that carries the approximation guarantee.
    Theory,
    /// A constant pool size.
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorKind {
    #[default]
    MonteCarlo,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AcpVariant {
    /// One candidate per step, threshold `q`.
    #[default]
    Practical,
    /// `n` candidates per step, threshold `q³`.
    Theory,
}

/// Parameters shared by [`mcp`](super::mcp) and [`acp`](super::acp).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DriverConfig {
    pub k: usize,
    pub gamma: f64,
    pub epsilon: f64,
    pub p_low: f64,
    pub depth: Option<usize>,
    pub seed: u64,
    pub sample_mode: SampleMode,
    pub initial_samples: usize,
    /// Largest pool the driver may build.
    pub max_samples: usize,
    pub estimator: EstimatorKind,
    pub exact_limit: usize,
    pub schedule: ScheduleKind,
    pub candidates: CandidateRule,
    pub acp_variant: AcpVariant,
}

impl DriverConfig {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            gamma: 0.1,
            epsilon: 0.1,
            p_low: 1e-4,
            depth: None,
            seed: 0,
            sample_mode: SampleMode::Practical,
            initial_samples: 50,
            max_samples: 5_000_000,
            estimator: EstimatorKind::MonteCarlo,
            exact_limit: DEFAULT_UNCERTAIN_EDGE_LIMIT,
            schedule: ScheduleKind::Doubling,
            candidates: CandidateRule::Smallest,
            acp_variant: AcpVariant::Practical,
        }
    }

    pub fn exact(k: usize) -> Self {
        Self {
            estimator: EstimatorKind::Exact,
            ..Self::new(k)
        }
    }

    pub(crate) fn validate(&self, n: usize) -> Result<GuessSchedule> {
        super::validate_k(self.k, n)?;
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return invalid(format!("epsilon must lie in (0, 1), got {}", self.epsilon));
        }
        if self.depth == Some(0) {
            return invalid("depth must be at least 1");
        }
        if self.initial_samples == 0 || self.sample_mode == SampleMode::Fixed(0) {
            return invalid("sample counts must be positive");
        }
        GuessSchedule::new(self.gamma, self.p_low, self.schedule)
    }
}

/// Bookkeeping reported alongside a clustering.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RunStats {
    /// Threshold of the returned clustering's admitting guess.
    pub final_q: Option<f64>,
    /// Guesses from the schedule that were tried.
    pub guesses: usize,
    /// Calls to the min-partial primitive, binary-search probes included.
    pub iterations: usize,
    /// Final pool size, `None` with the exact oracle.
    pub samples: Option<usize>,
    /// Best average over nodes with uncovered nodes counted as 0 (ACP only).
    pub phi_best: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClusteringOutcome {
    Found { clustering: Clustering, stats: RunStats },
    /// No full clustering exists above the probability floor.
    NoClustering { stats: RunStats },
}

impl ClusteringOutcome {
    pub fn clustering(&self) -> Option<&Clustering> {
        match self {
            Self::Found { clustering, .. } => Some(clustering),
            Self::NoClustering { .. } => None,
        }
    }

    pub fn into_clustering(self) -> Option<Clustering> {
        match self {
            Self::Found { clustering, .. } => Some(clustering),
            Self::NoClustering { .. } => None,
        }
    }

    pub fn stats(&self) -> &RunStats {
        match self {
            Self::Found { stats, .. } | Self::NoClustering { stats } => stats,
        }
    }
}

pub(crate) enum Estimator<'g> {
    Exact(ExactOracle<'g>),
    MonteCarlo(MonteCarloOracle<'g>),
}

impl<'g> Estimator<'g> {
    pub(crate) fn new(graph: &'g UncertainGraph, cfg: &DriverConfig) -> Result<Self> {
        Ok(match cfg.estimator {
            EstimatorKind::Exact => Self::Exact(ExactOracle::with_limit(graph, cfg.exact_limit)?),
            EstimatorKind::MonteCarlo => {
                Self::MonteCarlo(MonteCarloOracle::new(WorldSamplePool::new(graph, cfg.seed)))
            }
        })
    }

    pub(crate) fn oracle(&self) -> &dyn ConnectionOracle {
        match self {
            Self::Exact(o) => o,
            Self::MonteCarlo(o) => o,
        }
    }

    /// Sizes the pool for guess number `step` with threshold `q`.
    pub(crate) fn prepare(&mut self, cfg: &DriverConfig, objective: Objective, step: usize, q: f64) -> Result<()> {
        let Self::MonteCarlo(oracle) = self else {
            return Ok(());
        };
        let n = oracle.graph().n();
        let theory = || -> Result<usize> {
            let r = match objective {
                Objective::Min => samples_mcp(q, cfg.epsilon, cfg.gamma, cfg.p_low, n)?,
                Objective::Avg => samples_acp(q, cfg.epsilon, cfg.gamma, cfg.p_low, n)?,
            };
            Ok(usize::try_from(r).unwrap_or(usize::MAX))
        };
        let target = match cfg.sample_mode {
            SampleMode::Fixed(r) => r,
            SampleMode::Theory => theory()?,
            SampleMode::Practical => {
                let doubled = cfg
                    .initial_samples
                    .checked_shl(step as u32)
                    .filter(|&r| r >> step == cfg.initial_samples)
                    .unwrap_or(usize::MAX);
                doubled.min(theory()?)
            }
        };
        if target > cfg.max_samples {
            return invalid(format!(
                "guess q = {q} needs {target} sampled worlds, above the cap of {}",
                cfg.max_samples
            ));
        }
        oracle.extend_to(target, Some(q));
        Ok(())
    }

    pub(crate) fn samples(&self) -> Option<usize> {
        self.oracle().samples()
    }
}

/// One configured min-partial invocation inside a driver.
pub(crate) struct Step<'a> {
    pub cfg: &'a DriverConfig,
    pub alpha: usize,
    pub depth: Option<usize>,
    pub select_depth: Option<usize>,
}

impl Step<'_> {
    pub(crate) fn new(cfg: &DriverConfig, n: usize, alpha: usize, select: impl Fn(usize) -> usize) -> Step<'_> {
        let depth = effective_depth(n, cfg.depth);
        Step {
            cfg,
            alpha,
            depth,
            select_depth: depth.map(|d| select(d).max(1)),
        }
    }

    pub(crate) fn run(&self, oracle: &dyn ConnectionOracle, q: f64, q_bar: f64) -> Result<Clustering> {
        let params = PartialParams {
            k: self.cfg.k,
            q,
            alpha: self.alpha,
            q_bar,
            epsilon: self.cfg.epsilon,
            depth: self.depth,
            select_depth: self.select_depth,
            candidates: self.cfg.candidates,
        };
        partial_clustering(oracle, &params)
    }
}

/// Fills in the run-level parameters of a returned clustering.
pub(crate) fn stamp(clustering: &mut Clustering, cfg: &DriverConfig, samples: Option<usize>) {
    clustering.params.gamma = Some(cfg.gamma);
    clustering.params.seed = samples.map(|_| cfg.seed);
    clustering.params.samples = samples;
    if cfg.estimator == EstimatorKind::Exact {
        clustering.params.epsilon = Some(0.0);
    }
}
