//! Connection-probability oracles.
//!
//! Two implementations share the [`ConnectionOracle`] interface the clustering
//! algorithms consume: [`ExactOracle`] enumerates every possible world of a small
//! graph, [`MonteCarloOracle`] counts over a [`WorldSamplePool`].
//!
//! [`WorldSamplePool`]: crate::world::WorldSamplePool

mod exact;
mod montecarlo;
mod samples;

use std::sync::Arc;

use serde::Serialize;

pub use exact::{ExactOracle, DEFAULT_UNCERTAIN_EDGE_LIMIT};
pub use montecarlo::{mc_estimate, mc_estimate_d, MonteCarloOracle};
pub use samples::{
    harmonic, required_samples_pointwise, samples_acp, samples_acp_unrounded, samples_mcp,
    samples_mcp_unrounded, SamplePlan,
};

use crate::graph::{NodeId, UncertainGraph};

/// Slack applied to threshold comparisons against enumerated probabilities,
/// which are sums of many products and can land a few ulps below an exact value.
pub const EXACT_TOLERANCE: f64 = 1e-12;

/// An estimated connection probability together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbEstimate {
    pub value: f64,
    /// Worlds the estimate was counted over; `None` for exact values.
    pub samples: Option<usize>,
    /// Threshold the pool size was dimensioned for, when known.
    pub regime: Option<f64>,
}

/// Hop limit normalised so that `d >= n - 1` means "unlimited".
pub fn effective_depth(n: usize, depth: Option<usize>) -> Option<usize> {
    match depth {
        Some(d) if d + 1 < n => Some(d),
        _ => None,
    }
}

/// Source of pairwise (d-)connection probabilities.
pub trait ConnectionOracle: Sync {
    fn graph(&self) -> &UncertainGraph;

    /// Probabilities from `source` to every node, within `depth` hops when given.
    /// `row[source]` is always exactly 1.
    fn row(&self, source: NodeId, depth: Option<usize>) -> Arc<Vec<f64>>;

    fn prob(&self, u: NodeId, v: NodeId, depth: Option<usize>) -> f64 {
        self.row(u, depth)[v]
    }

    fn is_exact(&self) -> bool;

    /// Worlds behind each estimate, `None` for exact oracles.
    fn samples(&self) -> Option<usize>;

    /// Smallest estimated value treated as reaching probability `q`.
    fn admission_threshold(&self, q: f64, epsilon: f64) -> f64 {
        if self.is_exact() {
            q - EXACT_TOLERANCE
        } else {
            (1.0 - epsilon / 2.0) * q
        }
    }
}
