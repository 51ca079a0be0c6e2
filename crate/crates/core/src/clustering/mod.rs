//! Clustering algorithms for uncertain graphs.
//!
//! Everything is built on [`min_partial`], a greedy primitive that picks `k`
//! centers and covers every node whose connection probability to some center
//! reaches a threshold `q`. [`mcp`] lowers `q` until the cover is complete,
//! optimising the minimum probability; [`acp`] trades coverage against
//! threshold to optimise the average.

mod acp;
mod brute;
mod driver;
mod mcp;
mod partial;
mod schedule;

use serde::Serialize;

pub use acp::acp;
pub use brute::{brute_force_optimum, min_uncovered, BRUTE_FORCE_NODE_LIMIT};
pub use driver::{
    AcpVariant, ClusteringOutcome, DriverConfig, EstimatorKind, RunStats, SampleMode,
};
pub use mcp::mcp;
pub use partial::{
    complete_clustering, min_partial, min_partial_d, partial_clustering, CandidateRule,
    PartialParams,
};
pub use schedule::{GuessSchedule, ScheduleKind};

use crate::graph::NodeId;

/// Which objective a clustering is scored by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Min,
    Avg,
}

/// Configuration that produced a clustering.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ClusteringParams {
    /// Admission threshold of the producing min-partial call.
    pub q: Option<f64>,
    /// Effective relative-error slack (0 for exact oracles).
    pub epsilon: Option<f64>,
    pub gamma: Option<f64>,
    pub depth: Option<usize>,
    pub select_depth: Option<usize>,
    pub seed: Option<u64>,
    /// Worlds in the pool, `None` with the exact oracle.
    pub samples: Option<usize>,
}

/// A full or partial k-clustering.
///
/// `assignment[u]` indexes into `centers`; `estimates[u]` is the (estimated)
/// probability that `u` is connected to its center, 0 for uncovered nodes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Clustering {
    pub centers: Vec<NodeId>,
    pub assignment: Vec<Option<usize>>,
    pub estimates: Vec<f64>,
    pub params: ClusteringParams,
}

impl Clustering {
    pub fn k(&self) -> usize {
        self.centers.len()
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn coverage(&self) -> usize {
        self.assignment.iter().filter(|a| a.is_some()).count()
    }

    pub fn is_full(&self) -> bool {
        self.assignment.iter().all(Option::is_some)
    }

    pub fn uncovered(&self) -> Vec<NodeId> {
        (0..self.n()).filter(|&u| self.assignment[u].is_none()).collect()
    }

    pub fn center_of(&self, u: NodeId) -> Option<NodeId> {
        self.assignment[u].map(|i| self.centers[i])
    }

    /// Members of each cluster, in ascending id order.
    pub fn clusters(&self) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new(); self.k()];
        for (u, a) in self.assignment.iter().enumerate() {
            if let Some(i) = a {
                out[*i].push(u);
            }
        }
        out
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        self.clusters().iter().map(Vec::len).collect()
    }

    /// Mean estimate over all nodes, counting uncovered nodes as 0.
    pub fn phi(&self) -> f64 {
        if self.n() == 0 {
            return 0.0;
        }
        self.estimates.iter().sum::<f64>() / self.n() as f64
    }

    /// Smallest estimate among covered nodes.
    pub fn min_estimate(&self) -> f64 {
        self.assignment
            .iter()
            .zip(&self.estimates)
            .filter(|(a, _)| a.is_some())
            .map(|(_, &e)| e)
            .fold(1.0, f64::min)
    }

    /// Builds a clustering from centers and a complete center-index assignment,
    /// with estimates drawn from `oracle`.
    pub fn from_assignment(
        oracle: &dyn crate::oracle::ConnectionOracle,
        centers: Vec<NodeId>,
        assignment: Vec<usize>,
        depth: Option<usize>,
    ) -> crate::Result<Self> {
        let n = oracle.graph().n();
        if assignment.len() != n {
            return crate::error::invalid(format!(
                "assignment covers {} nodes, graph has {n}",
                assignment.len()
            ));
        }
        if let Some(bad) = assignment.iter().find(|&&a| a >= centers.len()) {
            return crate::error::invalid(format!("cluster index {bad} out of range"));
        }
        for (i, &c) in centers.iter().enumerate() {
            if c >= n || assignment[c] != i {
                return crate::error::invalid(format!("center {c} is not in its own cluster"));
            }
        }
        let rows: Vec<_> = centers.iter().map(|&c| oracle.row(c, depth)).collect();
        let estimates = assignment
            .iter()
            .enumerate()
            .map(|(u, &i)| rows[i][u])
            .collect();
        Ok(Self {
            centers,
            assignment: assignment.into_iter().map(Some).collect(),
            estimates,
            params: ClusteringParams {
                depth,
                samples: oracle.samples(),
                ..Default::default()
            },
        })
    }
}

pub(crate) fn validate_k(k: usize, n: usize) -> crate::Result<()> {
    if k == 0 || k > n {
        return crate::error::invalid(format!("k must lie in 1..={n}, got {k}"));
    }
    Ok(())
}

/// Every node its own center.
pub(crate) fn singleton_clustering(n: usize, params: ClusteringParams) -> Clustering {
    Clustering {
        centers: (0..n).collect(),
        assignment: (0..n).map(Some).collect(),
        estimates: vec![1.0; n],
        params,
    }
}
