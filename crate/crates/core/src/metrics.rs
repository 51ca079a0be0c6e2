//! Clustering quality metrics and evaluation against reference complexes.
//!
//! `min_prob` and `avg_prob` score each node by its probability of being
//! connected to its own center. The AVPR pair the fraction of same-cluster
//! (inner) and cross-cluster (outer) node pairs that are connected, averaged
//! over possible worlds.

use std::collections::{HashMap, HashSet};
use std::io::BufRead;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clustering::Clustering;
use crate::error::{invalid, CoreError, Result};
use crate::graph::{NodeId, UncertainGraph};
use crate::oracle::ConnectionOracle;
use crate::world::{WorldSample, WorldSamplePool};

fn center_rows(clustering: &Clustering, oracle: &dyn ConnectionOracle) -> Vec<std::sync::Arc<Vec<f64>>> {
    clustering
        .centers
        .iter()
        .map(|&c| oracle.row(c, clustering.params.depth))
        .collect()
}

/// Probability of each node reaching its center, 0 for unassigned nodes.
pub fn node_probabilities(clustering: &Clustering, oracle: &dyn ConnectionOracle) -> Vec<f64> {
    let rows = center_rows(clustering, oracle);
    clustering
        .assignment
        .iter()
        .enumerate()
        .map(|(u, a)| a.map_or(0.0, |i| rows[i][u]))
        .collect()
}

/// Smallest node-to-center probability.
pub fn min_prob(clustering: &Clustering, oracle: &dyn ConnectionOracle) -> f64 {
    node_probabilities(clustering, oracle)
        .into_iter()
        .fold(1.0, f64::min)
}

/// Mean node-to-center probability.
pub fn avg_prob(clustering: &Clustering, oracle: &dyn ConnectionOracle) -> f64 {
    let probs = node_probabilities(clustering, oracle);
    if probs.is_empty() {
        return 1.0;
    }
    probs.iter().sum::<f64>() / probs.len() as f64
}

/// Connected unordered pairs inside clusters and across clusters in one world.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AvprCounts {
    pub inner: u64,
    pub outer: u64,
}

impl std::ops::Add for AvprCounts {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            inner: self.inner + rhs.inner,
            outer: self.outer + rhs.outer,
        }
    }
}

fn pairs(count: u64) -> u64 {
    count * count.saturating_sub(1) / 2
}

/// Counts via group sizes: nodes sharing a component label form connected
/// pairs, and those also sharing a cluster are the inner ones.
pub fn avpr_counts_grouped(clustering: &Clustering, labels: &[u32]) -> AvprCounts {
    let mut by_component: HashMap<u32, u64> = HashMap::new();
    let mut by_cluster: HashMap<(usize, u32), u64> = HashMap::new();
    for (u, a) in clustering.assignment.iter().enumerate() {
        if let Some(i) = a {
            *by_component.entry(labels[u]).or_default() += 1;
            *by_cluster.entry((*i, labels[u])).or_default() += 1;
        }
    }
    let connected: u64 = by_component.values().map(|&c| pairs(c)).sum();
    let inner: u64 = by_cluster.values().map(|&c| pairs(c)).sum();
    AvprCounts {
        inner,
        outer: connected - inner,
    }
}

/// Reference implementation over all node pairs.
pub fn avpr_counts_naive(clustering: &Clustering, labels: &[u32]) -> AvprCounts {
    let mut counts = AvprCounts::default();
    let n = clustering.n();
    for u in 0..n {
        let Some(cu) = clustering.assignment[u] else { continue };
        for v in u + 1..n {
            let Some(cv) = clustering.assignment[v] else { continue };
            if labels[u] == labels[v] {
                if cu == cv {
                    counts.inner += 1;
                } else {
                    counts.outer += 1;
                }
            }
        }
    }
    counts
}

/// Unordered same-cluster and cross-cluster pair totals.
fn pair_denominators(clustering: &Clustering) -> (u64, u64) {
    let sizes = clustering.cluster_sizes();
    let covered: u64 = sizes.iter().map(|&s| s as u64).sum();
    let inner: u64 = sizes.iter().map(|&s| pairs(s as u64)).sum();
    (inner, pairs(covered) - inner)
}

fn ratio(num: f64, den: u64) -> Option<f64> {
    (den > 0).then(|| num / den as f64)
}

fn pool_counts(clustering: &Clustering, worlds: &[WorldSample]) -> AvprCounts {
    worlds
        .par_chunks(32)
        .map(|chunk| {
            chunk
                .iter()
                .map(|w| avpr_counts_grouped(clustering, &w.labels))
                .fold(AvprCounts::default(), |a, b| a + b)
        })
        .reduce(AvprCounts::default, |a, b| a + b)
}

/// Inner and outer AVPR estimated over a pool; `None` where no pair qualifies.
pub fn avpr(clustering: &Clustering, pool: &WorldSamplePool<'_>) -> (Option<f64>, Option<f64>) {
    let (inner_den, outer_den) = pair_denominators(clustering);
    if pool.r() == 0 {
        return (None, None);
    }
    let counts = pool_counts(clustering, pool.worlds());
    let r = pool.r() as f64;
    (
        ratio(counts.inner as f64 / r, inner_den),
        ratio(counts.outer as f64 / r, outer_den),
    )
}

pub fn inner_avpr(clustering: &Clustering, pool: &WorldSamplePool<'_>) -> Option<f64> {
    avpr(clustering, pool).0
}

pub fn outer_avpr(clustering: &Clustering, pool: &WorldSamplePool<'_>) -> Option<f64> {
    avpr(clustering, pool).1
}

/// Inner and outer AVPR from pairwise oracle probabilities.
pub fn avpr_from_oracle(clustering: &Clustering, oracle: &dyn ConnectionOracle) -> (Option<f64>, Option<f64>) {
    let (inner_den, outer_den) = pair_denominators(clustering);
    let n = clustering.n();
    let (inner, outer) = (0..n)
        .into_par_iter()
        .filter(|&u| clustering.assignment[u].is_some())
        .map(|u| {
            let row = oracle.row(u, None);
            let cu = clustering.assignment[u];
            let mut sums = (0.0, 0.0);
            for v in u + 1..n {
                match clustering.assignment[v] {
                    None => {}
                    Some(_) if clustering.assignment[v] == cu => sums.0 += row[v],
                    Some(_) => sums.1 += row[v],
                }
            }
            sums
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    (ratio(inner, inner_den), ratio(outer, outer_den))
}

/// Summary scores of a clustering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityReport {
    pub min_prob: f64,
    pub avg_prob: f64,
    pub inner_avpr: Option<f64>,
    pub outer_avpr: Option<f64>,
    pub cluster_sizes: Vec<usize>,
    /// Worlds the scores were estimated from, `None` when exact.
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

impl QualityReport {
    /// Scores with `oracle`; AVPR comes from `pool` when given, else from the oracle.
    pub fn compute(
        clustering: &Clustering,
        oracle: &dyn ConnectionOracle,
        pool: Option<&WorldSamplePool<'_>>,
    ) -> Self {
        let (inner_avpr, outer_avpr) = match pool {
            Some(pool) => avpr(clustering, pool),
            None => avpr_from_oracle(clustering, oracle),
        };
        Self {
            min_prob: min_prob(clustering, oracle),
            avg_prob: avg_prob(clustering, oracle),
            inner_avpr,
            outer_avpr,
            cluster_sizes: clustering.cluster_sizes(),
            samples: oracle.samples(),
            seed: pool.map(WorldSamplePool::master_seed),
        }
    }
}

/// Reference complexes, one per line: `<id> <member> <member> ...`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GroundTruth {
    pub complexes: Vec<(String, Vec<String>)>,
}

impl GroundTruth {
    pub fn parse<R: BufRead>(source: R) -> Result<Self> {
        let mut complexes = Vec::new();
        for (i, line) in source.lines().enumerate() {
            let line = line.map_err(|e| CoreError::Parse {
                line: i + 1,
                reason: e.to_string(),
            })?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let id = fields.next().unwrap_or_default().to_string();
            let members: Vec<String> = fields.map(String::from).collect();
            if members.is_empty() {
                return Err(CoreError::Parse {
                    line: i + 1,
                    reason: format!("complex {id} has no members"),
                });
            }
            complexes.push((id, members));
        }
        Ok(Self { complexes })
    }

    /// Graph nodes appearing in at least one complex, ascending.
    pub fn universe(&self, graph: &UncertainGraph) -> Vec<NodeId> {
        let mut ids: Vec<NodeId> = self
            .complexes
            .iter()
            .flat_map(|(_, m)| m.iter().filter_map(|l| graph.node_id(l)))
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Unordered node pairs sharing a complex, restricted to the graph.
    pub fn positive_pairs(&self, graph: &UncertainGraph) -> HashSet<(NodeId, NodeId)> {
        let mut out = HashSet::new();
        for (_, members) in &self.complexes {
            let mut ids: Vec<NodeId> = members.iter().filter_map(|l| graph.node_id(l)).collect();
            ids.sort_unstable();
            ids.dedup();
            for (i, &u) in ids.iter().enumerate() {
                for &v in &ids[i + 1..] {
                    out.insert((u, v));
                }
            }
        }
        out
    }
}

/// Pair-level agreement between predicted clusters and reference complexes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfusionReport {
    pub universe: usize,
    pub positives: u64,
    pub negatives: u64,
    pub true_positives: u64,
    pub false_positives: u64,
    pub tpr: Option<f64>,
    pub fpr: Option<f64>,
}

/// Scores co-clustered pairs of shared nodes against the reference pairs.
pub fn evaluate_predictions(
    clustering: &Clustering,
    graph: &UncertainGraph,
    truth: &GroundTruth,
) -> Result<ConfusionReport> {
    let universe = truth.universe(graph);
    if universe.is_empty() {
        return invalid("no node is shared between the graph and the reference complexes");
    }
    let positive = truth.positive_pairs(graph);
    let mut grouped: Vec<Vec<NodeId>> = vec![Vec::new(); clustering.k()];
    for &u in &universe {
        if let Some(i) = clustering.assignment[u] {
            grouped[i].push(u);
        }
    }
    let (mut tp, mut fp) = (0u64, 0u64);
    for members in &grouped {
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                if positive.contains(&(u, v)) {
                    tp += 1;
                } else {
                    fp += 1;
                }
            }
        }
    }
    let positives = positive.len() as u64;
    let negatives = pairs(universe.len() as u64) - positives;
    Ok(ConfusionReport {
        universe: universe.len(),
        positives,
        negatives,
        true_positives: tp,
        false_positives: fp,
        tpr: ratio(tp as f64, positives),
        fpr: ratio(fp as f64, negatives),
    })
}
