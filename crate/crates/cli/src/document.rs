//! Report documents and their canonical serialization.
//!
//! Documents go through `serde_json::Value` before printing, so object keys are
//! always emitted in sorted order and a parse/print round trip is byte-stable.

use std::collections::BTreeMap;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use ucluster_core::clustering::RunStats;
use ucluster_core::metrics::{ConfusionReport, QualityReport};
use ucluster_core::{Clustering, ConnectionOracle, NodeId, UncertainGraph};

use crate::args::Algorithm;
use crate::settings::Settings;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Found,
    NoClustering,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringDocument {
    pub algorithm: Algorithm,
    pub outcome: Outcome,
    pub params: Settings,
    /// Master seed of the sampled pool behind the run, or behind the metrics
    /// when the run sampled nothing; `null` when exact.
    pub seed: Option<u64>,
    /// Worlds in that pool.
    pub r: Option<usize>,
    pub stats: Option<RunStats>,
    pub centers: Vec<String>,
    /// Center label to member labels, sorted.
    pub clusters: BTreeMap<String, Vec<String>>,
    /// Node label to its estimated probability of reaching its center.
    pub estimates: BTreeMap<String, f64>,
    pub metrics: Option<QualityReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub durations: Option<BTreeMap<String, f64>>,
}

impl ClusteringDocument {
    pub fn new(
        algorithm: Algorithm,
        params: Settings,
        graph: &UncertainGraph,
        clustering: Option<&Clustering>,
        stats: Option<RunStats>,
    ) -> Self {
        let mut doc = Self {
            algorithm,
            outcome: if clustering.is_some() { Outcome::Found } else { Outcome::NoClustering },
            params,
            seed: None,
            r: None,
            stats,
            centers: Vec::new(),
            clusters: BTreeMap::new(),
            estimates: BTreeMap::new(),
            metrics: None,
            durations: None,
        };
        if let Some(c) = clustering {
            doc.centers = c.centers.iter().map(|&x| graph.label(x).to_string()).collect();
            for (i, members) in c.clusters().into_iter().enumerate() {
                let mut labels: Vec<String> = members.iter().map(|&u| graph.label(u).to_string()).collect();
                labels.sort();
                doc.clusters.insert(graph.label(c.centers[i]).to_string(), labels);
            }
            for (u, &e) in c.estimates.iter().enumerate() {
                if c.assignment[u].is_some() {
                    doc.estimates.insert(graph.label(u).to_string(), e);
                }
            }
            doc.seed = c.params.seed;
            doc.r = c.params.samples;
        }
        doc
    }

    /// Center ids and per-node cluster indices on `graph`.
    pub fn assignment(&self, graph: &UncertainGraph) -> Result<(Vec<NodeId>, Vec<usize>)> {
        if self.outcome != Outcome::Found {
            bail!("the report holds no clustering");
        }
        let centers = self
            .centers
            .iter()
            .map(|l| graph.require_node(l))
            .collect::<ucluster_core::Result<Vec<_>>>()?;
        let mut assignment = vec![usize::MAX; graph.n()];
        for (i, center) in self.centers.iter().enumerate() {
            let members = self
                .clusters
                .get(center)
                .with_context(|| format!("center {center} has no cluster"))?;
            for label in members {
                let u = graph.require_node(label)?;
                if assignment[u] != usize::MAX {
                    bail!("node {label} appears in two clusters");
                }
                assignment[u] = i;
            }
        }
        if let Some(u) = assignment.iter().position(|&a| a == usize::MAX) {
            bail!("node {} is not assigned to any cluster", graph.label(u));
        }
        Ok((centers, assignment))
    }

    /// Rebuilds the clustering on `graph`, with estimates from `oracle` at `depth`.
    pub fn to_clustering(
        &self,
        graph: &UncertainGraph,
        oracle: &dyn ConnectionOracle,
        depth: Option<usize>,
    ) -> Result<Clustering> {
        let (centers, assignment) = self.assignment(graph)?;
        Ok(Clustering::from_assignment(oracle, centers, assignment, depth)?)
    }
}

/// Scores of an existing clustering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsDocument {
    pub params: Settings,
    pub seed: Option<u64>,
    pub r: Option<usize>,
    pub metrics: QualityReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub durations: Option<BTreeMap<String, f64>>,
}

/// A single pairwise probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairDocument {
    pub u: String,
    pub v: String,
    pub depth: Option<usize>,
    pub value: f64,
    pub exact: bool,
    pub seed: Option<u64>,
    pub r: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalDocument {
    pub clustering: String,
    pub truth: String,
    pub confusion: ConfusionReport,
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_canonical_json<T: Serialize>(doc: &T) -> Result<String> {
    let value = serde_json::to_value(doc)?;
    let mut text = serde_json::to_string_pretty(&value)?;
    text.push('\n');
    Ok(text)
}

/// Header and row of the per-run CSV summary.
pub const CSV_HEADER: [&str; 10] = [
    "algorithm", "k", "outcome", "min_prob", "avg_prob", "inner_avpr", "outer_avpr", "final_q", "seed", "r",
];

pub fn csv_row(doc: &ClusteringDocument) -> Vec<String> {
    fn opt<T: ToString>(v: Option<T>) -> String {
        v.map(|x| x.to_string()).unwrap_or_default()
    }
    let m = doc.metrics.as_ref();
    vec![
        serde_json::to_value(doc.algorithm).unwrap().as_str().unwrap().to_string(),
        opt(doc.params.k),
        serde_json::to_value(doc.outcome).unwrap().as_str().unwrap().to_string(),
        opt(m.map(|m| m.min_prob)),
        opt(m.map(|m| m.avg_prob)),
        opt(m.and_then(|m| m.inner_avpr)),
        opt(m.and_then(|m| m.outer_avpr)),
        opt(doc.stats.and_then(|s| s.final_q)),
        opt(doc.seed),
        opt(doc.r),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::Options;
    use crate::settings::FileConfig;
    use ucluster_core::ExactOracle;

    #[test]
    fn round_trip_is_byte_stable() {
        let labels = ["w", "u", "v"].map(String::from).to_vec();
        let g = UncertainGraph::from_edges(labels, &[(0, 1, 0.5), (0, 2, 0.5)]).unwrap();
        let o = ExactOracle::new(&g).unwrap();
        let c = Clustering::from_assignment(&o, vec![0], vec![0, 0, 0], None).unwrap();
        let mut settings = Settings::resolve(&Options::default(), &FileConfig::default());
        settings.k = Some(1);
        let mut doc = ClusteringDocument::new(Algorithm::Mcp, settings, &g, Some(&c), None);
        doc.metrics = Some(QualityReport::compute(&c, &o, None));
        let text = to_canonical_json(&doc).unwrap();
        let parsed: ClusteringDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed, doc);
        assert_eq!(to_canonical_json(&parsed).unwrap(), text);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(to_canonical_json(&value).unwrap(), text);
        assert_eq!(doc.clusters["w"], vec!["u", "v", "w"]);
        assert_eq!(parsed.to_clustering(&g, &o, None).unwrap().centers, vec![0]);
    }
}
