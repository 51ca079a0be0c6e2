//! Uncertain graph model and the whitespace edge-list reader.

use std::collections::{HashMap, HashSet};
use std::io::BufRead;

use serde::Serialize;

use crate::error::{CoreError, Result};

pub type NodeId = usize;

/// An undirected edge that exists with probability `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub p: f64,
}

impl Edge {
    pub fn is_certain(&self) -> bool {
        self.p >= 1.0
    }

    /// The endpoint opposite to `x`.
    pub fn other(&self, x: NodeId) -> NodeId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// Graph whose edges are present independently, each with its own probability.
///
/// Node ids are dense (`0..n`); every node keeps the label it was loaded with.
#[derive(Debug, Clone)]
pub struct UncertainGraph {
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    edges: Vec<Edge>,
    /// Per node, indices into `edges`.
    adjacency: Vec<Vec<usize>>,
}

impl UncertainGraph {
    /// Builds a graph from labels and `(u, v, p)` triples over those labels' ids.
    pub fn from_edges(labels: Vec<String>, edges: &[(NodeId, NodeId, f64)]) -> Result<Self> {
        let mut graph = Self::with_labels(labels)?;
        for (i, &(u, v, p)) in edges.iter().enumerate() {
            graph.push_edge(u, v, p, i + 1)?;
        }
        Ok(graph)
    }

    /// Convenience constructor labelling nodes `0..n` by their decimal id.
    pub fn with_nodes(n: usize, edges: &[(NodeId, NodeId, f64)]) -> Result<Self> {
        Self::from_edges((0..n).map(|i| i.to_string()).collect(), edges)
    }

    fn with_labels(labels: Vec<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(labels.len());
        for (id, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), id).is_some() {
                return Err(CoreError::InvalidParameter(format!(
                    "duplicate node label `{label}`"
                )));
            }
        }
        let n = labels.len();
        Ok(Self {
            labels,
            index,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); n],
        })
    }

    fn push_edge(&mut self, u: NodeId, v: NodeId, p: f64, line: usize) -> Result<()> {
        let n = self.n();
        for id in [u, v] {
            if id >= n {
                return Err(CoreError::NodeOutOfRange { id, n });
            }
        }
        if u == v {
            return Err(CoreError::SelfLoop {
                line,
                label: self.labels[u].clone(),
            });
        }
        if !(p > 0.0 && p <= 1.0) {
            return Err(CoreError::ProbabilityOutOfRange { line, value: p });
        }
        if self.find_edge(u, v).is_some() {
            return Err(CoreError::DuplicateEdge {
                line,
                u: self.labels[u].clone(),
                v: self.labels[v].clone(),
            });
        }
        let idx = self.edges.len();
        self.edges.push(Edge { u, v, p });
        self.adjacency[u].push(idx);
        self.adjacency[v].push(idx);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, idx: usize) -> &Edge {
        &self.edges[idx]
    }

    /// Indices of the edges incident to `node`.
    pub fn incident(&self, node: NodeId) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn label(&self, node: NodeId) -> &str {
        &self.labels[node]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn node_id(&self, label: &str) -> Option<NodeId> {
        self.index.get(label).copied()
    }

    pub fn require_node(&self, label: &str) -> Result<NodeId> {
        self.node_id(label)
            .ok_or_else(|| CoreError::UnknownNode(label.to_string()))
    }

    /// Index of the edge joining `u` and `v`, in either orientation.
    pub fn find_edge(&self, u: NodeId, v: NodeId) -> Option<usize> {
        let (a, b) = if self.adjacency[u].len() <= self.adjacency[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adjacency[a]
            .iter()
            .copied()
            .find(|&e| self.edges[e].other(a) == b)
    }

    /// Number of edges with `p < 1`.
    pub fn uncertain_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| !e.is_certain()).count()
    }

    /// Connected components of the underlying deterministic graph (all edges present).
    pub fn component_count(&self) -> usize {
        let mut dsu = crate::dsu::UnionFind::new(self.n());
        for e in &self.edges {
            dsu.union(e.u, e.v);
        }
        dsu.count()
    }

    /// Copy of the graph with one edge's probability replaced, or the edge removed when `p` is `None`.
    pub(crate) fn with_edge_override(&self, idx: usize, p: Option<f64>) -> Self {
        let mut out = Self {
            labels: self.labels.clone(),
            index: self.index.clone(),
            edges: Vec::with_capacity(self.m()),
            adjacency: vec![Vec::new(); self.n()],
        };
        for (i, e) in self.edges.iter().enumerate() {
            let prob = if i == idx {
                match p {
                    Some(p) => p,
                    None => continue,
                }
            } else {
                e.p
            };
            let j = out.edges.len();
            out.edges.push(Edge { u: e.u, v: e.v, p: prob });
            out.adjacency[e.u].push(j);
            out.adjacency[e.v].push(j);
        }
        out
    }
}

/// Reads the `<u> <v> <p>` edge-list format. `#` lines and blank lines are skipped.
pub fn load_graph<R: BufRead>(source: R) -> Result<UncertainGraph> {
    let mut graph = UncertainGraph::with_labels(Vec::new())?;
    let mut seen: HashSet<(NodeId, NodeId)> = HashSet::new();
    for (i, line) in source.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| CoreError::Parse {
            line: lineno,
            reason: e.to_string(),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(CoreError::Parse {
                line: lineno,
                reason: format!("expected 3 fields, found {}", fields.len()),
            });
        }
        let p: f64 = fields[2].parse().map_err(|_| CoreError::Parse {
            line: lineno,
            reason: format!("unparsable probability `{}`", fields[2]),
        })?;
        if fields[0] == fields[1] {
            return Err(CoreError::SelfLoop {
                line: lineno,
                label: fields[0].to_string(),
            });
        }
        if !(p > 0.0 && p <= 1.0) {
            return Err(CoreError::ProbabilityOutOfRange {
                line: lineno,
                value: p,
            });
        }
        let u = graph.intern(fields[0]);
        let v = graph.intern(fields[1]);
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(CoreError::DuplicateEdge {
                line: lineno,
                u: fields[0].to_string(),
                v: fields[1].to_string(),
            });
        }
        let idx = graph.edges.len();
        graph.edges.push(Edge { u, v, p });
        graph.adjacency[u].push(idx);
        graph.adjacency[v].push(idx);
    }
    Ok(graph)
}

impl UncertainGraph {
    fn intern(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = self.labels.len();
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), id);
        self.adjacency.push(Vec::new());
        id
    }
}

/// Edge probability for `x` co-authored papers: `1 - exp(-x / 2)`.
pub fn coauthorship_probability(papers: f64) -> f64 {
    1.0 - (-papers / 2.0).exp()
}
