//! Deterministic farthest-first baseline on shortest paths.
//!
//! Edge `e` gets length `ln(1/p(e))`, so a path's length is minus the log of the
//! probability that all its edges exist. Centers are picked Gonzalez-style and
//! nodes join their nearest center.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::clustering::{validate_k, Clustering, ClusteringParams};
use crate::error::Result;
use crate::graph::{NodeId, UncertainGraph};

/// Length of an edge with existence probability `p`.
pub fn edge_weight(p: f64) -> f64 {
    -p.ln()
}

#[derive(Clone, Copy, PartialEq)]
struct State {
    dist: f64,
    node: NodeId,
}

impl Eq for State {}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance, then node id
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Single-source shortest path lengths; unreachable nodes get `f64::INFINITY`.
pub fn shortest_paths(graph: &UncertainGraph, source: NodeId) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; graph.n()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(State { dist: 0.0, node: source });
    while let Some(State { dist: d, node }) = heap.pop() {
        if d > dist[node] {
            continue;
        }
        for &e in graph.incident(node) {
            let edge = graph.edge(e);
            let next = edge.other(node);
            let candidate = d + edge_weight(edge.p);
            if candidate < dist[next] {
                dist[next] = candidate;
                heap.push(State { dist: candidate, node: next });
            }
        }
    }
    dist
}

/// Farthest-first k-center on `ln(1/p)` path lengths.
///
/// The first center is node 0; each further center is the node farthest from
/// the current centers (unreachable counts as farthest, ties to the smallest
/// id). Per-node estimates are `exp(-dist)` to the assigned center.
pub fn gmm(graph: &UncertainGraph, k: usize) -> Result<Clustering> {
    let n = graph.n();
    validate_k(k, n)?;
    let mut centers = vec![0];
    let mut nearest = shortest_paths(graph, 0);
    let mut owner = vec![0usize; n];
    let mut is_center = vec![false; n];
    is_center[0] = true;

    while centers.len() < k {
        let mut far = None::<NodeId>;
        for u in 0..n {
            if is_center[u] {
                continue;
            }
            if far.is_none_or(|f| nearest[u].total_cmp(&nearest[f]) == Ordering::Greater) {
                far = Some(u);
            }
        }
        let c = far.expect("k <= n leaves a non-center");
        let index = centers.len();
        centers.push(c);
        is_center[c] = true;
        let dist = shortest_paths(graph, c);
        for u in 0..n {
            if dist[u] < nearest[u] {
                nearest[u] = dist[u];
                owner[u] = index;
            }
        }
        nearest[c] = 0.0;
        owner[c] = index;
    }

    Ok(Clustering {
        centers,
        assignment: owner.into_iter().map(Some).collect(),
        estimates: nearest.iter().map(|&d| (-d).exp()).collect(),
        params: ClusteringParams::default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{ConnectionOracle, ExactOracle};

    #[test]
    fn weights() {
        assert_eq!(edge_weight(1.0), 0.0);
        assert!((edge_weight(0.5) - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn skewed_path() {
        let g = UncertainGraph::with_nodes(3, &[(0, 1, 0.9), (1, 2, 0.1)]).unwrap();
        let c = gmm(&g, 2).unwrap();
        assert_eq!(c.centers, vec![0, 2]);
        assert_eq!(c.center_of(1), Some(0));
        assert!((c.estimates[1] - 0.9).abs() < 1e-12);
    }

    #[test]
    fn disconnected_components_each_get_a_center() {
        let g = UncertainGraph::with_nodes(5, &[(0, 1, 0.5), (2, 3, 0.5), (3, 4, 0.9)]).unwrap();
        let c = gmm(&g, 2).unwrap();
        assert_eq!(c.centers, vec![0, 2]);
        assert!(c.is_full());
        assert_eq!(c.center_of(4), Some(2));
        let c = gmm(&g, 5).unwrap();
        let mut centers = c.centers.clone();
        centers.sort();
        assert_eq!(centers, vec![0, 1, 2, 3, 4]);
        assert!(c.estimates.iter().all(|&e| e == 1.0));
    }

    #[test]
    fn path_estimate_lower_bounds_connection() {
        let g = UncertainGraph::with_nodes(
            5,
            &[(0, 1, 0.3), (1, 2, 0.9), (2, 3, 0.6), (3, 4, 0.4), (0, 4, 0.6), (1, 3, 0.5)],
        )
        .unwrap();
        let oracle = ExactOracle::new(&g).unwrap();
        for s in 0..5 {
            let dist = shortest_paths(&g, s);
            let row = oracle.row(s, None);
            for v in 0..5 {
                assert!((-dist[v]).exp() <= row[v] + 1e-12);
            }
        }
    }

    #[test]
    fn rejects_bad_k() {
        let g = UncertainGraph::with_nodes(2, &[(0, 1, 0.5)]).unwrap();
        assert!(gmm(&g, 0).is_err());
        assert!(gmm(&g, 3).is_err());
    }
}
