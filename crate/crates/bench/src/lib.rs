//! Shared fixtures for the criterion benchmarks.

use ucluster_core::synth::{random_graph, unit_probability};
use ucluster_core::UncertainGraph;

/// `(nodes, edges)` of the sparse workloads, roughly the density of an
/// interaction network.
pub const SPARSE_SHAPES: [(usize, usize); 3] = [(100, 275), (400, 1100), (1600, 4400)];

/// Connected sparse graph with probabilities uniform in (0, 1].
pub fn sparse(nodes: usize, edges: usize, seed: u64) -> UncertainGraph {
    random_graph(nodes, edges, true, seed, unit_probability).expect("valid shape")
}

/// Small graph the exact oracle can enumerate: `uncertain` edges on `nodes` nodes.
pub fn enumerable(nodes: usize, uncertain: usize, seed: u64) -> UncertainGraph {
    random_graph(nodes, uncertain, false, seed, |rng| unit_probability(rng).min(0.99)).expect("valid shape")
}
