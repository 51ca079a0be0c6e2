//! Seeded random uncertain graphs for tests, benchmarks and smoke runs.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::graph::{NodeId, UncertainGraph};

/// Uniform draw from `(0, 1]`.
pub fn unit_probability(rng: &mut ChaCha8Rng) -> f64 {
    1.0 - rng.random::<f64>()
}

/// A graph on `n` nodes with `m` distinct edges and probabilities from `prob`.
///
/// With `connected`, the first `n - 1` edges form a random spanning tree (so the
/// graph is connected when every probability is 1); the rest are uniform pairs.
pub fn random_graph(
    n: usize,
    m: usize,
    connected: bool,
    seed: u64,
    mut prob: impl FnMut(&mut ChaCha8Rng) -> f64,
) -> Result<UncertainGraph> {
    let max = n * n.saturating_sub(1) / 2;
    if m > max {
        return invalid(format!("{m} edges do not fit on {n} nodes"));
    }
    if connected && n > 0 && m + 1 < n {
        return invalid(format!("a connected graph on {n} nodes needs at least {} edges", n - 1));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashSet<(NodeId, NodeId)> = HashSet::with_capacity(m);
    let mut pairs = Vec::with_capacity(m);
    if connected {
        let mut order: Vec<NodeId> = (0..n).collect();
        for i in (1..n).rev() {
            order.swap(i, rng.random_range(0..=i));
        }
        for i in 1..n {
            let parent = order[rng.random_range(0..i)];
            let (u, v) = (parent.min(order[i]), parent.max(order[i]));
            seen.insert((u, v));
            pairs.push((u, v));
        }
    }
    while pairs.len() < m {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if seen.insert(key) {
            pairs.push(key);
        }
    }
    let edges: Vec<_> = pairs.into_iter().map(|(u, v)| (u, v, prob(&mut rng))).collect();
    UncertainGraph::with_nodes(n, &edges)
}

/// Small connected graph with probabilities uniform in `(0, 1]`; `n` nodes and
/// between `n - 1` and `max_edges` edges.
pub fn small_connected(n: usize, max_edges: usize, seed: u64) -> Result<UncertainGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let cap = max_edges.min(n * n.saturating_sub(1) / 2).max(n.saturating_sub(1));
    let m = rng.random_range(n.saturating_sub(1)..=cap);
    random_graph(n, m, true, seed, unit_probability)
}

/// Node and edge counts of the Krogan interaction network.
pub const KROGAN_NODES: usize = 2559;
pub const KROGAN_EDGES: usize = 7031;

/// A connected graph of Krogan's size: a quarter of the edges have probability
/// in `[0.9, 1]`, the rest uniform in `[0.27, 0.9)`.
pub fn krogan_like(seed: u64) -> UncertainGraph {
    random_graph(KROGAN_NODES, KROGAN_EDGES, true, seed, |rng| {
        if rng.random_bool(0.25) {
            rng.random_range(0.9..=1.0)
        } else {
            rng.random_range(0.27..0.9)
        }
    })
    .expect("fixed shape is valid")
}
