//! Possible-world sampling.
//!
//! Every world is a pure function of `(master seed, world index)`: the edge
//! draws come from a ChaCha stream keyed by the master seed and selected by the
//! world index, consumed in edge order. Worlds can therefore be generated in any
//! order, on any number of threads, and regenerated later when a depth-limited
//! query needs the actual edge realization.

use std::collections::VecDeque;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dsu::UnionFind;
use crate::graph::{NodeId, UncertainGraph};

/// Worlds per parallel work item when counting.
const CHUNK: usize = 32;

/// Bitset of realized edges, one bit per edge index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMask {
    words: Vec<u64>,
}

impl EdgeMask {
    pub(crate) fn new(m: usize) -> Self {
        Self {
            words: vec![0; m.div_ceil(64)],
        }
    }

    pub(crate) fn set(&mut self, e: usize) {
        self.words[e / 64] |= 1 << (e % 64);
    }

    pub fn contains(&self, e: usize) -> bool {
        self.words[e / 64] >> (e % 64) & 1 == 1
    }
}

/// Draws the edge realization of world `index`.
pub fn realize_edges(graph: &UncertainGraph, master_seed: u64, index: u64) -> EdgeMask {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    let mut mask = EdgeMask::new(graph.m());
    for (e, edge) in graph.edges().iter().enumerate() {
        // always draw so edge e consumes the same stream position in every world
        let x: f64 = rng.random();
        if x < edge.p {
            mask.set(e);
        }
    }
    mask
}

/// One sampled possible world, stored as canonical component labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorldSample {
    pub master_seed: u64,
    pub index: u64,
    /// `labels[u]` is the smallest node id in `u`'s component.
    pub labels: Vec<u32>,
}

impl WorldSample {
    pub fn connected(&self, u: NodeId, v: NodeId) -> bool {
        self.labels[u] == self.labels[v]
    }

    pub fn realized_edges(&self, graph: &UncertainGraph) -> EdgeMask {
        realize_edges(graph, self.master_seed, self.index)
    }
}

pub fn sample_world(graph: &UncertainGraph, master_seed: u64, index: u64) -> WorldSample {
    let mask = realize_edges(graph, master_seed, index);
    WorldSample {
        master_seed,
        index,
        labels: labels_from_mask(graph, &mask),
    }
}

fn labels_from_mask(graph: &UncertainGraph, mask: &EdgeMask) -> Vec<u32> {
    let mut dsu = UnionFind::new(graph.n());
    for (e, edge) in graph.edges().iter().enumerate() {
        if mask.contains(e) {
            dsu.union(edge.u, edge.v);
        }
    }
    dsu.canonical_labels()
}

/// Nodes within `d` hops of `source` in the given world, in ascending id order.
pub fn d_reachable(
    world: &WorldSample,
    graph: &UncertainGraph,
    source: NodeId,
    d: usize,
) -> Vec<NodeId> {
    let mask = world.realized_edges(graph);
    let mut hops = vec![u32::MAX; graph.n()];
    let mut queue = VecDeque::new();
    bfs_within(graph, &mask, source, d, &mut hops, &mut queue);
    (0..graph.n()).filter(|&u| hops[u] != u32::MAX).collect()
}

/// Hop-limited BFS; `hops` must be all `u32::MAX` on entry. Returns the visited nodes.
pub(crate) fn bfs_within(
    graph: &UncertainGraph,
    mask: &EdgeMask,
    source: NodeId,
    d: usize,
    hops: &mut [u32],
    queue: &mut VecDeque<NodeId>,
) -> Vec<NodeId> {
    let mut visited = vec![source];
    hops[source] = 0;
    queue.clear();
    queue.push_back(source);
    while let Some(x) = queue.pop_front() {
        let h = hops[x];
        if h as usize >= d {
            continue;
        }
        for &e in graph.incident(x) {
            if !mask.contains(e) {
                continue;
            }
            let y = graph.edge(e).other(x);
            if hops[y] == u32::MAX {
                hops[y] = h + 1;
                visited.push(y);
                queue.push_back(y);
            }
        }
    }
    visited
}

/// Growable, reproducible collection of possible worlds.
#[derive(Debug)]
pub struct WorldSamplePool<'g> {
    graph: &'g UncertainGraph,
    master_seed: u64,
    worlds: Vec<WorldSample>,
    regime: Option<f64>,
    masks: OnceLock<Vec<EdgeMask>>,
}

impl<'g> WorldSamplePool<'g> {
    pub fn new(graph: &'g UncertainGraph, master_seed: u64) -> Self {
        Self {
            graph,
            master_seed,
            worlds: Vec::new(),
            regime: None,
            masks: OnceLock::new(),
        }
    }

    pub fn with_size(graph: &'g UncertainGraph, master_seed: u64, r: usize) -> Self {
        let mut pool = Self::new(graph, master_seed);
        pool.extend_to(r);
        pool
    }

    pub fn graph(&self) -> &'g UncertainGraph {
        self.graph
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn r(&self) -> usize {
        self.worlds.len()
    }

    pub fn worlds(&self) -> &[WorldSample] {
        &self.worlds
    }

    /// Probability threshold the current size was dimensioned for, if any.
    pub fn regime(&self) -> Option<f64> {
        self.regime
    }

    pub fn set_regime(&mut self, q: Option<f64>) {
        self.regime = q;
    }

    /// Grows the pool to `target_r` worlds. Existing worlds are untouched; a
    /// target at or below the current size is a no-op. Returns whether it grew.
    pub fn extend_to(&mut self, target_r: usize) -> bool {
        let current = self.worlds.len();
        if target_r <= current {
            return false;
        }
        let graph = self.graph;
        let seed = self.master_seed;
        let fresh: Vec<WorldSample> = (current as u64..target_r as u64)
            .into_par_iter()
            .map(|i| sample_world(graph, seed, i))
            .collect();
        self.worlds.extend(fresh);
        self.masks = OnceLock::new();
        true
    }

    fn edge_masks(&self) -> &[EdgeMask] {
        self.masks.get_or_init(|| {
            self.worlds
                .par_iter()
                .map(|w| w.realized_edges(self.graph))
                .collect()
        })
    }

    /// Per node, the number of worlds in which it shares a component with `source`.
    pub fn connected_counts(&self, source: NodeId) -> Vec<u32> {
        let n = self.graph.n();
        self.worlds
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut counts = vec![0u32; n];
                for w in chunk {
                    let target = w.labels[source];
                    for (c, &l) in counts.iter_mut().zip(&w.labels) {
                        *c += (l == target) as u32;
                    }
                }
                counts
            })
            .reduce(|| vec![0u32; n], add_counts)
    }

    /// Per node, the number of worlds in which it lies within `d` hops of `source`.
    pub fn reach_counts(&self, source: NodeId, d: usize) -> Vec<u32> {
        let n = self.graph.n();
        let graph = self.graph;
        let masks = self.edge_masks();
        masks
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut counts = vec![0u32; n];
                let mut hops = vec![u32::MAX; n];
                let mut queue = VecDeque::new();
                for mask in chunk {
                    let visited = bfs_within(graph, mask, source, d, &mut hops, &mut queue);
                    for x in visited {
                        counts[x] += 1;
                        hops[x] = u32::MAX;
                    }
                }
                counts
            })
            .reduce(|| vec![0u32; n], add_counts)
    }

    /// Number of worlds in which `u` is within `d` hops of `v` (unlimited when `None`).
    pub fn pair_count(&self, u: NodeId, v: NodeId, depth: Option<usize>) -> u32 {
        match depth {
            None => self.worlds.iter().filter(|w| w.connected(u, v)).count() as u32,
            Some(d) => self.reach_counts(u, d)[v],
        }
    }
}

fn add_counts(mut a: Vec<u32>, b: Vec<u32>) -> Vec<u32> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}
