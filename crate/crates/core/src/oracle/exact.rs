//! Exact connection probabilities by enumerating all possible worlds.
//!
//! Only uncertain edges (`p < 1`) count towards the `2^m` worlds; certain edges
//! are present in every world. Worlds are enumerated in blocks that may run in
//! parallel, and block results are combined in block order, so sums are
//! bit-identical regardless of thread count.

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use super::{effective_depth, ConnectionOracle, ProbEstimate};
use crate::dsu::UnionFind;
use crate::error::{CoreError, Result};
use crate::graph::{NodeId, UncertainGraph};
use crate::world::{bfs_within, EdgeMask};

pub const DEFAULT_UNCERTAIN_EDGE_LIMIT: usize = 25;

/// log2 of the worlds handled per parallel block.
const BLOCK_BITS: usize = 12;

type Matrix = Vec<Vec<f64>>;

pub struct ExactOracle<'g> {
    graph: &'g UncertainGraph,
    limit: usize,
    /// Indices of edges with p < 1, in edge order; bit i of a world index refers to `uncertain[i]`.
    uncertain: Vec<usize>,
    matrices: Mutex<HashMap<Option<usize>, Arc<Matrix>>>,
}

impl std::fmt::Debug for ExactOracle<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExactOracle")
            .field("n", &self.graph.n())
            .field("uncertain", &self.uncertain.len())
            .field("limit", &self.limit)
            .finish()
    }
}

impl<'g> ExactOracle<'g> {
    pub fn new(graph: &'g UncertainGraph) -> Result<Self> {
        Self::with_limit(graph, DEFAULT_UNCERTAIN_EDGE_LIMIT)
    }

    pub fn with_limit(graph: &'g UncertainGraph, limit: usize) -> Result<Self> {
        let uncertain: Vec<usize> = (0..graph.m())
            .filter(|&e| !graph.edge(e).is_certain())
            .collect();
        if uncertain.len() > limit || uncertain.len() >= 63 {
            return Err(CoreError::TooManyUncertainEdges {
                uncertain: uncertain.len(),
                limit,
            });
        }
        Ok(Self {
            graph,
            limit,
            uncertain,
            matrices: Mutex::new(HashMap::new()),
        })
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    fn world_weight(&self, world: u64) -> f64 {
        self.uncertain
            .iter()
            .enumerate()
            .map(|(bit, &e)| {
                let p = self.graph.edge(e).p;
                if world >> bit & 1 == 1 {
                    p
                } else {
                    1.0 - p
                }
            })
            .product()
    }

    fn world_mask(&self, world: u64) -> EdgeMask {
        let mut mask = EdgeMask::new(self.graph.m());
        for (e, edge) in self.graph.edges().iter().enumerate() {
            if edge.is_certain() {
                mask.set(e);
            }
        }
        for (bit, &e) in self.uncertain.iter().enumerate() {
            if world >> bit & 1 == 1 {
                mask.set(e);
            }
        }
        mask
    }

    /// Folds `visit(acc, world, weight)` over every world; block results are merged in order.
    fn enumerate<A, I, V, M>(&self, init: I, visit: V, merge: M) -> A
    where
        A: Send,
        I: Fn() -> A + Sync,
        V: Fn(&mut A, u64, f64) + Sync,
        M: Fn(A, A) -> A,
    {
        let m = self.uncertain.len();
        let total: u64 = 1 << m;
        let block = 1u64 << BLOCK_BITS.min(m);
        let blocks = total / block;
        let partial: Vec<A> = (0..blocks)
            .into_par_iter()
            .map(|b| {
                let mut acc = init();
                for world in b * block..(b + 1) * block {
                    visit(&mut acc, world, self.world_weight(world));
                }
                acc
            })
            .collect();
        partial.into_iter().fold(init(), merge)
    }

    /// Component label of every node in the given world.
    fn world_labels(&self, base: &UnionFind, world: u64) -> Vec<u32> {
        let mut dsu = base.clone();
        for (bit, &e) in self.uncertain.iter().enumerate() {
            if world >> bit & 1 == 1 {
                let edge = self.graph.edge(e);
                dsu.union(edge.u, edge.v);
            }
        }
        dsu.canonical_labels()
    }

    fn certain_base(&self) -> UnionFind {
        let mut dsu = UnionFind::new(self.graph.n());
        for edge in self.graph.edges().iter().filter(|e| e.is_certain()) {
            dsu.union(edge.u, edge.v);
        }
        dsu
    }

    fn check_node(&self, u: NodeId) -> Result<()> {
        if u < self.graph.n() {
            Ok(())
        } else {
            Err(CoreError::NodeOutOfRange {
                id: u,
                n: self.graph.n(),
            })
        }
    }

    /// `Pr(u ~ v)`.
    pub fn connection_prob(&self, u: NodeId, v: NodeId) -> Result<f64> {
        self.check_node(u)?;
        self.check_node(v)?;
        if u == v {
            return Ok(1.0);
        }
        let base = self.certain_base();
        Ok(self.enumerate(
            || 0.0,
            |acc, world, w| {
                let mut dsu = base.clone();
                for (bit, &e) in self.uncertain.iter().enumerate() {
                    if world >> bit & 1 == 1 {
                        let edge = self.graph.edge(e);
                        dsu.union(edge.u, edge.v);
                    }
                }
                if dsu.find(u) == dsu.find(v) {
                    *acc += w;
                }
            },
            |a, b| a + b,
        ))
    }

    /// Probability that `u` and `v` are within `d` hops of each other.
    pub fn d_connection_prob(&self, u: NodeId, v: NodeId, d: usize) -> Result<f64> {
        self.check_node(u)?;
        self.check_node(v)?;
        if d == 0 {
            return Err(CoreError::InvalidParameter("depth must be at least 1".into()));
        }
        if u == v {
            return Ok(1.0);
        }
        let n = self.graph.n();
        Ok(self.enumerate(
            || 0.0,
            |acc, world, w| {
                let mask = self.world_mask(world);
                let mut hops = vec![u32::MAX; n];
                let mut queue = VecDeque::new();
                bfs_within(self.graph, &mask, u, d, &mut hops, &mut queue);
                if hops[v] != u32::MAX {
                    *acc += w;
                }
            },
            |a, b| a + b,
        ))
    }

    /// `Pr(u ~ v | edge present)` or `Pr(u ~ v | edge absent)`.
    pub fn conditional_prob(&self, u: NodeId, v: NodeId, edge: usize, present: bool) -> Result<f64> {
        if edge >= self.graph.m() {
            return Err(CoreError::InvalidParameter(format!("no edge with index {edge}")));
        }
        if !present && self.graph.edge(edge).is_certain() {
            return Err(CoreError::ZeroProbabilityCondition(edge));
        }
        // edges are independent, so conditioning is the same as fixing the edge
        let fixed = self
            .graph
            .with_edge_override(edge, if present { Some(1.0) } else { None });
        ExactOracle::with_limit(&fixed, self.limit)?.connection_prob(u, v)
    }

    /// Exact probability wrapped as an estimate.
    pub fn estimate(&self, u: NodeId, v: NodeId, depth: Option<usize>) -> Result<ProbEstimate> {
        let value = match effective_depth(self.graph.n(), depth) {
            None => self.connection_prob(u, v)?,
            Some(d) => self.d_connection_prob(u, v, d)?,
        };
        Ok(ProbEstimate {
            value,
            samples: None,
            regime: None,
        })
    }

    /// All-pairs (d-)connection probabilities, cached per depth.
    pub fn matrix(&self, depth: Option<usize>) -> Arc<Matrix> {
        let depth = effective_depth(self.graph.n(), depth);
        if let Some(m) = self.matrices.lock().unwrap().get(&depth) {
            return Arc::clone(m);
        }
        let computed = Arc::new(match depth {
            None => self.all_pairs_connected(),
            Some(d) => self.all_pairs_within(d),
        });
        self.matrices
            .lock()
            .unwrap()
            .entry(depth)
            .or_insert(computed)
            .clone()
    }

    fn all_pairs_connected(&self) -> Matrix {
        let n = self.graph.n();
        let base = self.certain_base();
        let mut matrix = self.enumerate(
            || vec![vec![0.0; n]; n],
            |acc, world, w| {
                let labels = self.world_labels(&base, world);
                let mut groups: HashMap<u32, Vec<usize>> = HashMap::new();
                for (x, &l) in labels.iter().enumerate() {
                    groups.entry(l).or_default().push(x);
                }
                for members in groups.values() {
                    for &a in members {
                        for &b in members {
                            acc[a][b] += w;
                        }
                    }
                }
            },
            add_matrices,
        );
        for (i, row) in matrix.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        matrix
    }

    fn all_pairs_within(&self, d: usize) -> Matrix {
        let n = self.graph.n();
        let mut matrix = self.enumerate(
            || vec![vec![0.0; n]; n],
            |acc, world, w| {
                let mask = self.world_mask(world);
                let mut hops = vec![u32::MAX; n];
                let mut queue = VecDeque::new();
                for (s, row) in acc.iter_mut().enumerate() {
                    for x in bfs_within(self.graph, &mask, s, d, &mut hops, &mut queue) {
                        row[x] += w;
                        hops[x] = u32::MAX;
                    }
                }
            },
            add_matrices,
        );
        for (i, row) in matrix.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        matrix
    }
}

fn add_matrices(mut a: Matrix, b: Matrix) -> Matrix {
    for (ra, rb) in a.iter_mut().zip(b) {
        for (x, y) in ra.iter_mut().zip(rb) {
            *x += y;
        }
    }
    a
}

impl ConnectionOracle for ExactOracle<'_> {
    fn graph(&self) -> &UncertainGraph {
        self.graph
    }

    fn row(&self, source: NodeId, depth: Option<usize>) -> Arc<Vec<f64>> {
        Arc::new(self.matrix(depth)[source].clone())
    }

    fn prob(&self, u: NodeId, v: NodeId, depth: Option<usize>) -> f64 {
        self.matrix(depth)[u][v]
    }

    fn is_exact(&self) -> bool {
        true
    }

    fn samples(&self) -> Option<usize> {
        None
    }
}
