use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::{effective_depth, ConnectionOracle, ProbEstimate};
use crate::graph::{NodeId, UncertainGraph};
use crate::world::WorldSamplePool;

/// Fraction of sampled worlds in which `u` and `v` are connected.
pub fn mc_estimate(pool: &WorldSamplePool<'_>, u: NodeId, v: NodeId) -> ProbEstimate {
    estimate_from_pool(pool, u, v, None)
}

/// Fraction of sampled worlds in which `u` and `v` are within `d` hops.
pub fn mc_estimate_d(pool: &WorldSamplePool<'_>, u: NodeId, v: NodeId, d: usize) -> ProbEstimate {
    estimate_from_pool(pool, u, v, Some(d))
}

fn estimate_from_pool(
    pool: &WorldSamplePool<'_>,
    u: NodeId,
    v: NodeId,
    depth: Option<usize>,
) -> ProbEstimate {
    assert!(pool.r() > 0, "estimate requires a non-empty pool");
    let value = if u == v {
        1.0
    } else {
        let depth = effective_depth(pool.graph().n(), depth);
        pool.pair_count(u, v, depth) as f64 / pool.r() as f64
    };
    ProbEstimate {
        value,
        samples: Some(pool.r()),
        regime: pool.regime(),
    }
}

type RowCache = HashMap<(NodeId, Option<usize>), Arc<Vec<f64>>>;

/// Monte Carlo oracle owning a pool of sampled worlds.
///
/// Rows are cached per `(source, depth)` and the cache is dropped whenever the
/// pool grows.
pub struct MonteCarloOracle<'g> {
    pool: WorldSamplePool<'g>,
    rows: Mutex<RowCache>,
}

impl<'g> MonteCarloOracle<'g> {
    pub fn new(pool: WorldSamplePool<'g>) -> Self {
        Self {
            pool,
            rows: Mutex::new(HashMap::new()),
        }
    }

    pub fn pool(&self) -> &WorldSamplePool<'g> {
        &self.pool
    }

    pub fn into_pool(self) -> WorldSamplePool<'g> {
        self.pool
    }

    /// Grows the pool to `target_r` worlds, recording the threshold it was sized for.
    pub fn extend_to(&mut self, target_r: usize, regime: Option<f64>) {
        if self.pool.extend_to(target_r) {
            self.rows.get_mut().unwrap().clear();
        }
        self.pool.set_regime(regime);
    }
}

impl ConnectionOracle for MonteCarloOracle<'_> {
    fn graph(&self) -> &UncertainGraph {
        self.pool.graph()
    }

    fn row(&self, source: NodeId, depth: Option<usize>) -> Arc<Vec<f64>> {
        assert!(self.pool.r() > 0, "Monte Carlo oracle queried with an empty pool");
        let depth = effective_depth(self.pool.graph().n(), depth);
        if let Some(row) = self.rows.lock().unwrap().get(&(source, depth)) {
            return Arc::clone(row);
        }
        let counts = match depth {
            None => self.pool.connected_counts(source),
            Some(d) => self.pool.reach_counts(source, d),
        };
        let r = self.pool.r() as f64;
        let mut row: Vec<f64> = counts.into_iter().map(|c| c as f64 / r).collect();
        row[source] = 1.0;
        let row = Arc::new(row);
        self.rows
            .lock()
            .unwrap()
            .entry((source, depth))
            .or_insert(row)
            .clone()
    }

    fn is_exact(&self) -> bool {
        false
    }

    fn samples(&self) -> Option<usize> {
        Some(self.pool.r())
    }
}
