use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{validate_k, Clustering, ClusteringParams};
use crate::error::{invalid, Result};
use crate::graph::NodeId;
use crate::oracle::{effective_depth, ConnectionOracle};

/// How the candidate set `T` is drawn from the uncovered nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CandidateRule {
    /// The `alpha` uncovered nodes with the smallest ids.
    #[default]
    Smallest,
    /// `alpha` uncovered nodes drawn uniformly, keyed by the seed and iteration.
    Seeded(u64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialParams {
    pub k: usize,
    /// Coverage threshold.
    pub q: f64,
    /// Candidate-set size.
    pub alpha: usize,
    /// Threshold used when scoring candidates.
    pub q_bar: f64,
    /// Relative-error slack; ignored by exact oracles.
    pub epsilon: f64,
    /// Hop limit for coverage.
    pub depth: Option<usize>,
    /// Hop limit for candidate scoring; must not exceed `depth`.
    pub select_depth: Option<usize>,
    pub candidates: CandidateRule,
}

impl PartialParams {
    pub fn new(k: usize, q: f64, alpha: usize, q_bar: f64, epsilon: f64) -> Self {
        Self {
            k,
            q,
            alpha,
            q_bar,
            epsilon,
            depth: None,
            select_depth: None,
            candidates: CandidateRule::Smallest,
        }
    }

    pub fn with_depths(mut self, depth: Option<usize>, select_depth: Option<usize>) -> Self {
        self.depth = depth;
        self.select_depth = select_depth;
        self
    }

    fn validate(&self, n: usize) -> Result<()> {
        validate_k(self.k, n)?;
        if !(self.q > 0.0 && self.q <= self.q_bar && self.q_bar <= 1.0) {
            return invalid(format!(
                "thresholds must satisfy 0 < q <= q_bar <= 1, got q = {}, q_bar = {}",
                self.q, self.q_bar
            ));
        }
        if self.alpha == 0 {
            return invalid("alpha must be at least 1");
        }
        if !(0.0..1.0).contains(&self.epsilon) {
            return invalid(format!("epsilon must lie in [0, 1), got {}", self.epsilon));
        }
        match (self.depth, self.select_depth) {
            (_, Some(0)) | (Some(0), _) => invalid("depths must be at least 1"),
            (Some(d), None) => invalid(format!("selection depth unbounded but coverage depth is {d}")),
            (Some(d), Some(s)) if s > d => {
                invalid(format!("selection depth {s} exceeds coverage depth {d}"))
            }
            _ => Ok(()),
        }
    }
}

/// Greedy partial k-clustering with unlimited path length.
pub fn min_partial(
    oracle: &dyn ConnectionOracle,
    k: usize,
    q: f64,
    alpha: usize,
    q_bar: f64,
    epsilon: f64,
) -> Result<Clustering> {
    partial_clustering(oracle, &PartialParams::new(k, q, alpha, q_bar, epsilon))
}

/// Greedy partial k-clustering on d-connection probabilities: candidates are
/// scored within `d_prime` hops, coverage is tested within `d` hops.
#[allow(clippy::too_many_arguments)]
pub fn min_partial_d(
    oracle: &dyn ConnectionOracle,
    k: usize,
    q: f64,
    alpha: usize,
    q_bar: f64,
    d: usize,
    d_prime: usize,
    epsilon: f64,
) -> Result<Clustering> {
    let params = PartialParams::new(k, q, alpha, q_bar, epsilon).with_depths(Some(d), Some(d_prime));
    partial_clustering(oracle, &params)
}

fn candidate_set(
    uncovered: &[bool],
    remaining: usize,
    alpha: usize,
    rule: CandidateRule,
    iteration: usize,
) -> Vec<NodeId> {
    let size = alpha.min(remaining);
    let open = uncovered
        .iter()
        .enumerate()
        .filter(|(_, &u)| u)
        .map(|(i, _)| i);
    match rule {
        CandidateRule::Smallest => open.take(size).collect(),
        CandidateRule::Seeded(seed) => {
            let open: Vec<NodeId> = open.collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(iteration as u64);
            let mut picked: Vec<NodeId> = sample(&mut rng, open.len(), size)
                .into_iter()
                .map(|i| open[i])
                .collect();
            picked.sort_unstable();
            picked
        }
    }
}

/// The min-partial primitive, general form.
pub fn partial_clustering(oracle: &dyn ConnectionOracle, params: &PartialParams) -> Result<Clustering> {
    let n = oracle.graph().n();
    params.validate(n)?;
    let depth = effective_depth(n, params.depth);
    let select_depth = effective_depth(n, params.select_depth);
    let epsilon = if oracle.is_exact() { 0.0 } else { params.epsilon };
    let cover_at = oracle.admission_threshold(params.q, epsilon);
    let score_at = oracle.admission_threshold(params.q_bar, epsilon);

    let mut uncovered = vec![true; n];
    let mut remaining = n;
    let mut centers: Vec<NodeId> = Vec::with_capacity(params.k);

    for iteration in 0..params.k {
        if remaining == 0 {
            break;
        }
        let candidates = candidate_set(&uncovered, remaining, params.alpha, params.candidates, iteration);
        let center = if candidates.len() == 1 {
            candidates[0]
        } else {
            let scores: Vec<usize> = candidates
                .par_iter()
                .map(|&v| {
                    let row = oracle.row(v, select_depth);
                    (0..n).filter(|&u| uncovered[u] && row[u] >= score_at).count()
                })
                .collect();
            // first maximum, so ties go to the smallest id
            let mut best = 0;
            for i in 1..candidates.len() {
                if scores[i] > scores[best] {
                    best = i;
                }
            }
            candidates[best]
        };
        centers.push(center);
        let row = oracle.row(center, depth);
        for u in 0..n {
            if uncovered[u] && row[u] >= cover_at {
                uncovered[u] = false;
                remaining -= 1;
            }
        }
        // the center's self-probability is 1, but keep it covered regardless of threshold rounding
        if uncovered[center] {
            uncovered[center] = false;
            remaining -= 1;
        }
    }

    if centers.len() < params.k {
        let mut is_center = vec![false; n];
        for &c in &centers {
            is_center[c] = true;
        }
        let pad: Vec<NodeId> = (0..n)
            .filter(|&u| uncovered[u] && !is_center[u])
            .chain((0..n).filter(|&u| !uncovered[u] && !is_center[u]))
            .take(params.k - centers.len())
            .collect();
        for c in pad {
            uncovered[c] = false;
            centers.push(c);
        }
    }

    let rows: Vec<_> = centers.iter().map(|&c| oracle.row(c, depth)).collect();
    let mut assignment = vec![None; n];
    let mut estimates = vec![0.0; n];
    for u in (0..n).filter(|&u| !uncovered[u]) {
        let (best, value) = best_center(&rows, u);
        assignment[u] = Some(best);
        estimates[u] = value;
    }
    for (i, &c) in centers.iter().enumerate() {
        assignment[c] = Some(i);
        estimates[c] = rows[i][c];
    }

    Ok(Clustering {
        centers,
        assignment,
        estimates,
        params: ClusteringParams {
            q: Some(params.q),
            epsilon: Some(epsilon),
            depth,
            select_depth,
            samples: oracle.samples(),
            ..Default::default()
        },
    })
}

/// Index and value of the best row at column `u`; ties go to the smaller index.
fn best_center(rows: &[std::sync::Arc<Vec<f64>>], u: NodeId) -> (usize, f64) {
    let mut best = 0;
    for i in 1..rows.len() {
        if rows[i][u] > rows[best][u] {
            best = i;
        }
    }
    (best, rows[best][u])
}

/// Completes a partial clustering: every uncovered node joins the center it is
/// most likely connected to, or cluster 0 when all estimates are zero.
pub fn complete_clustering(partial: &Clustering, oracle: &dyn ConnectionOracle) -> Clustering {
    let mut full = partial.clone();
    let uncovered = partial.uncovered();
    if uncovered.is_empty() {
        return full;
    }
    let rows: Vec<_> = partial
        .centers
        .iter()
        .map(|&c| oracle.row(c, partial.params.depth))
        .collect();
    for u in uncovered {
        let (best, value) = best_center(&rows, u);
        full.assignment[u] = Some(best);
        full.estimates[u] = value;
    }
    full
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::UncertainGraph;
    use crate::oracle::ExactOracle;

    fn path3() -> UncertainGraph {
        UncertainGraph::with_nodes(3, &[(0, 1, 0.5), (1, 2, 0.5)]).unwrap()
    }

    fn two_cliques() -> UncertainGraph {
        UncertainGraph::with_nodes(
            6,
            &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0)],
        )
        .unwrap()
    }

    #[test]
    fn certain_cliques_fully_covered() {
        let g = two_cliques();
        let o = ExactOracle::new(&g).unwrap();
        let c = min_partial(&o, 2, 1.0, 1, 1.0, 0.1).unwrap();
        assert!(c.is_full());
        assert_eq!(c.centers, vec![0, 3]);
        assert!(c.estimates.iter().all(|&e| e == 1.0));
    }

    #[test]
    fn k_equals_n_makes_singletons() {
        let g = path3();
        let o = ExactOracle::new(&g).unwrap();
        let c = min_partial(&o, 3, 0.1, 1, 0.1, 0.0).unwrap();
        let mut centers = c.centers.clone();
        centers.sort();
        assert_eq!(centers, vec![0, 1, 2]);
        assert_eq!(c.min_estimate(), 1.0);
    }

    #[test]
    fn path_center_choice() {
        let g = path3();
        let o = ExactOracle::new(&g).unwrap();
        // with alpha = n the middle node covers all three
        let c = min_partial(&o, 1, 0.3, 3, 0.3, 0.0).unwrap();
        assert_eq!(c.centers, vec![1]);
        assert!(c.is_full());
        // a single candidate is the smallest id; listing the middle first picks it
        let labels = ["w", "u", "v"].map(String::from).to_vec();
        let mid_first = UncertainGraph::from_edges(labels, &[(0, 1, 0.5), (0, 2, 0.5)]).unwrap();
        let mo = ExactOracle::new(&mid_first).unwrap();
        let c = min_partial(&mo, 1, 0.3, 1, 0.3, 0.0).unwrap();
        assert_eq!(c.centers, vec![0]);
        assert!(c.is_full());
        // starting from an endpoint leaves the far end uncovered
        let c = min_partial(&o, 1, 0.3, 1, 0.3, 0.0).unwrap();
        assert_eq!(c.centers, vec![0]);
        assert_eq!(c.uncovered(), vec![2]);
    }

    #[test]
    fn rejects_bad_parameters() {
        let g = path3();
        let o = ExactOracle::new(&g).unwrap();
        assert!(min_partial(&o, 0, 0.5, 1, 0.5, 0.0).is_err());
        assert!(min_partial(&o, 4, 0.5, 1, 0.5, 0.0).is_err());
        assert!(min_partial(&o, 1, 0.6, 1, 0.5, 0.0).is_err());
        assert!(min_partial(&o, 1, 0.5, 0, 0.5, 0.0).is_err());
        assert!(min_partial_d(&o, 1, 0.5, 1, 0.5, 1, 2, 0.0).is_err());
    }

    #[test]
    fn depth_limited_star_and_path() {
        let star = UncertainGraph::with_nodes(4, &[(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)]).unwrap();
        let o = ExactOracle::new(&star).unwrap();
        let c = min_partial_d(&o, 1, 0.5, 4, 0.5, 1, 1, 0.0).unwrap();
        assert_eq!(c.centers, vec![0]);
        assert!(c.is_full());

        let path = UncertainGraph::with_nodes(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let o = ExactOracle::new(&path).unwrap();
        for alpha in [1, 3] {
            let c = min_partial_d(&o, 1, 0.5, alpha, 0.5, 1, 1, 0.0).unwrap();
            // whichever center, some node is two hops away
            let center = c.centers[0];
            if center == 1 {
                assert!(c.is_full());
            } else {
                assert_eq!(c.uncovered().len(), 1);
            }
        }
        // the middle node is never chosen with alpha = 1 (node 0 is the sole candidate)
        let c = min_partial_d(&o, 1, 0.5, 1, 0.5, 1, 1, 0.0).unwrap();
        assert_eq!(c.uncovered(), vec![2]);
    }

    #[test]
    fn full_depth_matches_unlimited() {
        let g = UncertainGraph::with_nodes(
            5,
            &[(0, 1, 0.3), (1, 2, 0.9), (2, 3, 0.6), (3, 4, 0.4), (0, 4, 0.6)],
        )
        .unwrap();
        let o = ExactOracle::new(&g).unwrap();
        let a = min_partial(&o, 2, 0.3, 5, 0.5, 0.0).unwrap();
        let b = min_partial_d(&o, 2, 0.3, 5, 0.5, 4, 4, 0.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn completion_rules() {
        // 0-1 certain, 2 isolated from everything
        let g = UncertainGraph::with_nodes(4, &[(0, 1, 1.0), (2, 3, 0.5)]).unwrap();
        let o = ExactOracle::new(&g).unwrap();
        let partial = Clustering {
            centers: vec![0, 3],
            assignment: vec![Some(0), None, None, Some(1)],
            estimates: vec![1.0, 0.0, 0.0, 1.0],
            params: ClusteringParams::default(),
        };
        let full = complete_clustering(&partial, &o);
        assert_eq!(full.assignment, vec![Some(0), Some(0), Some(1), Some(1)]);
        assert_eq!(full.estimates[1], 1.0);
        assert!((full.estimates[2] - 0.5).abs() < 1e-12);
        assert_eq!(complete_clustering(&full, &o), full);

        let g = UncertainGraph::with_nodes(3, &[(0, 1, 1.0)]).unwrap();
        let o = ExactOracle::new(&g).unwrap();
        let partial = Clustering {
            centers: vec![1, 0],
            assignment: vec![Some(1), Some(0), None],
            estimates: vec![1.0, 1.0, 0.0],
            params: ClusteringParams::default(),
        };
        let full = complete_clustering(&partial, &o);
        assert_eq!(full.assignment[2], Some(0));
        assert_eq!(full.estimates[2], 0.0);
    }

    #[test]
    fn seeded_candidates_are_reproducible() {
        let g = UncertainGraph::with_nodes(
            6,
            &[(0, 1, 0.3), (1, 2, 0.9), (2, 3, 0.6), (3, 4, 0.4), (4, 5, 0.6)],
        )
        .unwrap();
        let o = ExactOracle::new(&g).unwrap();
        let mut params = PartialParams::new(2, 0.2, 2, 0.2, 0.0);
        params.candidates = CandidateRule::Seeded(99);
        let a = partial_clustering(&o, &params).unwrap();
        let b = partial_clustering(&o, &params).unwrap();
        assert_eq!(a, b);
    }
}
