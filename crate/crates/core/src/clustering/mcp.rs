use super::driver::{stamp, Estimator, Step};
use super::{singleton_clustering, ClusteringOutcome, ClusteringParams, DriverConfig, Objective, RunStats};
use crate::error::Result;
use crate::graph::UncertainGraph;

/// Minimum-connection-probability clustering.
///
/// Walks the guess schedule downward, running min-partial at each guess until
/// one covers every node, then bisects between that guess and the previous one.
/// With `cfg.depth` set, coverage uses d-connection probabilities.
pub fn mcp(graph: &UncertainGraph, cfg: &DriverConfig) -> Result<ClusteringOutcome> {
    let n = graph.n();
    let schedule = cfg.validate(n)?;
    if cfg.k == n {
        return Ok(trivial(n, cfg));
    }
    let mut estimator = Estimator::new(graph, cfg)?;
    let step = Step::new(cfg, n, 1, |d| d);
    let mut stats = RunStats::default();
    let mut previous: Option<f64> = None;

    for (index, &q) in schedule.guesses().iter().enumerate() {
        estimator.prepare(cfg, Objective::Min, index, q)?;
        stats.guesses += 1;
        stats.iterations += 1;
        let candidate = step.run(estimator.oracle(), q, q)?;
        if !candidate.is_full() {
            previous = Some(q);
            continue;
        }
        let (final_q, mut clustering) = match previous {
            None => (q, candidate),
            Some(hi) => {
                let oracle = estimator.oracle();
                let (lo, best, probes) = schedule.refine(q, hi, candidate, |mid| {
                    let c = step.run(oracle, mid, mid)?;
                    Ok(c.is_full().then_some(c))
                })?;
                stats.iterations += probes;
                (lo, best)
            }
        };
        stats.final_q = Some(final_q);
        stats.samples = estimator.samples();
        stamp(&mut clustering, cfg, stats.samples);
        return Ok(ClusteringOutcome::Found { clustering, stats });
    }
    stats.samples = estimator.samples();
    Ok(ClusteringOutcome::NoClustering { stats })
}

pub(super) fn trivial(n: usize, cfg: &DriverConfig) -> ClusteringOutcome {
    let mut clustering = singleton_clustering(
        n,
        ClusteringParams {
            q: Some(1.0),
            epsilon: Some(cfg.epsilon),
            ..Default::default()
        },
    );
    stamp(&mut clustering, cfg, None);
    ClusteringOutcome::Found {
        clustering,
        stats: RunStats {
            final_q: Some(1.0),
            phi_best: Some(1.0),
            ..Default::default()
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::{brute_force_optimum, EstimatorKind, SampleMode};

    fn path3() -> UncertainGraph {
        UncertainGraph::with_nodes(3, &[(0, 1, 0.5), (1, 2, 0.5)]).unwrap()
    }

    /// The path u–w–v with the middle node listed first, so w gets id 0.
    fn path3_middle_first() -> UncertainGraph {
        let labels = ["w", "u", "v"].map(String::from).to_vec();
        UncertainGraph::from_edges(labels, &[(0, 1, 0.5), (0, 2, 0.5)]).unwrap()
    }

    #[test]
    fn deterministic_components_need_one_guess() {
        let g = UncertainGraph::with_nodes(
            5,
            &[(0, 1, 1.0), (1, 2, 1.0), (3, 4, 1.0)],
        )
        .unwrap();
        for cfg in [DriverConfig::exact(2), DriverConfig::new(2)] {
            let out = mcp(&g, &cfg).unwrap();
            assert_eq!(out.stats().guesses, 1);
            let c = out.clustering().unwrap();
            assert!(c.is_full());
            assert_eq!(c.min_estimate(), 1.0);
        }
    }

    #[test]
    fn path_returns_middle_center() {
        let g = path3_middle_first();
        let out = mcp(&g, &DriverConfig::exact(1)).unwrap();
        let c = out.clustering().unwrap();
        assert_eq!(c.centers, vec![0]);
        assert!((c.min_estimate() - 0.5).abs() < 1e-12);
        let (opt, _) = brute_force_optimum(&g, 1, Objective::Min, None).unwrap();
        assert!((opt - 0.5).abs() < 1e-12);
        assert!(c.min_estimate() >= opt * opt / 1.1);
    }

    #[test]
    fn path_from_endpoint_still_meets_bound() {
        // the single candidate is an endpoint, which only reaches the far end w.p. 0.25
        let g = path3();
        let out = mcp(&g, &DriverConfig::exact(1)).unwrap();
        let c = out.clustering().unwrap();
        assert_eq!(c.centers, vec![0]);
        assert!((c.min_estimate() - 0.25).abs() < 1e-12);
        assert!(c.min_estimate() >= 0.25 / 1.1);
        let q = out.stats().final_q.unwrap();
        assert!(q <= 0.25 + 1e-12 && q * 1.1 >= 0.25);
    }

    #[test]
    fn too_many_components_fail() {
        let g = UncertainGraph::with_nodes(3, &[(0, 1, 1.0)]).unwrap();
        let out = mcp(&g, &DriverConfig::exact(1)).unwrap();
        assert!(out.clustering().is_none());
        assert_eq!(out.stats().final_q, None);
        let out = mcp(&g, &DriverConfig::new(1)).unwrap();
        assert!(matches!(out, ClusteringOutcome::NoClustering { .. }));
    }

    #[test]
    fn k_equals_n_is_trivial() {
        let g = path3();
        let c = mcp(&g, &DriverConfig::new(3)).unwrap().into_clustering().unwrap();
        assert_eq!(c.centers, vec![0, 1, 2]);
        assert_eq!(c.min_estimate(), 1.0);
    }

    #[test]
    fn final_q_is_bracketed() {
        // a graph whose optimum sits between two schedule guesses
        let g = UncertainGraph::with_nodes(
            5,
            &[(0, 1, 0.7), (1, 2, 0.75), (2, 3, 0.65), (3, 4, 0.8), (1, 3, 0.3)],
        )
        .unwrap();
        let cfg = DriverConfig::exact(2);
        let out = mcp(&g, &cfg).unwrap();
        let c = out.clustering().unwrap();
        let q = out.stats().final_q.unwrap();
        assert!(c.min_estimate() >= q - 1e-12);
        assert!((1e-4..=1.0).contains(&q));
    }

    #[test]
    fn depth_n_minus_one_matches_unlimited() {
        let g = UncertainGraph::with_nodes(
            5,
            &[(0, 1, 0.7), (1, 2, 0.75), (2, 3, 0.65), (3, 4, 0.8), (1, 3, 0.3)],
        )
        .unwrap();
        for estimator in [EstimatorKind::Exact, EstimatorKind::MonteCarlo] {
            let base = DriverConfig {
                estimator,
                seed: 11,
                ..DriverConfig::new(2)
            };
            let deep = DriverConfig { depth: Some(4), ..base };
            assert_eq!(mcp(&g, &base).unwrap(), mcp(&g, &deep).unwrap());
        }
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let g = path3();
        let cfg = DriverConfig {
            seed: 5,
            sample_mode: SampleMode::Fixed(500),
            ..DriverConfig::new(1)
        };
        assert_eq!(mcp(&g, &cfg).unwrap(), mcp(&g, &cfg).unwrap());
    }
}
