use super::driver::{stamp, Estimator, Step};
use super::mcp::trivial;
use super::{complete_clustering, AcpVariant, Clustering, ClusteringOutcome, DriverConfig, Objective, RunStats};
use crate::error::Result;
use crate::graph::UncertainGraph;
use crate::oracle::ConnectionOracle;

struct Best {
    phi: f64,
    q: f64,
    clustering: Clustering,
}

impl Best {
    fn offer(&mut self, partial: &Clustering, q: f64, oracle: &dyn ConnectionOracle) {
        let phi = partial.phi();
        if phi >= self.phi {
            self.phi = phi;
            self.q = q;
            self.clustering = complete_clustering(partial, oracle);
        }
    }
}

/// Average-connection-probability clustering.
///
/// Tracks `φ`, the mean probability of a partial clustering with uncovered
/// nodes counted as 0, and keeps the completion of the best partial seen.
/// Guesses keep dropping while the admission threshold could still beat the
/// best `φ`; the first full cover triggers a bisection against the previous
/// guess and ends the search.
pub fn acp(graph: &UncertainGraph, cfg: &DriverConfig) -> Result<ClusteringOutcome> {
    let n = graph.n();
    let schedule = cfg.validate(n)?;
    if cfg.k == n {
        return Ok(trivial(n, cfg));
    }
    let (alpha, cubed) = match cfg.acp_variant {
        AcpVariant::Practical => (1, false),
        AcpVariant::Theory => (n, true),
    };
    let threshold = |q: f64| if cubed { q * q * q } else { q };
    let step = Step::new(cfg, n, alpha, |d| d / 3);
    let mut estimator = Estimator::new(graph, cfg)?;
    let guesses = schedule.guesses();
    let mut stats = RunStats {
        guesses: 1,
        iterations: 1,
        ..Default::default()
    };

    estimator.prepare(cfg, Objective::Avg, 0, 1.0)?;
    let first = step.run(estimator.oracle(), threshold(1.0), 1.0)?;
    let mut best = Best {
        phi: first.phi(),
        q: 1.0,
        clustering: complete_clustering(&first, estimator.oracle()),
    };

    if !first.is_full() {
        let mut previous = 1.0;
        for (index, &q) in guesses.iter().enumerate().skip(1) {
            if threshold(q) < best.phi {
                break;
            }
            estimator.prepare(cfg, Objective::Avg, index, q)?;
            stats.guesses += 1;
            stats.iterations += 1;
            let oracle = estimator.oracle();
            let partial = step.run(oracle, threshold(q), q)?;
            best.offer(&partial, q, oracle);
            if partial.is_full() {
                let (_, _, probes) = schedule.refine(q, previous, (), |mid| {
                    let c = step.run(oracle, threshold(mid), mid)?;
                    best.offer(&c, mid, oracle);
                    Ok(c.is_full().then_some(()))
                })?;
                stats.iterations += probes;
                break;
            }
            previous = q;
        }
    }

    stats.final_q = Some(best.q);
    stats.phi_best = Some(best.phi);
    stats.samples = estimator.samples();
    let mut clustering = best.clustering;
    stamp(&mut clustering, cfg, stats.samples);
    Ok(ClusteringOutcome::Found { clustering, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::brute_force_optimum;

    fn path3() -> UncertainGraph {
        UncertainGraph::with_nodes(3, &[(0, 1, 0.5), (1, 2, 0.5)]).unwrap()
    }

    /// The path u–w–v with the middle node listed first, so w gets id 0.
    fn path3_middle_first() -> UncertainGraph {
        let labels = ["w", "u", "v"].map(String::from).to_vec();
        UncertainGraph::from_edges(labels, &[(0, 1, 0.5), (0, 2, 0.5)]).unwrap()
    }

    #[test]
    fn certain_components_average_one() {
        let g = UncertainGraph::with_nodes(5, &[(0, 1, 1.0), (1, 2, 1.0), (3, 4, 1.0)]).unwrap();
        for cfg in [DriverConfig::exact(2), DriverConfig::new(2)] {
            let c = acp(&g, &cfg).unwrap().into_clustering().unwrap();
            assert_eq!(c.phi(), 1.0);
        }
    }

    #[test]
    fn k_equals_n() {
        let c = acp(&path3(), &DriverConfig::new(3)).unwrap().into_clustering().unwrap();
        assert_eq!(c.phi(), 1.0);
    }

    #[test]
    fn path_reaches_optimum() {
        let g = path3_middle_first();
        for variant in [AcpVariant::Practical, AcpVariant::Theory] {
            let cfg = DriverConfig {
                acp_variant: variant,
                ..DriverConfig::exact(1)
            };
            let out = acp(&g, &cfg).unwrap();
            let c = out.clustering().unwrap();
            assert_eq!(c.centers, vec![0], "{variant:?}");
            assert!((c.phi() - 2.0 / 3.0).abs() < 1e-12);
            let (opt, _) = brute_force_optimum(&g, 1, Objective::Avg, None).unwrap();
            assert!((opt - 2.0 / 3.0).abs() < 1e-12);
            assert!(c.phi() >= out.stats().phi_best.unwrap() - 1e-12);
        }
    }

    #[test]
    fn theory_variant_meets_bound_from_endpoint() {
        let g = path3();
        let cfg = DriverConfig {
            acp_variant: AcpVariant::Theory,
            ..DriverConfig::exact(1)
        };
        let c = acp(&g, &cfg).unwrap().into_clustering().unwrap();
        let (opt, _) = brute_force_optimum(&g, 1, Objective::Avg, None).unwrap();
        let h3 = 1.0 + 0.5 + 1.0 / 3.0;
        assert!(c.phi() >= (opt / (1.1 * h3)).powi(3));
        assert!(c.phi() <= opt + 1e-12);
    }

    #[test]
    fn always_terminates_on_disconnected_graphs() {
        let g = UncertainGraph::with_nodes(4, &[(0, 1, 1.0)]).unwrap();
        let out = acp(&g, &DriverConfig::new(1)).unwrap();
        let c = out.clustering().unwrap();
        assert!(c.is_full());
        assert!((c.phi() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn depth_n_minus_one_matches_unlimited() {
        let g = UncertainGraph::with_nodes(
            6,
            &[(0, 1, 0.7), (1, 2, 0.75), (2, 3, 0.65), (3, 4, 0.8), (1, 3, 0.3), (4, 5, 0.4)],
        )
        .unwrap();
        for variant in [AcpVariant::Practical, AcpVariant::Theory] {
            let base = DriverConfig {
                acp_variant: variant,
                seed: 3,
                ..DriverConfig::new(2)
            };
            let deep = DriverConfig { depth: Some(5), ..base };
            assert_eq!(acp(&g, &base).unwrap(), acp(&g, &deep).unwrap());
        }
    }
}
