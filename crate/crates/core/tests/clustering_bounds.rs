//! Approximation guarantees checked against exhaustive optima on small graphs.

use ucluster_core::clustering::{
    acp, brute_force_optimum, mcp, min_partial, min_partial_d, min_uncovered, partial_clustering,
    AcpVariant, DriverConfig, Objective, PartialParams, ScheduleKind,
};
use ucluster_core::metrics::{avg_prob, min_prob};
use ucluster_core::oracle::{harmonic, ConnectionOracle, ExactOracle};
use ucluster_core::synth::small_connected;
use ucluster_core::UncertainGraph;

const TOL: f64 = 1e-12;

fn corpus(count: u64, max_n: usize) -> Vec<UncertainGraph> {
    (0..count)
        .map(|i| small_connected(3 + (i as usize % (max_n - 2)), 12, 9000 + i).unwrap())
        .collect()
}

fn ks(n: usize) -> impl Iterator<Item = usize> {
    (1..=3).filter(move |&k| k < n)
}

#[test]
fn covered_nodes_reach_their_center() {
    for g in corpus(30, 8) {
        let o = ExactOracle::new(&g).unwrap();
        for k in ks(g.n()) {
            for q in [0.9, 0.5, 0.2] {
                let c = min_partial(&o, k, q, 1, q, 0.1).unwrap();
                for u in 0..g.n() {
                    if let Some(center) = c.center_of(u) {
                        assert!(o.prob(u, center, None) >= q - TOL);
                    }
                }
                assert!(c.centers.iter().enumerate().all(|(i, &x)| c.assignment[x] == Some(i)));
            }
        }
    }
}

#[test]
fn squared_optimum_threshold_covers_everything() {
    for g in corpus(40, 8) {
        let o = ExactOracle::new(&g).unwrap();
        for k in ks(g.n()) {
            let (opt, _) = brute_force_optimum(&g, k, Objective::Min, None).unwrap();
            let q = opt * opt;
            if q <= 0.0 {
                continue;
            }
            for alpha in [1, g.n()] {
                let c = min_partial(&o, k, q, alpha, q, 0.1).unwrap();
                assert!(c.is_full(), "k={k} alpha={alpha} q={q}");
            }
        }
    }
}

#[test]
fn mcp_meets_squared_bound() {
    for g in corpus(40, 8) {
        for k in ks(g.n()) {
            let (opt, _) = brute_force_optimum(&g, k, Objective::Min, None).unwrap();
            let cfg = DriverConfig::exact(k);
            if opt * opt <= cfg.p_low {
                continue;
            }
            let out = mcp(&g, &cfg).unwrap();
            let c = out.clustering().expect("a connected graph always clusters");
            let o = ExactOracle::new(&g).unwrap();
            let value = min_prob(c, &o);
            assert!(value >= opt * opt / (1.0 + cfg.gamma) - TOL, "{value} vs {opt}");
            assert!(value <= opt + TOL);
        }
    }
}

#[test]
fn acp_meets_cubic_bound() {
    for g in corpus(40, 8) {
        let n = g.n();
        let o = ExactOracle::new(&g).unwrap();
        for k in ks(n) {
            let (opt, _) = brute_force_optimum(&g, k, Objective::Avg, None).unwrap();
            for (variant, schedule) in [
                (AcpVariant::Practical, ScheduleKind::Doubling),
                (AcpVariant::Theory, ScheduleKind::Geometric),
            ] {
                let cfg = DriverConfig {
                    acp_variant: variant,
                    schedule,
                    ..DriverConfig::exact(k)
                };
                let out = acp(&g, &cfg).unwrap();
                let c = out.clustering().unwrap();
                let value = avg_prob(c, &o);
                let bound = (opt / ((1.0 + cfg.gamma) * harmonic(n).unwrap())).powi(3);
                assert!(value >= bound - TOL);
                assert!(value >= out.stats().phi_best.unwrap() - TOL);
                assert!(value <= opt + TOL);
            }
        }
    }
}

#[test]
fn cubic_threshold_leaves_at_most_t_q_uncovered() {
    for g in corpus(30, 7) {
        let n = g.n();
        let o = ExactOracle::new(&g).unwrap();
        for k in ks(n) {
            for q in [1.0, 0.9, 0.7, 0.5, 0.3, 0.1] {
                let params = PartialParams::new(k, q * q * q, n, q, 0.0);
                let c = partial_clustering(&o, &params).unwrap();
                let t_q = min_uncovered(&g, k, q, None).unwrap();
                assert!(c.uncovered().len() <= t_q, "k={k} q={q}");
            }
        }
    }
}

#[test]
fn full_depth_reproduces_unlimited_runs() {
    for (i, g) in corpus(12, 8).into_iter().enumerate() {
        let n = g.n();
        let o = ExactOracle::new(&g).unwrap();
        for k in ks(n) {
            let a = min_partial(&o, k, 0.4, n, 0.6, 0.1).unwrap();
            let b = min_partial_d(&o, k, 0.4, n, 0.6, n - 1, n - 1, 0.1).unwrap();
            assert_eq!(a, b);
            let cfg = DriverConfig {
                seed: i as u64,
                ..DriverConfig::new(k)
            };
            let deep = DriverConfig {
                depth: Some(n - 1),
                ..cfg
            };
            assert_eq!(mcp(&g, &cfg).unwrap(), mcp(&g, &deep).unwrap());
            assert_eq!(acp(&g, &cfg).unwrap(), acp(&g, &deep).unwrap());
        }
    }
}

#[test]
fn depth_limited_mcp_meets_half_depth_bound() {
    for g in corpus(20, 8) {
        let n = g.n();
        let o = ExactOracle::new(&g).unwrap();
        for k in ks(n) {
            for d in 2..n - 1 {
                let (opt_d, _) = brute_force_optimum(&g, k, Objective::Min, Some(d)).unwrap();
                let (opt_half, _) = brute_force_optimum(&g, k, Objective::Min, Some(d / 2)).unwrap();
                let cfg = DriverConfig {
                    depth: Some(d),
                    ..DriverConfig::exact(k)
                };
                let out = mcp(&g, &cfg).unwrap();
                let Some(c) = out.clustering() else {
                    assert!(opt_half * opt_half <= cfg.p_low);
                    continue;
                };
                assert_eq!(c.params.depth, Some(d));
                let value = min_prob(c, &o);
                assert!(value <= opt_d + TOL);
                if opt_half * opt_half > cfg.p_low {
                    assert!(value >= opt_half * opt_half / (1.0 + cfg.gamma) - TOL);
                }
            }
        }
    }
}

#[test]
fn depth_limited_acp_meets_third_depth_bound() {
    for g in corpus(20, 8) {
        let n = g.n();
        let o = ExactOracle::new(&g).unwrap();
        for k in ks(n) {
            for d in 3..n - 1 {
                let (opt_third, _) = brute_force_optimum(&g, k, Objective::Avg, Some(d / 3)).unwrap();
                let cfg = DriverConfig {
                    depth: Some(d),
                    acp_variant: AcpVariant::Theory,
                    schedule: ScheduleKind::Geometric,
                    ..DriverConfig::exact(k)
                };
                let c = acp(&g, &cfg).unwrap().into_clustering().unwrap();
                let bound = (opt_third / ((1.0 + cfg.gamma) * harmonic(n).unwrap())).powi(3);
                assert!(avg_prob(&c, &o) >= bound - TOL);
            }
        }
    }
}
