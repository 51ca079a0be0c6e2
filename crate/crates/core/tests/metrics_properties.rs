use proptest::prelude::*;
use ucluster_core::baselines::gmm;
use ucluster_core::metrics::{avg_prob, avpr, avpr_counts_grouped, avpr_counts_naive, min_prob};
use ucluster_core::synth::{random_graph, unit_probability};
use ucluster_core::{ExactOracle, MonteCarloOracle, WorldSamplePool};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn grouped_counts_match_naive(n in 2usize..=50, density in 0.0f64..3.0, k in 1usize..8, seed in any::<u64>()) {
        let m = ((n as f64 * density) as usize).min(n * (n - 1) / 2);
        let g = random_graph(n, m, false, seed, unit_probability).unwrap();
        let c = gmm(&g, k.min(n)).unwrap();
        let pool = WorldSamplePool::with_size(&g, seed, 40);
        for w in pool.worlds() {
            prop_assert_eq!(avpr_counts_grouped(&c, &w.labels), avpr_counts_naive(&c, &w.labels));
        }
        let (inner, outer) = avpr(&c, &pool);
        prop_assert_eq!((inner, outer), avpr(&c, &pool));
        for v in [inner, outer].into_iter().flatten() {
            prop_assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn average_dominates_minimum(n in 3usize..=8, k in 1usize..3, seed in any::<u64>()) {
        let g = random_graph(n, (n + 1).min(n * (n - 1) / 2), true, seed, unit_probability).unwrap();
        let c = gmm(&g, k).unwrap();
        let exact = ExactOracle::new(&g).unwrap();
        prop_assert!(avg_prob(&c, &exact) >= min_prob(&c, &exact));
        let mc = MonteCarloOracle::new(WorldSamplePool::with_size(&g, seed, 200));
        prop_assert!(avg_prob(&c, &mc) >= min_prob(&c, &mc));
    }
}
