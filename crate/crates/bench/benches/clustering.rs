use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;
use ucluster_bench::{enumerable, sparse, SPARSE_SHAPES};
use ucluster_core::baselines::gmm;
use ucluster_core::clustering::{acp, mcp, min_partial, DriverConfig};
use ucluster_core::metrics::avpr;
use ucluster_core::{ExactOracle, MonteCarloOracle, WorldSamplePool};

fn world_sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("world_pool");
    for (n, m) in SPARSE_SHAPES {
        let g = sparse(n, m, 1);
        group.throughput(Throughput::Elements(1000));
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| WorldSamplePool::with_size(g, black_box(7), 1000))
        });
    }
    group.finish();
}

fn exact_matrix(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_matrix");
    group.sample_size(10);
    for m in [8, 12, 16] {
        let g = enumerable(10, m, 3);
        group.bench_with_input(BenchmarkId::from_parameter(m), &g, |b, g| {
            b.iter(|| ExactOracle::new(g).unwrap().matrix(None))
        });
    }
    group.finish();
}

fn partial(c: &mut Criterion) {
    let mut group = c.benchmark_group("min_partial");
    for (n, m) in SPARSE_SHAPES {
        let g = sparse(n, m, 2);
        let oracle = MonteCarloOracle::new(WorldSamplePool::with_size(&g, 0, 400));
        // warm the row cache so the timing covers selection and assignment only
        min_partial(&oracle, 10, 0.3, 1, 0.3, 0.1).unwrap();
        group.bench_function(BenchmarkId::from_parameter(n), |b| {
            b.iter(|| min_partial(&oracle, 10, black_box(0.3), 1, 0.3, 0.1).unwrap())
        });
    }
    group.finish();
}

fn drivers(c: &mut Criterion) {
    let mut group = c.benchmark_group("drivers");
    group.sample_size(10);
    let (n, m) = SPARSE_SHAPES[1];
    let g = sparse(n, m, 4);
    let cfg = DriverConfig {
        seed: 42,
        ..DriverConfig::new(20)
    };
    group.bench_function("mcp", |b| b.iter(|| mcp(&g, &cfg).unwrap()));
    group.bench_function("acp", |b| b.iter(|| acp(&g, &cfg).unwrap()));
    group.bench_function("gmm", |b| b.iter(|| gmm(&g, 20).unwrap()));
    group.finish();
}

fn avpr_metrics(c: &mut Criterion) {
    let (n, m) = SPARSE_SHAPES[2];
    let g = sparse(n, m, 5);
    let clustering = gmm(&g, 50).unwrap();
    let pool = WorldSamplePool::with_size(&g, 0, 1000);
    c.bench_function("avpr/1600", |b| b.iter(|| avpr(&clustering, &pool)));
}

criterion_group!(benches, world_sampling, exact_matrix, partial, drivers, avpr_metrics);
criterion_main!(benches);
