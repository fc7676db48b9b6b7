//! Sequential vs data-parallel timings for the sweep-shaped workloads.
//! Run with `cargo bench -p dembed-core`.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use dembed_core::diamond::{materialize_diamond, DiamondParams};
use dembed_core::embedding::SourceMetric;
use dembed_core::exec::{map_collect, Parallelism};
use dembed_core::metric::bfs_distances;
use dembed_core::observations::{sweep_component_diameters, sweep_neighborhoods};
use dembed_core::search::{exhaustive_search, local_search, SearchConfig};
use dembed_core::tree::TreeSpec;

fn modes() -> Vec<(Parallelism, &'static str)> {
    #[allow(unused_mut)]
    let mut m = vec![(Parallelism::Sequential, "sequential")];
    #[cfg(feature = "parallel")]
    m.push((Parallelism::Rayon, "rayon"));
    m
}

fn bfs_all_pairs(c: &mut Criterion) {
    let params = DiamondParams::finite(4, 2).unwrap();
    let g = materialize_diamond(&params, 10_000).unwrap();
    let n = g.vertex_count() as u32;
    let mut group = c.benchmark_group("bfs_all_pairs");
    for (par, label) in modes() {
        group.bench_with_input(BenchmarkId::new("d4_k2", label), &par, |b, &par| {
            b.iter(|| {
                let sums = map_collect(par, (0..n).collect(), |s| {
                    bfs_distances(&g, s).iter().sum::<u64>()
                });
                black_box(sums)
            })
        });
    }
    group.finish();
}

fn exhaustive_minimum(c: &mut Criterion) {
    let source = SourceMetric::tree(TreeSpec::new(2));
    let target = DiamondParams::finite(2, 2).unwrap();
    let mut group = c.benchmark_group("exhaustive_minimum");
    group.sample_size(20);
    for (par, label) in modes() {
        let cfg = SearchConfig {
            parallelism: par,
            ..SearchConfig::default()
        };
        group.bench_function(BenchmarkId::new("t2_into_d2_k2", label), |b| {
            b.iter(|| black_box(exhaustive_search(&source, &target, &cfg).unwrap()))
        });
    }
    group.finish();
}

fn local_minimum(c: &mut Criterion) {
    let source = SourceMetric::tree(TreeSpec::new(3));
    let target = DiamondParams::finite(3, 2).unwrap();
    let mut group = c.benchmark_group("local_minimum");
    group.sample_size(20);
    for (par, label) in modes() {
        let cfg = SearchConfig {
            parallelism: par,
            ..SearchConfig::default()
        };
        group.bench_function(BenchmarkId::new("t3_into_d3_k2", label), |b| {
            b.iter(|| black_box(local_search(&source, &target, &cfg).unwrap()))
        });
    }
    group.finish();
}

fn structure_sweeps(c: &mut Criterion) {
    let params = DiamondParams::finite(4, 2).unwrap();
    let g = materialize_diamond(&params, 10_000).unwrap();
    let mut group = c.benchmark_group("structure_sweeps");
    group.sample_size(20);
    for (par, label) in modes() {
        group.bench_with_input(
            BenchmarkId::new("neighborhoods_d4_k2", label),
            &par,
            |b, &par| b.iter(|| black_box(sweep_neighborhoods(&g, par).unwrap())),
        );
        group.bench_with_input(
            BenchmarkId::new("components_d4_k2", label),
            &par,
            |b, &par| b.iter(|| black_box(sweep_component_diameters(&g, par).unwrap())),
        );
    }
    group.finish();
}

criterion_group!(
    benches,
    bfs_all_pairs,
    exhaustive_minimum,
    local_minimum,
    structure_sweeps
);
criterion_main!(benches);
