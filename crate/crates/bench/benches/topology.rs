use std::hint::black_box;

use bvh_core::comms::broadcast_schedule;
use bvh_core::metrics::{diameter, AllPairsSummary};
use bvh_core::paths::max_disjoint_paths;
use bvh_core::{build_graph, Family, TopologySpec};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn bench_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_graph");
    for n in [3u32, 4, 5, 6] {
        let spec = TopologySpec::new(Family::Bvh, n).unwrap();
        group.bench_with_input(BenchmarkId::new("bvh", n), &spec, |b, spec| {
            b.iter(|| build_graph(black_box(spec)).unwrap())
        });
    }
    group.finish();
}

fn bench_all_pairs(c: &mut Criterion) {
    let mut group = c.benchmark_group("all_pairs_bfs");
    group.sample_size(10);
    for n in [3u32, 4, 5] {
        let graph = build_graph(&TopologySpec::new(Family::Bvh, n).unwrap()).unwrap();
        group.bench_with_input(BenchmarkId::new("bvh_diameter", n), &graph, |b, g| {
            b.iter(|| diameter(black_box(g)))
        });
        group.bench_with_input(BenchmarkId::new("bvh_summary", n), &graph, |b, g| {
            b.iter(|| AllPairsSummary::compute(black_box(g)).average_distance())
        });
    }
    group.finish();
}

fn bench_paths(c: &mut Criterion) {
    let mut group = c.benchmark_group("disjoint_paths");
    for n in [2u32, 3, 4, 6] {
        let graph = build_graph(&TopologySpec::new(Family::Bvh, n).unwrap()).unwrap();
        let source = graph.label(0);
        let target = graph.label(graph.node_count() - 1);
        group.bench_with_input(BenchmarkId::new("bvh", n), &graph, |b, g| {
            b.iter(|| max_disjoint_paths(g, black_box(&source), black_box(&target)).unwrap())
        });
    }
    group.finish();
}

fn bench_broadcast(c: &mut Criterion) {
    let graph = build_graph(&TopologySpec::new(Family::Bvh, 5).unwrap()).unwrap();
    let root = graph.spec().origin();
    c.bench_function("broadcast_bvh_5", |b| {
        b.iter(|| broadcast_schedule(&graph, black_box(&root)).unwrap())
    });
}

criterion_group!(
    benches,
    bench_build,
    bench_all_pairs,
    bench_paths,
    bench_broadcast
);
criterion_main!(benches);
