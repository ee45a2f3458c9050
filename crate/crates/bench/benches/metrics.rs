use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use folksograph_core::harness::gen_synthetic_corpus;
use folksograph_core::netmetrics::TagNetwork;
use folksograph_core::nullmodels::{gen_ba, gen_diffeo};
use folksograph_core::{
    Chunker, ExpositionWeighting, FolksodrivenTuple, NullModelConfig, SyntheticCorpusConfig, TableSimilarity,
};

fn network(resources: usize) -> TagNetwork {
    let sim = TableSimilarity::bundled();
    let records = gen_synthetic_corpus(&SyntheticCorpusConfig::new(resources, 12, 0.9, 1)).unwrap();
    let fd = FolksodrivenTuple::from_corpus(&records, &Chunker::default(), &sim).unwrap();
    TagNetwork::from_fd(&fd, &sim)
}

fn graph_metrics(c: &mut Criterion) {
    let g = ExpositionWeighting::default();
    let mut group = c.benchmark_group("graph");
    for resources in [50, 200, 500] {
        let net = network(resources);
        let graph = net.to_graph(&g);
        let n = graph.len();
        group.bench_with_input(BenchmarkId::new("cluster_coefs", n), &graph, |b, graph| {
            b.iter(|| black_box(graph.cluster_coefs()))
        });
        let sources: Vec<usize> = (0..n).step_by((n / 100).max(1)).collect();
        group.bench_with_input(BenchmarkId::new("path_length_100_sources", n), &graph, |b, graph| {
            b.iter(|| black_box(graph.char_path_length_from(&sources, 0.05).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("diffeo", n), &net, |b, net| {
            b.iter(|| black_box(gen_diffeo(net, &g, 7).unwrap()))
        });
    }
    group.finish();
}

fn ba_growth(c: &mut Criterion) {
    let net = network(20);
    let mut group = c.benchmark_group("ba");
    group.sample_size(20);
    for n in [2_000, 20_000] {
        let cfg = NullModelConfig {
            seed: 3,
            n,
            m: 3,
            lambda: 1.0,
            synthetic: true,
        };
        group.bench_with_input(BenchmarkId::from_parameter(n), &cfg, |b, cfg| {
            b.iter(|| black_box(gen_ba(cfg, &net).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, graph_metrics, ba_growth);
criterion_main!(benches);
