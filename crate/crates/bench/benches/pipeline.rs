use std::hint::black_box;

use bvc_core::bigraph::find_bi_induced;
use bvc_core::blockade::extract_pure_blockade;
use bvc_core::engine::clique_or_stable;
use bvc_core::gen::{gen_graph, gen_tournament, GraphFamily, GraphGenParams, TournamentFamily};
use bvc_core::regularity::{ultra_strong_partition, RegularityOptions};
use bvc_core::tournament::largest_transitive;
use bvc_core::vc::{graph_neighbourhoods, vc_dimension};
use bvc_core::{Bigraph, ExponentParams, Rational};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn interval(n: usize) -> bvc_core::Graph {
    gen_graph(GraphFamily::UnitInterval, n, 1, &GraphGenParams::default()).unwrap()
}

fn bench_vc(c: &mut Criterion) {
    let mut group = c.benchmark_group("vc_dimension");
    for n in [16usize, 32, 40] {
        let fam = graph_neighbourhoods(&interval(n));
        group.bench_with_input(BenchmarkId::from_parameter(n), &fam, |b, fam| {
            b.iter(|| vc_dimension(black_box(fam)).unwrap())
        });
    }
    group.finish();
}

fn bench_bi_induced(c: &mut Criterion) {
    let h = Bigraph::shattering_witness(2);
    let mut group = c.benchmark_group("find_bi_induced");
    for n in [64usize, 256] {
        let g = gen_graph(GraphFamily::UniformRandom, n, 2, &GraphGenParams::default()).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| find_bi_induced(black_box(g), &h).unwrap())
        });
    }
    group.finish();
}

fn bench_regularity(c: &mut Criterion) {
    let eps = Rational::ratio(1, 8);
    let opts = RegularityOptions::default();
    let mut group = c.benchmark_group("ultra_strong_partition");
    group.sample_size(10);
    for n in [256usize, 1024] {
        let g = interval(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| ultra_strong_partition(black_box(g), &eps, &opts).unwrap())
        });
    }
    group.finish();
}

fn bench_blockade(c: &mut Criterion) {
    let eps = Rational::ratio(1, 4);
    let params = ExponentParams::default();
    let g = gen_graph(GraphFamily::BlowupNoise, 512, 3, &GraphGenParams::default()).unwrap();
    let mut group = c.benchmark_group("extract_pure_blockade");
    group.sample_size(10);
    group.bench_function("blowup-noise/512", |b| {
        b.iter(|| extract_pure_blockade(black_box(&g), &eps, &params))
    });
    group.finish();
}

fn bench_clique_or_stable(c: &mut Criterion) {
    let h = Bigraph::shattering_witness(2);
    let params = ExponentParams::default();
    let mut group = c.benchmark_group("clique_or_stable");
    group.sample_size(10);
    for n in [256usize, 1024] {
        let g = interval(n);
        group.bench_with_input(BenchmarkId::new("unit-interval", n), &g, |b, g| {
            b.iter(|| clique_or_stable(black_box(g), &h, &params).unwrap())
        });
    }
    group.finish();
}

fn bench_transitive(c: &mut Criterion) {
    let h = Bigraph::shattering_witness(2);
    let params = ExponentParams::default();
    let mut group = c.benchmark_group("largest_transitive");
    group.sample_size(10);
    for n in [64usize, 256] {
        let q = gen_tournament(TournamentFamily::TwoColourable, n, 4).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &q, |b, q| {
            b.iter(|| largest_transitive(black_box(q), &h, &params).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_vc,
    bench_bi_induced,
    bench_regularity,
    bench_blockade,
    bench_clique_or_stable,
    bench_transitive
);
criterion_main!(benches);
