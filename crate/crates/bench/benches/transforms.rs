// cargo bench -p elastica-bench -- --save-baseline main
// cargo bench -p elastica-bench -- --baseline main

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use elastica::matching::dp_solve;
use elastica::samples::{self, random_open_curve};
use elastica::{forward, inverse, match_closed, project_to_closed, ElasticParams, MatchOptions, ProjectionOptions};

fn transform(c: &mut Criterion) {
    let mut group = c.benchmark_group("transform");
    let p = ElasticParams::from_ratio(0.5).unwrap();
    for segments in [64, 512, 4096] {
        let curve = random_open_curve(&mut ChaCha8Rng::seed_from_u64(7), segments, 0.4);
        let q = forward(&curve, p);
        group.bench_with_input(BenchmarkId::new("forward", segments), &curve, |b, curve| {
            b.iter(|| forward(black_box(curve), p))
        });
        group.bench_with_input(BenchmarkId::new("inverse", segments), &q, |b, q| {
            b.iter(|| inverse(black_box(q)).unwrap())
        });
    }
    group.finish();
}

fn dynamic_programming(c: &mut Criterion) {
    let mut group = c.benchmark_group("dp");
    group.sample_size(20);
    let pair = &samples::figure_pairs()[0];
    let p = ElasticParams::srvf();
    let (q1, q2) = (forward(&pair.first, p), forward(&pair.second, p));
    for grid in [32, 64, 128] {
        group.bench_with_input(BenchmarkId::new("grid", grid), &grid, |b, &grid| {
            b.iter(|| dp_solve(black_box(&q1), black_box(&q2), grid, 4).unwrap().cost)
        });
    }
    group.finish();
}

fn closed_curves(c: &mut Criterion) {
    let mut group = c.benchmark_group("closed");
    group.sample_size(10);
    let p = ElasticParams::from_ratio(1.0).unwrap();
    let (a, b) = (samples::flower(32, 5, 0.25), samples::square(32));
    let opts = MatchOptions {
        grid_n: 32,
        fixed_length: true,
        ..MatchOptions::default()
    };
    group.bench_function("match_closed 32 seeds", |bench| {
        bench.iter(|| match_closed(black_box(&a), black_box(&b), p, &opts).unwrap().distance)
    });
    let open = forward(
        &samples::horseshoe(64).normalize(true, true),
        ElasticParams::from_ratio(0.17).unwrap(),
    );
    group.bench_function("project horseshoe", |bench| {
        bench.iter(|| {
            project_to_closed(black_box(&open), ProjectionOptions::default())
                .unwrap()
                .residual
        })
    });
    group.finish();
}

criterion_group!(benches, transform, dynamic_programming, closed_curves);
criterion_main!(benches);
