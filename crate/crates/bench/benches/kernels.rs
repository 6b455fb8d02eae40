use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nalgebra::DMatrix;
use rand::Rng as _;
use std::hint::black_box;
use transent::alignment::fit_translation_matrix;
use transent::models::{train_bayesian_ridge, RidgeConfig};
use transent::{rng, AlignedPairs, VectorSpace};

fn uniform(rows: usize, cols: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut r = rng::seeded(seed);
    (0..rows)
        .map(|_| (0..cols).map(|_| r.random_range(-1.0..1.0)).collect())
        .collect()
}

fn matrix(rows: &[Vec<f64>]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j])
}

fn nearest_neighbors(c: &mut Criterion) {
    let mut group = c.benchmark_group("nearest_neighbors");
    for words in [10_000, 50_000] {
        let rows = uniform(words, 300, 1);
        let vocab = (0..words).map(|i| format!("w{i}")).collect();
        let space = VectorSpace::new("en", vocab, rows).unwrap();
        let query = uniform(1, 300, 2).pop().unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(words), &space, |b, space| {
            b.iter(|| space.nearest_neighbors(black_box(&query), 5).unwrap())
        });
    }
    group.finish();
}

fn fit(c: &mut Criterion) {
    let mut group = c.benchmark_group("fit_translation_matrix");
    group.sample_size(10);
    for (pairs, dim) in [(1000, 100), (5000, 300)] {
        let x = matrix(&uniform(pairs, dim, 3));
        let z = matrix(&uniform(pairs, dim, 4));
        let aligned = AlignedPairs {
            source: x,
            target: z,
            tokens: (0..pairs)
                .map(|i| (format!("s{i}"), format!("t{i}")))
                .collect(),
            source_language: "es".into(),
            target_language: "en".into(),
        };
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{pairs}x{dim}")),
            &aligned,
            |b, aligned| b.iter(|| fit_translation_matrix(aligned).unwrap()),
        );
    }
    group.finish();
}

fn ridge(c: &mut Criterion) {
    let mut group = c.benchmark_group("train_bayesian_ridge");
    group.sample_size(10);
    let features = uniform(1000, 300, 5);
    let mut r = rng::seeded(6);
    let targets: Vec<f64> = (0..1000).map(|_| r.random_range(1.0..9.0)).collect();
    group.bench_function("1000x300", |b| {
        b.iter(|| train_bayesian_ridge(&features, &targets, &RidgeConfig::default()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, nearest_neighbors, fit, ridge);
criterion_main!(benches);
