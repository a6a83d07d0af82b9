//! Benchmarks of the enumeration, moment and simulation kernels.

use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use radproj_core::bounds::SharpBoundTable;
use radproj_core::moments::{
    chaos_extreme_moment_f64, ChaosMomentTable, DistortionMomentTable,
};
use radproj_core::oracle::{chaos_law, distortion_law};
use radproj_core::projections::{flat_unit_vector, simulate_distortions, Scheme};
use radproj_core::WeightProfile;
use radproj_core::Rational;

fn flat_profile(k: usize) -> WeightProfile {
    let w = Rational::new(1.into(), (k as i64).into());
    WeightProfile::from_weights(vec![w; k]).unwrap()
}

fn bench_chaos_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("chaos_law");
    for k in [10usize, 14, 18] {
        let p = flat_profile(k);
        group.bench_with_input(BenchmarkId::from_parameter(k), &p, |b, p| {
            b.iter(|| chaos_law(black_box(p)).unwrap())
        });
    }
    group.finish();
}

fn bench_distortion_convolution(c: &mut Criterion) {
    let p = flat_profile(8);
    c.bench_function("distortion_law_k8_m3", |b| {
        b.iter(|| distortion_law(black_box(&p), 3).unwrap())
    });
}

fn bench_exact_moment_tables(c: &mut Criterion) {
    let mut group = c.benchmark_group("chaos_moment_table_q32");
    group.sample_size(10);
    for k in [64u32, 256, 1024] {
        group.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            b.iter(|| ChaosMomentTable::new(black_box(k), 32))
        });
    }
    group.finish();

    c.bench_function("distortion_moment_table_m100_k256_q32", |b| {
        b.iter(|| DistortionMomentTable::new(100, black_box(256), 32))
    });

    c.bench_function("sharp_bound_table_m100_k1024_q32", |b| {
        b.iter(|| SharpBoundTable::new(100, black_box(1024), 32))
    });
}

fn bench_fast_path(c: &mut Criterion) {
    c.bench_function("chaos_moment_f64_k1e5_q32", |b| {
        b.iter(|| chaos_extreme_moment_f64(black_box(100_000), 32))
    });
}

fn bench_monte_carlo(c: &mut Criterion) {
    let x = flat_unit_vector(50, 50).unwrap();
    let mut group = c.benchmark_group("simulate_m10_k50_t10000");
    group.sample_size(10);
    group.measurement_time(Duration::from_secs(10));
    group.bench_function("dense", |b| {
        b.iter(|| {
            simulate_distortions(black_box(&x), 10, Scheme::DenseRademacher, 1.0, 10_000, 1)
                .unwrap()
        })
    });
    group.bench_function("sparse_p0.1", |b| {
        b.iter(|| {
            simulate_distortions(black_box(&x), 10, Scheme::SparseRademacher, 0.1, 10_000, 1)
                .unwrap()
        })
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_chaos_enumeration,
    bench_distortion_convolution,
    bench_exact_moment_tables,
    bench_fast_path,
    bench_monte_carlo
);
criterion_main!(benches);
