use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;
use trop_core::generate::{random_irreducible, WeightRange};
use trop_core::graph::profile;
use trop_core::schemes::{build, SchemeChoice};
use trop_core::transient::TransientLab;
use trop_core::TropMatrix;

fn instances(d: usize, n: usize) -> Vec<TropMatrix> {
    let range = WeightRange::ints(-5, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(0xBE7C);
    (0..n)
        .map(|_| random_irreducible(d, 0.55, &range, &mut rng))
        .collect()
}

fn bench_mat_mul(c: &mut Criterion) {
    let mut group = c.benchmark_group("mat_mul");
    for d in [4usize, 8, 16] {
        let a = &instances(d, 1)[0];
        group.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, _| {
            b.iter(|| black_box(a).mul(black_box(a)).unwrap())
        });
    }
    group.finish();
}

fn bench_profile(c: &mut Criterion) {
    let mut group = c.benchmark_group("profile");
    for d in [6usize, 12] {
        let a = &instances(d, 1)[0];
        group.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, _| {
            b.iter(|| profile(black_box(a)).unwrap())
        });
    }
    group.finish();
}

fn bench_csr(c: &mut Criterion) {
    let a = &instances(8, 1)[0];
    c.bench_function("csr_of d=8", |b| {
        b.iter(|| trop_core::csr::csr_of(black_box(a)).unwrap())
    });
}

fn bench_schemes(c: &mut Criterion) {
    let a = &instances(8, 1)[0];
    let mut group = c.benchmark_group("scheme_b");
    for scheme in SchemeChoice::ALL {
        group.bench_with_input(
            BenchmarkId::from_parameter(scheme.short()),
            &scheme,
            |b, &scheme| b.iter(|| build(scheme, black_box(a)).unwrap()),
        );
    }
    group.finish();
}

fn bench_transients(c: &mut Criterion) {
    let a = &instances(6, 1)[0];
    c.bench_function("measure_t d=6", |b| {
        b.iter(|| TransientLab::new(black_box(a)).unwrap().measure_t().unwrap())
    });
    let exp = build(SchemeChoice::Nachtigall, a).unwrap();
    c.bench_function("measure_t1 d=6 N", |b| {
        b.iter(|| {
            TransientLab::new(black_box(a))
                .unwrap()
                .measure_t1(black_box(&exp))
                .unwrap()
        })
    });
}

criterion_group!(
    benches,
    bench_mat_mul,
    bench_profile,
    bench_csr,
    bench_schemes,
    bench_transients
);
criterion_main!(benches);
