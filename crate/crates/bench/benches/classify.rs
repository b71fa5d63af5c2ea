use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pencilform::pencil::{congruence_transform, skew_pair_invariants};
use pencilform::weakcong::{enumerate_classes, weak_canonicalize, DEFAULT_ORBIT_LIMIT};
use pencilform::Prime;
use pencilform_bench::random_skew_pair;
use std::hint::black_box;

fn bench_invariants(c: &mut Criterion) {
    let mut group = c.benchmark_group("skew_pair_invariants");
    for (p, m) in [(3u64, 4usize), (3, 6), (5, 6), (5, 8)] {
        let a = random_skew_pair(0xB0 + m as u64, p, m);
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("p{p}_m{m}")),
            &a,
            |b, a| b.iter(|| skew_pair_invariants(black_box(a)).unwrap()),
        );
    }
    group.finish();
}

fn bench_transform(c: &mut Criterion) {
    let mut group = c.benchmark_group("congruence_transform");
    for (p, m) in [(3u64, 4usize), (3, 6), (5, 6)] {
        let a = random_skew_pair(0xC0 + m as u64, p, m);
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("p{p}_m{m}")),
            &a,
            |b, a| b.iter(|| congruence_transform(black_box(a)).unwrap()),
        );
    }
    group.finish();
}

fn bench_weak_canonicalize(c: &mut Criterion) {
    let mut group = c.benchmark_group("weak_canonicalize");
    for (p, m) in [(3u64, 6usize), (5, 6), (7, 4)] {
        let a = random_skew_pair(0xD0 + m as u64, p, m);
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("p{p}_m{m}")),
            &a,
            |b, a| b.iter(|| weak_canonicalize(black_box(a), DEFAULT_ORBIT_LIMIT).unwrap()),
        );
    }
    group.finish();
}

fn bench_enumerate_classes(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_classes");
    group.sample_size(10);
    for (p, m) in [(3u64, 4usize), (3, 5), (5, 4)] {
        let prime = Prime::new(p).unwrap();
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("p{p}_m{m}")),
            &(prime, m),
            |b, &(prime, m)| {
                b.iter(|| enumerate_classes(black_box(prime), black_box(m), DEFAULT_ORBIT_LIMIT).unwrap())
            },
        );
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_invariants,
    bench_transform,
    bench_weak_canonicalize,
    bench_enumerate_classes
);
criterion_main!(benches);
