use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qec_bench::empty_join;
use qec_core::cheb_poly::{isolate_all, phi};
use qec_core::{qec_fan, qec_join_empty, qec_oracle, solve_recurrence, FamilyKind};

fn join_vs_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("join-cycle");
    for n in [8, 16, 32] {
        let (joined, g) = empty_join(2, FamilyKind::Cycle, n);
        group.bench_with_input(BenchmarkId::new("oracle", n), &joined, |b, j| {
            b.iter(|| qec_oracle(black_box(j)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("lambda-sets", n), &g, |b, g| {
            b.iter(|| qec_join_empty(2, black_box(g)).unwrap())
        });
    }
    group.finish();
}

fn fan(c: &mut Criterion) {
    let mut group = c.benchmark_group("fan");
    for n in [20, 21, 100, 101] {
        group.bench_with_input(BenchmarkId::new("qec", n), &n, |b, &n| b.iter(|| qec_fan(black_box(n)).unwrap()));
    }
    group.finish();
}

fn polynomials(c: &mut Criterion) {
    let mut group = c.benchmark_group("phi");
    for n in [10, 30] {
        let p = phi(n).unwrap();
        group.bench_with_input(BenchmarkId::new("build", n), &n, |b, &n| b.iter(|| phi(black_box(n)).unwrap()));
        group.bench_with_input(BenchmarkId::new("isolate", n), &p, |b, p| {
            b.iter(|| isolate_all(black_box(p)).unwrap())
        });
    }
    group.finish();
}

fn recurrence(c: &mut Criterion) {
    c.bench_function("recurrence/n=1000", |b| {
        b.iter(|| solve_recurrence(black_box(1000), black_box(-1.3), black_box(0.7)).unwrap())
    });
}

criterion_group!(benches, join_vs_oracle, fan, polynomials, recurrence);
criterion_main!(benches);
