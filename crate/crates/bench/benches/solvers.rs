use askew_core::{
    antisym_cp, cp_als, cp_then_antisymmetrize, gen_partial, gen_rank6_random, pantisym_cp,
    Init, PartialVariant, SolveConfig,
};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn preserving_config(seed: u64) -> SolveConfig {
    SolveConfig {
        tol: 1e-8,
        max_iter: 1000,
        seed,
        init: Init::Random,
    }
}

fn bench_fully_antisymmetric(c: &mut Criterion) {
    let mut group = c.benchmark_group("rank6_random");
    group.sample_size(10);
    for n in [10usize, 25] {
        let tensor = gen_rank6_random(n, 42).unwrap();
        group.bench_with_input(BenchmarkId::new("antisym_cp", n), &tensor, |b, t| {
            b.iter(|| antisym_cp(black_box(t), &preserving_config(1)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("cp_anti", n), &tensor, |b, t| {
            b.iter(|| cp_then_antisymmetrize(black_box(t), &preserving_config(1)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("cp_als_r6", n), &tensor, |b, t| {
            b.iter(|| cp_als(black_box(t), 6, &preserving_config(1)).unwrap())
        });
    }
    group.finish();
}

fn bench_partially_antisymmetric(c: &mut Criterion) {
    let mut group = c.benchmark_group("partial_a1");
    group.sample_size(10);
    let tensor = gen_partial(PartialVariant::A1, 42);
    group.bench_function("pantisym_cp", |b| {
        b.iter(|| pantisym_cp(black_box(&tensor), &preserving_config(1)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_fully_antisymmetric, bench_partially_antisymmetric);
criterion_main!(benches);
