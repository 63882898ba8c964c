use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use biprom_bench::{random_problem, random_profiles, sample_bicapacity};
use biprom_core::bicapacity::to_general;
use biprom_core::{bipolar_flows, choquet_2additive, choquet_general};

fn integrals(c: &mut Criterion) {
    let mut group = c.benchmark_group("choquet");
    for n in [3, 5, 8] {
        let b = sample_bicapacity(n);
        let g = to_general(&b).unwrap();
        let profiles = random_profiles(7, 256, n);
        group.bench_with_input(BenchmarkId::new("two_additive", n), &n, |bench, _| {
            bench.iter(|| {
                for x in &profiles {
                    black_box(choquet_2additive(x, &b).unwrap());
                }
            })
        });
        group.bench_with_input(BenchmarkId::new("general_table", n), &n, |bench, _| {
            bench.iter(|| {
                for x in &profiles {
                    black_box(choquet_general(x, &g).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn flows(c: &mut Criterion) {
    let mut group = c.benchmark_group("bipolar_flows");
    for m in [8, 50, 200] {
        let problem = random_problem(11, m, 5);
        let b = sample_bicapacity(5);
        group.bench_with_input(BenchmarkId::from_parameter(m), &m, |bench, _| {
            bench.iter(|| black_box(bipolar_flows(&problem, &b).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, integrals, flows);
criterion_main!(benches);
