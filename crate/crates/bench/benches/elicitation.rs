use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use biprom_bench::{student_statements, students};
use biprom_core::ror::RorContext;
use biprom_core::{constructive_elicitation, ror_snapshot, ElicitationOptions, Level, RorOptions};

fn elicitation(c: &mut Criterion) {
    let problem = students();
    let statements = student_statements();
    c.bench_function("constructive_elicitation/students", |b| {
        b.iter(|| black_box(constructive_elicitation(&problem, &statements, ElicitationOptions::default()).unwrap()))
    });
}

fn ror(c: &mut Criterion) {
    let problem = students();
    let statements = student_statements();
    let ctx = RorContext::new(&problem, &statements, RorOptions::default()).unwrap();
    let mut group = c.benchmark_group("ror");
    group.bench_function("necessary_promethee1_cell", |b| {
        b.iter(|| black_box(ctx.necessary(6, 0, Level::Promethee1).unwrap()))
    });
    group.sample_size(10);
    group.bench_function("snapshot/students", |b| {
        b.iter(|| black_box(ror_snapshot(&problem, &statements, 1, None, RorOptions::default()).unwrap()))
    });
    group.finish();
}

criterion_group!(benches, elicitation, ror);
criterion_main!(benches);
