use std::hint::black_box;

use causal_streams::dsl::{self, Bindings};
use causal_streams::solver::{solve_inclusion, Strategy};
use causal_streams::transformer::{check_causality, refines, unit_delay};
use causal_streams::{Domain, Parallelism, Transformer};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Parallelism); 2] = [("sequential", Parallelism::Sequential), ("parallel", Parallelism::Parallel)];

fn system(src: &str) -> Transformer {
    let sys = dsl::parse(src).expect("bench system parses");
    let bindings = dsl::input_streams(&sys, &Bindings::new()).unwrap();
    dsl::elaborate(&sys, &bindings).unwrap().transformer
}

fn causality(c: &mut Criterion) {
    let fig1 = system(
        "stream z : rat input = ramp(1, 1);
         stream h1 : rat; stream h2 : rat; stream h3 : rat; stream y : rat;
         h1 = X*h2; h3 = z + h1; h2 = h3; y = h3;",
    );
    let d1: Transformer = unit_delay(&Domain::Rational).unwrap().into();
    let mut group = c.benchmark_group("check_causality");
    group.sample_size(10);
    for (label, t) in [("fig1", &fig1), ("unit_delay", &d1)] {
        for (mode_name, mode) in MODES {
            group.bench_with_input(BenchmarkId::new(label, mode_name), &mode, |b, &mode| {
                b.iter(|| check_causality(black_box(t), t.delay(), 32, 500, 7, mode).unwrap())
            });
        }
    }
    group.finish();
}

fn inclusion(c: &mut Criterion) {
    let t = system("stream f : bool; stream g : bool; f in {X*g, 1 + X*g}; g in {X*f, 1 + X*X*f};");
    let strategy = Strategy::Exhaustive { budget: 1 << 22 };
    let mut group = c.benchmark_group("solve_inclusion_exhaustive");
    group.sample_size(10);
    for (mode_name, mode) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(mode_name), &mode, |b, &mode| {
            b.iter(|| solve_inclusion(black_box(&t), 12, strategy, mode).unwrap())
        });
    }
    group.finish();
}

fn refinement(c: &mut Criterion) {
    let s = system("stream f : bool; f in {X*f, 1 + X*f};");
    let t = system("stream f : bool; f in {X*f, 1 + X*f, X*X*f};");
    let mut group = c.benchmark_group("refines");
    group.sample_size(10);
    for (mode_name, mode) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(mode_name), &mode, |b, &mode| {
            b.iter(|| refines(black_box(&s), &t, 10, mode).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, causality, inclusion, refinement);
criterion_main!(benches);
