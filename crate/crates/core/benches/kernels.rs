use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use walkbound::oracle::{build_avoider_graph, count_walks, EdgeRule};
use walkbound::quotient::{RunOperator, ShortOperator};
use walkbound::spectral::{certify_exact, power_iteration, snap_dyadic, Operator, PowerOptions};
use walkbound::{Exec, PatternSpec};

const PATHS: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn apply<O: Operator>(c: &mut Criterion, name: &str, op: &O) {
    let mut group = c.benchmark_group(name);
    let x = vec![1.0; op.dim()];
    let mut y = vec![0.0; op.dim()];
    for (label, exec) in PATHS {
        group.bench_function(BenchmarkId::from_parameter(label), |b| {
            b.iter(|| op.apply(exec, black_box(&x), &mut y))
        });
    }
    group.finish();
}

fn operators(c: &mut Criterion) {
    apply(c, "short_apply_n120", &ShortOperator::new(120).unwrap());
    apply(c, "run_apply_n200", &RunOperator::new(200).unwrap());
}

fn certification(c: &mut Criterion) {
    let op = ShortOperator::new(60).unwrap();
    let power = power_iteration(&op, &PowerOptions::default()).unwrap();
    let (v, _) = snap_dyadic(&power.vector).unwrap();
    let mut group = c.benchmark_group("short_certify_n60");
    group.sample_size(10);
    for (label, exec) in PATHS {
        group.bench_function(BenchmarkId::from_parameter(label), |b| {
            b.iter(|| certify_exact(exec, &op, black_box(&v)).unwrap())
        });
    }
    group.finish();
}

fn walks(c: &mut Criterion) {
    let spec = PatternSpec::parse("1324").unwrap();
    let g = build_avoider_graph(Exec::Parallel, &spec, 10, EdgeRule::VersionTwo).unwrap();
    let mut group = c.benchmark_group("walks_1324_n10_k40");
    group.sample_size(10);
    for (label, exec) in PATHS {
        group.bench_function(BenchmarkId::from_parameter(label), |b| {
            b.iter(|| count_walks(exec, black_box(&g), 40).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, operators, certification, walks);
criterion_main!(benches);
