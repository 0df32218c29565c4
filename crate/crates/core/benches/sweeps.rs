use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use wonder_core::batyrev::{batyrev_trace, cross_check_oracle};
use wonder_core::group::FiniteMatrixGroup;
use wonder_core::par::Execution;
use wonder_core::presets;
use wonder_core::stratification::y_family;
use wonder_core::verify::{abelian_suite, question_scan, StratificationKind, SuiteBudget, SuiteModes};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn suites(c: &mut Criterion) {
    let m = presets::s4_perm4();
    let budget = SuiteBudget {
        samples: 200,
        ..SuiteBudget::default()
    };
    let mut g = c.benchmark_group("abelian_suite_s4");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| abelian_suite(&m, StratificationKind::Stabilizer, SuiteModes::ALL, budget, 1, exec).unwrap())
        });
    }
    g.finish();
}

fn scan(c: &mut Criterion) {
    let mut g = c.benchmark_group("question_scan_dim4");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| question_scan(4, 100, 7, &[], exec).unwrap())
        });
    }
    g.finish();
}

fn cayley(c: &mut Criterion) {
    let a5 = presets::a5_perm5();
    let gens: Vec<_> = a5
        .group
        .generators()
        .iter()
        .map(|&i| a5.group.matrix(i).clone())
        .collect();
    let mut g = c.benchmark_group("cayley_table_a5");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| {
                // fresh group each time: the table is cached per group
                let grp = FiniteMatrixGroup::close_generators(5, &gens, 100).unwrap();
                black_box(grp.cayley_table(exec).len())
            })
        });
    }
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let m = presets::s4_perm4();
    let t = batyrev_trace(4, &y_family(&m, 400).unwrap());
    let mut g = c.benchmark_group("oracle_s4");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| cross_check_oracle(&t, 4, 3, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, suites, scan, cayley, oracle);
criterion_main!(benches);
