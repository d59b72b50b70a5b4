use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use qkflag::chevalley::{identity_class, wk_factor_with};
use qkflag::grothendieck::groth_longest;
use qkflag::sijection::telescope_sum_with;
use qkflag::verify::{psi_eval_with, verify_descent_with, verify_main_with};
use qkflag::Exec;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn bench_verify(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_main");
    group.sample_size(10);
    for n in [2usize, 3] {
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| verify_main_with(exec, black_box(n), 3).unwrap())
            });
        }
    }
    group.finish();

    let mut group = c.benchmark_group("verify_descent");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, 3), |b| {
            b.iter(|| verify_descent_with(exec, black_box(3), 3).unwrap())
        });
    }
    group.finish();
}

// Single-class kernels: parallelism only inside the admissible-subset sums.
fn bench_kernels(c: &mut Criterion) {
    let n = 3;
    let poly = groth_longest(n, 3).unwrap();
    let mut group = c.benchmark_group("kernels");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new("psi_eval_longest", name), |b| {
            b.iter(|| psi_eval_with(exec, black_box(&poly)).unwrap())
        });
        group.bench_function(BenchmarkId::new("wk_factor", name), |b| {
            b.iter(|| wk_factor_with(exec, &identity_class(n, 3), black_box(3)).unwrap())
        });
        group.bench_function(BenchmarkId::new("telescope", name), |b| {
            b.iter(|| telescope_sum_with(exec, n, black_box(3), 3).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_verify, bench_kernels);
criterion_main!(benches);
