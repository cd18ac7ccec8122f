use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use pointbethe::exec::Execution;
use pointbethe::factorization::{scan_couplings, yang_baxter_matrix_check};
use pointbethe::sampling::SamplePanel;
use pointbethe::{BetheState, CoefficientVector, CouplingParameters, GridSpec, MomentumVector};

const POLICIES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn scan(c: &mut Criterion) {
    let grid = GridSpec::standard();
    let mut group = c.benchmark_group("scan_couplings");
    group.sample_size(10);
    for (name, exec) in POLICIES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| scan_couplings(&grid, exec).unwrap())
        });
    }
    group.finish();
}

fn yang_baxter(c: &mut Criterion) {
    let panel = SamplePanel::seeded(0, 20);
    let params = CouplingParameters::delta_with_drift(1.0, 0.5);
    let mut group = c.benchmark_group("yang_baxter_n5");
    group.sample_size(10);
    for (name, exec) in POLICIES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| yang_baxter_matrix_check(&params, 5, &panel, exec).unwrap())
        });
    }
    group.finish();
}

fn table_fill(c: &mut Criterion) {
    let params = CouplingParameters::delta_prime_balanced(1.3);
    let k = MomentumVector::new(vec![0.4, -1.1, 1.9, 0.0, 2.7, -2.3]).unwrap();
    let a = CoefficientVector::unit(6, 0);
    let mut group = c.benchmark_group("bethe_table_n6");
    group.sample_size(10);
    for (name, exec) in POLICIES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| BetheState::new_with(params, k.clone(), a.clone(), exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, scan, yang_baxter, table_fill);
criterion_main!(benches);
