use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use walras::equilibrium::walrasian_set_with;
use walras::generate::{generate, GenerateSpec, Mix};
use walras::sweep::{selftest, SweepConfig};
use walras::{Exec, Instance, ProfileTable};

fn instance(m: usize, n: usize) -> Instance {
    generate(&GenerateSpec {
        m,
        n,
        max_value: 4,
        mix: Mix::Mixed,
        seed: 42,
    })
    .unwrap()
}

fn modes() -> [(&'static str, Exec); 2] {
    [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)]
}

fn profile_table(c: &mut Criterion) {
    let inst = instance(4, 4);
    let mut group = c.benchmark_group("profile_table");
    for (name, exec) in modes() {
        group.bench_function(BenchmarkId::new(name, "m4n4"), |b| {
            b.iter(|| ProfileTable::build_with(&inst, exec).unwrap())
        });
    }
    group.finish();
}

fn walrasian_scan(c: &mut Criterion) {
    let inst = instance(4, 3);
    let mut group = c.benchmark_group("walrasian_set");
    for (name, exec) in modes() {
        group.bench_function(BenchmarkId::new(name, "m4n3"), |b| {
            b.iter(|| walrasian_set_with(&inst, exec).unwrap())
        });
    }
    group.finish();
}

fn selftest_sweep(c: &mut Criterion) {
    let inst = instance(3, 3);
    let mut group = c.benchmark_group("selftest");
    group.sample_size(10);
    for (name, exec) in modes() {
        let config = SweepConfig {
            exec,
            ..SweepConfig::default()
        };
        group.bench_function(BenchmarkId::new(name, "m3n3"), |b| b.iter(|| selftest(&inst, config).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, profile_table, walrasian_scan, selftest_sweep);
criterion_main!(benches);
