use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use diagcount_core::characters::purity_scan_with;
use diagcount_core::gf::build_field;
use diagcount_core::grid::{verify_grid, GridSpec};
use diagcount_core::par::Mode;
use std::hint::black_box;

const MODES: [(&str, Mode); 2] = [("sequential", Mode::Sequential), ("parallel", Mode::Parallel)];

fn grid(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_grid");
    group.sample_size(10);
    for (name, mode) in MODES {
        let spec = GridSpec {
            mode,
            ..GridSpec::default()
        };
        group.bench_function(BenchmarkId::new("default", name), |b| {
            b.iter(|| verify_grid(black_box(&spec), false).unwrap())
        });
    }
    group.finish();
}

fn purity(c: &mut Criterion) {
    let field = build_field(3, 4).unwrap();
    let mut group = c.benchmark_group("purity_scan");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::new("F81_d8_s4", name), |b| {
            b.iter(|| purity_scan_with(&field, black_box(8), 4, mode).unwrap())
        });
    }
    group.finish();
}

criterion_group!(sweeps, grid, purity);
criterion_main!(sweeps);
