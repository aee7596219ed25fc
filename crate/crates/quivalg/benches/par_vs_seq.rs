//! Compares the parallel and sequential execution of the randomized suites.
//! Each instance check is pure, so the two paths produce identical reports;
//! the interesting number is the wall-clock ratio on multi-core hosts.
//!
//! With `--no-default-features` the parallel path compiles down to the
//! sequential one, which is the fallback configuration.

use criterion::{criterion_group, criterion_main, Criterion};

use quivalg::suite::{
    check_fullness_roundtrip, check_splitting_isos, check_truncated_auto_connected, SuiteConfig,
};

fn suite_config(parallel: bool) -> SuiteConfig {
    SuiteConfig { seed: 17, count: 12, parallel, ..SuiteConfig::default() }
}

fn bench_auto_connected(c: &mut Criterion) {
    let mut group = c.benchmark_group("truncated-auto-connected");
    for (name, parallel) in [("parallel", true), ("sequential", false)] {
        group.bench_function(name, |b| {
            let cfg = suite_config(parallel);
            b.iter(|| {
                let out = check_truncated_auto_connected(&cfg, cfg.count);
                assert!(out.passed());
                out.cases
            })
        });
    }
    group.finish();
}

fn bench_splitting(c: &mut Criterion) {
    let mut group = c.benchmark_group("splitting-isomorphisms");
    for (name, parallel) in [("parallel", true), ("sequential", false)] {
        group.bench_function(name, |b| {
            let cfg = suite_config(parallel);
            b.iter(|| {
                let out = check_splitting_isos(&cfg, 6);
                assert!(out.passed());
                out.cases
            })
        });
    }
    group.finish();
}

fn bench_fullness(c: &mut Criterion) {
    let mut group = c.benchmark_group("essential-fullness");
    for (name, parallel) in [("parallel", true), ("sequential", false)] {
        group.bench_function(name, |b| {
            let cfg = suite_config(parallel);
            b.iter(|| {
                let out = check_fullness_roundtrip(&cfg, cfg.count);
                assert!(out.passed());
                out.cases
            })
        });
    }
    group.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench_auto_connected, bench_splitting, bench_fullness
}
criterion_main!(benches);
