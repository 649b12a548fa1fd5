use std::sync::Arc;

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use flowspan::caseanalysis::{verify_bound_with, CaseOptions};
use flowspan::oracle::{solve, OracleOptions};
use flowspan::par::Parallelism;
use flowspan::search::{hunt, tight_family, HuntOptions};
use flowspan::{ld_bound, Rational};

const MODES: [(&str, Parallelism); 2] = [("sequential", Parallelism::Sequential), ("rayon", Parallelism::Rayon)];

fn hunts(c: &mut Criterion) {
    let mut g = c.benchmark_group("hunt_3x3_lmax6");
    g.sample_size(10);
    for (name, mode) in MODES {
        let opts = HuntOptions { parallelism: mode, ..HuntOptions::default() };
        g.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, opts| {
            b.iter(|| hunt(3, 3, 6, &ld_bound(3), black_box(opts)).unwrap())
        });
    }
    g.finish();
}

fn cases(c: &mut Criterion) {
    let mut g = c.benchmark_group("cases_3x3");
    g.sample_size(10);
    let bound = Rational::frac(13, 11);
    for (name, mode) in MODES {
        let opts = CaseOptions { parallelism: mode, ..CaseOptions::default() };
        g.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, opts| {
            b.iter(|| verify_bound_with(3, 3, &bound, black_box(opts)).unwrap())
        });
    }
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle_tight_m5_unpruned");
    g.sample_size(10);
    let inst = Arc::new(tight_family(5).unwrap());
    for (name, mode) in MODES {
        let opts = OracleOptions { parallelism: mode, prune: false, ..OracleOptions::default() };
        g.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, opts| {
            b.iter(|| solve(&inst, black_box(opts)).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, hunts, cases, oracle);
criterion_main!(benches);
