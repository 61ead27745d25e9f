//! Sequential against data-parallel runs of the three parallel kernels:
//! homomorphism counting, the geodesic audit, and the filling scan.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use bianchi::congruence::{AuditOptions, CongruenceGroup};
use bianchi::fillpipe::{self, FillOptions};
use bianchi::fpcore::{hom_count_with, FiniteGroup, DEFAULT_HOM_GUARD};
use bianchi::par::Jobs;
use bianchi::words::Presentation;
use bianchi::QuadInt;

fn modes() -> Vec<(&'static str, Jobs)> {
    let n = std::thread::available_parallelism().map_or(2, |n| n.get().max(2));
    vec![("sequential", Jobs(1)), ("parallel", Jobs(n))]
}

fn hom_counts(c: &mut Criterion) {
    let p = Presentation::parse(&["a", "b", "c"], &["a*b*a^-1*b^-1*c", "[a,c]^2"]).unwrap();
    let target = FiniteGroup::psl2_prime(7);
    let mut g = c.benchmark_group("hom_count");
    g.sample_size(10);
    for (name, jobs) in modes() {
        g.bench_with_input(BenchmarkId::new(name, "3 gens into PSL2(7)"), &jobs, |b, &jobs| {
            b.iter(|| hom_count_with(black_box(&p), &target, jobs, DEFAULT_HOM_GUARD).unwrap())
        });
    }
    g.finish();
}

fn audit(c: &mut Criterion) {
    let cg = CongruenceGroup::new(QuadInt::gaussian(3, 2)).unwrap();
    let mut g = c.benchmark_group("audit_short_geodesics");
    g.sample_size(10);
    for (name, jobs) in modes() {
        g.bench_with_input(BenchmarkId::new(name, "radius 9"), &jobs, |b, &jobs| {
            b.iter(|| cg.audit_short_geodesics(9, &AuditOptions { jobs, ..Default::default() }).unwrap())
        });
    }
    g.finish();
}

fn scan(c: &mut Criterion) {
    let k = fillpipe::kernel().unwrap();
    let mut g = c.benchmark_group("scan_all");
    g.sample_size(10);
    for (name, jobs) in modes() {
        g.bench_with_input(BenchmarkId::new(name, "42 fillings"), &jobs, |b, &jobs| {
            b.iter(|| fillpipe::scan_all(k, &FillOptions { jobs, ..Default::default() }).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, hom_counts, audit, scan);
criterion_main!(benches);
