//! Timing the work-heavy surfaces under whichever build is active. Bench
//! names are identical with and without the `parallel` feature, so
//! `cargo bench` and `cargo bench --no-default-features` produce directly
//! comparable reports; the results are byte-identical by construction, only
//! the wall time may differ.

use criterion::{criterion_group, criterion_main, Criterion};
use f1geom::analytic::constants::constants;
use f1geom::analytic::explicit::reconstruction_rows;
use f1geom::analytic::zeros::find_zeros;
use f1geom::monoid::enumerate_monoids;
use std::hint::black_box;

fn bench_zero_scan(c: &mut Criterion) {
    let mut g = c.benchmark_group("zero_scan");
    g.sample_size(20);
    g.bench_function("first_50", |b| {
        b.iter(|| find_zeros(black_box(50)).expect("scan"))
    });
    g.finish();
}

fn bench_reconstruction(c: &mut Criterion) {
    let consts = constants().expect("constants");
    let table = find_zeros(500).expect("zero table");
    let mut g = c.benchmark_group("reconstruction");
    g.sample_size(30);
    g.bench_function("grid_2_to_10_m500", |b| {
        b.iter(|| {
            reconstruction_rows(black_box(&table.heights), &consts, 2.0, 10.0, 0.05)
                .expect("grid")
        })
    });
    g.finish();
}

fn bench_enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("monoid_enumeration");
    g.bench_function("tables_up_to_5", |b| {
        b.iter(|| enumerate_monoids(black_box(5)).len())
    });
    g.finish();
}

criterion_group!(benches, bench_zero_scan, bench_reconstruction, bench_enumeration);
criterion_main!(benches);
