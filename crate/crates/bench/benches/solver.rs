use std::hint::black_box;

use bundling::demand::{sales_volume, Profiles};
use bundling::dominance::build_dominance;
use bundling::lp::{solve_lp, DiscretizedInstance};
use bundling::menu::{minimal_menu, relaxed_bound};
use bundling::Bundle;
use bundling_bench::fixture;
use criterion::{criterion_group, criterion_main, Criterion};

fn solver(c: &mut Criterion) {
    let spec = fixture(4097);
    c.bench_function("sales_volume", |b| b.iter(|| sales_volume(black_box(&spec), Bundle(3))));
    c.bench_function("profiles_and_dominance", |b| {
        b.iter(|| build_dominance(&Profiles::compute(black_box(&spec))))
    });
    let profiles = Profiles::compute(&spec);
    let dom = build_dominance(&profiles);
    c.bench_function("minimal_menu", |b| b.iter(|| minimal_menu(black_box(&spec), &profiles, &dom).unwrap()));
    c.bench_function("relaxed_bound", |b| b.iter(|| relaxed_bound(black_box(&spec))));
    let inst = DiscretizedInstance::new(&spec, 101).unwrap();
    let mut group = c.benchmark_group("lp");
    group.sample_size(10);
    group.bench_function("solve_lp_m101", |b| b.iter(|| solve_lp(black_box(&inst)).unwrap()));
    group.finish();
}

criterion_group!(benches, solver);
criterion_main!(benches);
