use std::hint::black_box;

use convex_bm::bm::bm_upper;
use convex_bm::bodies::canned::{cube_v, regular_polygon};
use convex_bm::bodies::{Body, PolyBody};
use convex_bm::kernel::{random_unit_vector, RngStream};
use convex_bm::volume::volume_mc;
use convex_bm_bench::gluskin;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn lp_gauge(c: &mut Criterion) {
    let mut g = c.benchmark_group("lp_gauge");
    for (d, m) in [(4usize, 16usize), (8, 64), (10, 80)] {
        let v = gluskin(d, m);
        let x = random_unit_vector(d, &mut RngStream::new(1).rng());
        g.bench_with_input(BenchmarkId::from_parameter(format!("d{d}_M{m}")), &x, |b, x| {
            b.iter(|| v.gauge(black_box(x)).unwrap())
        });
    }
    g.finish();
}

fn facet_gauge(c: &mut Criterion) {
    let k = PolyBody::from_vpolytope(&gluskin(4, 16)).unwrap();
    let x = random_unit_vector(4, &mut RngStream::new(2).rng());
    c.bench_function("facet_gauge_d4_M16", |b| b.iter(|| k.gauge(black_box(&x)).unwrap()));
}

fn upper(c: &mut Criterion) {
    let gon = PolyBody::from_vpolytope(&regular_polygon(64, 1.0, 0.0)).unwrap();
    let sq = PolyBody::from_vpolytope(&cube_v(2)).unwrap();
    let mut g = c.benchmark_group("bm_upper");
    g.sample_size(10);
    g.bench_function("64gon_square_4restarts", |b| {
        b.iter(|| bm_upper(&gon, &sq, 4, &RngStream::new(3)).unwrap().upper)
    });
    let a = PolyBody::from_vpolytope(&gluskin(3, 6)).unwrap();
    let s = RngStream::new(4);
    let bb = PolyBody::from_vpolytope(&convex_bm::nets::gluskin_build(
        &convex_bm::nets::GluskinSpec::new(3, 6, s).unwrap(),
    ).unwrap())
    .unwrap();
    g.bench_function("gluskin3_6_pair_4restarts", |b| {
        b.iter(|| bm_upper(&a, &bb, 4, &RngStream::new(5)).unwrap().upper)
    });
    g.finish();
}

fn volume(c: &mut Criterion) {
    let mut g = c.benchmark_group("volume_mc");
    g.sample_size(10);
    let cube = Body::V(cube_v(4));
    g.bench_function("cube4_20k", |b| b.iter(|| volume_mc(&cube, 20_000, &RngStream::new(6)).unwrap().value));
    let glu = Body::V(gluskin(5, 20));
    g.bench_function("gluskin5_20_20k", |b| b.iter(|| volume_mc(&glu, 20_000, &RngStream::new(7)).unwrap().value));
    g.finish();
}

criterion_group!(benches, lp_gauge, facet_gauge, upper, volume);
criterion_main!(benches);
