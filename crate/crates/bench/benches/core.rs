use std::hint::black_box;

use chernflat_core::classify::{center_one_normal_form, dim4_normal_form};
use chernflat_core::constructions::{catalog, scramble};
use chernflat_core::deform::deformation_space;
use chernflat_core::{random, ComplexSplitting};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn linalg(c: &mut Criterion) {
    let mut group = c.benchmark_group("gaussian_matrix");
    for n in [4, 8, 12] {
        let a = random::invertible_gaussian(&mut random::rng(n as u64), n, 3);
        group.bench_with_input(BenchmarkId::new("rank", n), &a, |b, a| b.iter(|| black_box(a).rank()));
        group.bench_with_input(BenchmarkId::new("inverse", n), &a, |b, a| b.iter(|| black_box(a).inverse()));
    }
    group.finish();
}

fn splitting(c: &mut Criterion) {
    let mut group = c.benchmark_group("split");
    for name in ["iwasawa_j3", "dim4_model", "centro1_model(3)"] {
        let e = catalog(name).unwrap();
        let j = e.j.unwrap();
        let a = random::invertible_gaussian(&mut random::rng(1), j.dim() / 2, 1);
        let (g, j) = scramble(&e.algebra, &j, &a).unwrap();
        group.bench_function(name, |b| b.iter(|| ComplexSplitting::split(black_box(&g), &j)));
    }
    group.finish();
}

fn normal_forms(c: &mut Criterion) {
    let mut group = c.benchmark_group("normal_form");
    group.sample_size(20);
    let e = catalog("dim4_model").unwrap();
    let j = e.j.unwrap();
    let (g, j) = scramble(&e.algebra, &j, &random::invertible_gaussian(&mut random::rng(2), 4, 1)).unwrap();
    group.bench_function("dim4_scrambled", |b| b.iter(|| dim4_normal_form(black_box(&g), &j)));
    for m in 1..=3 {
        let e = catalog(&format!("centro1_model({m})")).unwrap();
        let j = e.j.unwrap();
        let a = random::invertible_gaussian(&mut random::rng(3), 2 * m + 1, 1);
        let (g, j) = scramble(&e.algebra, &j, &a).unwrap();
        group.bench_with_input(BenchmarkId::new("center1_scrambled", m), &(g, j), |b, (g, j)| {
            b.iter(|| center_one_normal_form(black_box(g), j))
        });
    }
    group.finish();
}

fn deformations(c: &mut Criterion) {
    let mut group = c.benchmark_group("deformation_space");
    group.sample_size(10);
    for name in ["iwasawa_j3", "abelian(6)", "dim5_irreducible"] {
        let e = catalog(name).unwrap();
        let j = e.j.unwrap();
        group.bench_function(name, |b| b.iter(|| deformation_space(black_box(&e.algebra), &j)));
    }
    group.finish();
}

criterion_group!(benches, linalg, splitting, normal_forms, deformations);
criterion_main!(benches);
