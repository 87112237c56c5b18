use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use eea_bench::{cubic_graph, petersen_rational, quartic_adjacency};
use eea_core::constructions::{psl2, sl2};
use eea_core::spectral::symmetric_eigenvalues;
use eea_core::{cheeger_exact, Element, FieldDescriptor, ResourceCaps};

fn cheeger(c: &mut Criterion) {
    let caps = ResourceCaps::default();
    let mut group = c.benchmark_group("cheeger_exact");
    group.sample_size(10);
    for n in [16, 20, 24] {
        let graph = cubic_graph(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &graph, |b, g| {
            b.iter(|| cheeger_exact(black_box(g), &caps).unwrap())
        });
    }
    group.finish();
}

fn eigensolver(c: &mut Criterion) {
    let mut group = c.benchmark_group("symmetric_eigenvalues");
    for n in [64, 128, 256] {
        let m = quartic_adjacency(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| symmetric_eigenvalues(black_box(m)).unwrap())
        });
    }
    group.finish();
}

fn plenary(c: &mut Criterion) {
    let caps = ResourceCaps::default();
    let algebra = petersen_rational();
    let x = Element::basis(FieldDescriptor::Rational, algebra.dim(), 0);
    let mut group = c.benchmark_group("plenary_power");
    for k in [4u32, 8, 12] {
        group.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            b.iter(|| algebra.plenary_power(black_box(&x), k, &caps).unwrap())
        });
    }
    group.finish();
}

fn group_closure(c: &mut Criterion) {
    let caps = ResourceCaps::default();
    let mut group = c.benchmark_group("group_closure");
    group.sample_size(10);
    group.bench_function("sl2_7", |b| b.iter(|| sl2(black_box(7), &caps).unwrap()));
    group.bench_function("psl2_13", |b| b.iter(|| psl2(black_box(13), &caps).unwrap()));
    group.finish();
}

criterion_group!(kernels, cheeger, eigensolver, plenary, group_closure);
criterion_main!(kernels);
