use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use cosmetic_bench::family_matrices;
use cosmetic_core::cosmetic::{solve_d3_equation, Family};
use cosmetic_core::exact_arith::rat;
use cosmetic_core::exact_linalg::appendix::verify_appendix;
use cosmetic_core::exact_linalg::{determinant, inverse, signature};
use cosmetic_core::invariants::d3_spectrum;
use cosmetic_core::LegendrianData;

fn linear_algebra(c: &mut Criterion) {
    let mut group = c.benchmark_group("linear_algebra");
    for n in [4i64, 8, 16, 32] {
        let mats = family_matrices(6, &[n]);
        group.bench_with_input(BenchmarkId::new("determinant", n), &mats, |b, m| {
            b.iter(|| m.iter().map(|x| determinant(black_box(x))).count())
        });
        group.bench_with_input(BenchmarkId::new("signature", n), &mats, |b, m| {
            b.iter(|| m.iter().map(|x| signature(black_box(x)).unwrap()).count())
        });
        group.bench_with_input(BenchmarkId::new("inverse", n), &mats, |b, m| {
            b.iter(|| m.iter().map(|x| inverse(black_box(x)).unwrap()).count())
        });
    }
    group.finish();
}

fn invariants(c: &mut Criterion) {
    let knot = LegendrianData::new(-4, 1, None).unwrap();
    c.bench_function("d3_spectrum tb=-4 slope 1/5", |b| {
        b.iter(|| d3_spectrum(black_box(&knot), &rat(1, 5)).unwrap())
    });
    c.bench_function("solve pm_one_over_n tb=-6", |b| {
        b.iter(|| solve_d3_equation(black_box(-6), Family::PmOneOverN, 30).unwrap())
    });
}

fn appendix(c: &mut Criterion) {
    let mut group = c.benchmark_group("appendix");
    group.sample_size(10);
    group.bench_function("verify k,n <= 6", |b| b.iter(|| verify_appendix(black_box(6), 6)));
    group.finish();
}

criterion_group!(benches, linear_algebra, invariants, appendix);
criterion_main!(benches);
