use criterion::{black_box, criterion_group, criterion_main, Criterion};
use num_complex::Complex64;

use cfree_bench::sample_pair;
use cfree_core::convolution::cfree_convolve;
use cfree_core::cumulants::{cfree_cumulants_from_moments, moments_from_cfree_cumulants};
use cfree_core::limit_laws::{gaussian_limit_measure, poisson_cauchy_g, poisson_limit_measure, quadrature_moment};
use cfree_core::partitions::{enumerate_nc, NcCounts};
use cfree_core::product_state::sum_moments_via_words;
use cfree_core::series::{abcd_from_pair, cf_eval, functional_equation_residuals, poisson_cf_levels, DEFAULT_CF_DEPTH};

fn partitions(c: &mut Criterion) {
    c.bench_function("enumerate NC(10)", |b| b.iter(|| enumerate_nc(black_box(10)).unwrap().len()));
    c.bench_function("count tables n = 20", |b| b.iter(|| NcCounts::new(black_box(20))));
}

fn cumulants(c: &mut Criterion) {
    let p = sample_pair(12, 0);
    let q = sample_pair(12, 3);
    c.bench_function("c-free cumulants order 12", |b| b.iter(|| cfree_cumulants_from_moments(black_box(&p))));
    let big_r = cfree_cumulants_from_moments(&p);
    c.bench_function("c-free moments order 12", |b| {
        b.iter(|| moments_from_cfree_cumulants(black_box(&big_r), p.nu()).unwrap())
    });
    c.bench_function("c-free convolution order 12", |b| b.iter(|| cfree_convolve(black_box(&p), &q).unwrap()));
    c.bench_function("series residuals order 12", |b| {
        b.iter(|| functional_equation_residuals(&abcd_from_pair(black_box(&p))).unwrap())
    });
}

fn oracle(c: &mut Criterion) {
    let p = sample_pair(6, 0);
    let q = sample_pair(6, 3);
    c.bench_function("word oracle n = 6", |b| b.iter(|| sum_moments_via_words(black_box(&p), &q, 6).unwrap()));
}

fn laws(c: &mut Criterion) {
    let g = gaussian_limit_measure(2.0, 1.0).unwrap();
    let p = poisson_limit_measure(0.5, 0.5).unwrap();
    c.bench_function("gaussian quadrature m_8", |b| b.iter(|| quadrature_moment(black_box(&g), 8).unwrap()));
    c.bench_function("poisson quadrature m_6", |b| b.iter(|| quadrature_moment(black_box(&p), 6).unwrap()));
    let z = Complex64::new(0.7, 1.3);
    let levels = poisson_cf_levels(1.0, 3.0, DEFAULT_CF_DEPTH);
    c.bench_function("poisson G closed form", |b| b.iter(|| poisson_cauchy_g(1.0, 3.0, black_box(z)).unwrap()));
    c.bench_function("poisson G continued fraction depth 64", |b| b.iter(|| cf_eval(&levels, black_box(z)).unwrap()));
}

criterion_group!(benches, partitions, cumulants, oracle, laws);
criterion_main!(benches);
