//! Timings of the numerical kernels behind the experiment runner.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use modphi::hermite_asymptotics::HermiteTable;
use modphi::lattice_measure::{distance_tv, fourier_sample, scheme_measure, wiener_norm};
use modphi::models::{bernoulli_exact_law, ewens_cycle_law, fq_factor_law, prime_omega_law, FactorCount};
use modphi::{LaurentResidue, LevyExponent};

fn convolution(c: &mut Criterion) {
    let mut group = c.benchmark_group("convolve");
    for len in [64usize, 1024, 16384] {
        let a = ewens_cycle_law(len as u64, 1.0).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(len), &a, |b, a| {
            b.iter(|| black_box(a.convolve(a).unwrap()))
        });
    }
    group.finish();
}

fn fourier(c: &mut Criterion) {
    let m = ewens_cycle_law(4096, 1.0).unwrap();
    let n = m.width().next_power_of_two();
    c.bench_function("fourier_sample_and_wiener_norm", |b| {
        b.iter(|| black_box(wiener_norm(&fourier_sample(&m, n).unwrap())))
    });
}

fn schemes(c: &mut Criterion) {
    let mut group = c.benchmark_group("scheme_measure");
    let residue = LaurentResidue::new_1d(vec![1.0, 0.0, -0.8, 0.3], vec![]).unwrap();
    for lambda in [10.0f64, 100.0, 1000.0] {
        group.bench_with_input(BenchmarkId::from_parameter(lambda), &lambda, |b, &lambda| {
            b.iter(|| black_box(scheme_measure(&LevyExponent::poisson(), lambda, &residue, 1e-12).unwrap()))
        });
    }
    group.finish();
}

fn exact_laws(c: &mut Criterion) {
    let p: Vec<f64> = (1..=10_000).map(|i| (i as f64).powf(-0.6)).collect();
    c.bench_function("bernoulli_law_n1e4", |b| b.iter(|| black_box(bernoulli_exact_law(&p).unwrap())));
    c.bench_function("prime_omega_law_n1e6", |b| b.iter(|| black_box(prime_omega_law(1_000_000).unwrap())));
    c.bench_function("fq_factor_law_q2_n40", |b| {
        b.iter(|| black_box(fq_factor_law(2, 40, FactorCount::Distinct).unwrap()))
    });
    let law = bernoulli_exact_law(&p).unwrap();
    let scheme = scheme_measure(&LevyExponent::poisson(), p.iter().sum(), &LaurentResidue::one(1), 1e-12).unwrap();
    c.bench_function("distance_tv_n1e4", |b| b.iter(|| black_box(distance_tv(&law, &scheme).unwrap())));
}

fn hermite(c: &mut Criterion) {
    c.bench_function("hermite_table_r10", |b| b.iter(|| black_box(HermiteTable::new(10).unwrap())));
}

criterion_group!(benches, convolution, fourier, schemes, exact_laws, hermite);
criterion_main!(benches);
