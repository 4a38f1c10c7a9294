use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use qpke_core::bayes::BayesAttack;
use qpke_core::eigen::jacobi_eigen;
use qpke_core::montecarlo::estimate;
use qpke_core::symspace::prior_density;
use qpke_core::{AttackKind, PairBasis, ProtocolParams, TrialConfig};

fn prior(c: &mut Criterion) {
    let mut group = c.benchmark_group("prior_density");
    for (tau, n) in [(8, 10), (32, 10), (64, 14)] {
        group.throughput(Throughput::Elements(1 << n));
        group.bench_with_input(BenchmarkId::from_parameter(format!("tau{tau}_n{n}")), &(tau, n), |b, &(tau, n)| {
            b.iter(|| prior_density(black_box(tau), black_box(n)).unwrap())
        });
    }
    group.finish();
}

fn jacobi(c: &mut Criterion) {
    let mut group = c.benchmark_group("jacobi_eigen");
    for tau in [8usize, 32, 64] {
        let rho = prior_density(tau, 12).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(tau + 1), rho.as_slice(), |b, m| {
            b.iter(|| jacobi_eigen(black_box(m), tau + 1).unwrap())
        });
    }
    group.finish();
}

fn bayes(c: &mut Criterion) {
    let mut group = c.benchmark_group("bayes_n10");
    for t in [2u32, 8] {
        group.bench_with_input(BenchmarkId::new("information_gain", t), &t, |b, &t| {
            b.iter(|| BayesAttack::new(black_box(t), 10).unwrap().information_gain())
        });
        group.bench_with_input(BenchmarkId::new("mean_success", t), &t, |b, &t| {
            b.iter(|| BayesAttack::new(black_box(t), 10).unwrap().mean_success())
        });
    }
    group.finish();
}

fn montecarlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("montecarlo");
    let trials = 10_000;
    group.throughput(Throughput::Elements(trials));
    let runs = [
        ("symmetry_s8", AttackKind::SymmetryTest(PairBasis::Uniform), 1, 8),
        ("bayes_t4_s8", AttackKind::BayesProjective, 4, 8),
    ];
    for (name, kind, t, s) in runs {
        let cfg = TrialConfig::new(ProtocolParams::new(10, s, t, s).unwrap(), kind, trials, 7).unwrap();
        group.bench_function(name, |b| b.iter(|| estimate(black_box(&cfg)).unwrap()));
    }
    group.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = prior, jacobi, bayes, montecarlo
}
criterion_main!(benches);
