use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use permuton_lab::permuton::{density_stepup, sample_permutation};
use permuton_lab::rational::rat;
use permuton_lab::{Permutation, Permuton, StepUp};

fn stepup_density(c: &mut Criterion) {
    let sigma: Permutation = "2,4,3,1".parse().expect("valid");
    let weights = vec![rat(1, 6), rat(1, 4), rat(1, 12), rat(1, 4)];
    let mut group = c.benchmark_group("stepup_density");
    for tau in ["2,1", "2,4,1,3", "3,5,1,4,2", "2,4,6,1,3,5"] {
        let tau: Permutation = tau.parse().expect("valid");
        group.bench_with_input(BenchmarkId::from_parameter(tau.len()), &tau, |b, t| {
            b.iter(|| density_stepup(black_box(t), &sigma, &weights))
        });
    }
    group.finish();
}

fn sampling(c: &mut Criterion) {
    let sigma: Permutation = "2,4,1,3".parse().expect("valid");
    let phi = Permuton::StepUp(StepUp::balanced(sigma));
    let mut group = c.benchmark_group("sample_permutation");
    for n in [100, 1000, 10_000] {
        group.bench_with_input(BenchmarkId::new("stepup", n), &n, |b, &n| {
            b.iter(|| sample_permutation(black_box(&phi), n, 7))
        });
        group.bench_with_input(BenchmarkId::new("uniform", n), &n, |b, &n| {
            b.iter(|| sample_permutation(black_box(&Permuton::Uniform), n, 7))
        });
    }
    group.finish();
}

criterion_group!(benches, stepup_density, sampling);
criterion_main!(benches);
