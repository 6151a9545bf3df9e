use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qfound_core::born::ProjectorFamily;
use qfound_core::channels::{check_linearity, DynamicsMap, KrausChannel};
use qfound_core::rng::{random_hermitian, SplitMix64};
use qfound_core::scenarios::run_ghz;
use qfound_core::state::random_mixed_state;
use qfound_core::{gleason_reconstruct, hermitian_eig};
use std::hint::black_box;

fn eigensolver(c: &mut Criterion) {
    let mut group = c.benchmark_group("hermitian_eig");
    for d in [2usize, 4, 8] {
        let a = random_hermitian(d, &mut SplitMix64::new(7));
        group.bench_with_input(BenchmarkId::from_parameter(d), &a, |b, a| {
            b.iter(|| hermitian_eig(black_box(a)).unwrap())
        });
    }
    group.finish();
}

fn tomography(c: &mut Criterion) {
    let mut group = c.benchmark_group("gleason_reconstruct");
    for d in [2usize, 3, 4] {
        let rho = random_mixed_state(d, &mut SplitMix64::new(11));
        let family = ProjectorFamily::informationally_complete(d);
        let values = family.measure(&rho).unwrap();
        group.bench_function(BenchmarkId::from_parameter(d), |b| {
            b.iter(|| gleason_reconstruct(&family, black_box(&values), d).unwrap())
        });
    }
    group.finish();
}

fn linearity(c: &mut Criterion) {
    let ch = KrausChannel::depolarizing(0.3).unwrap();
    let map = DynamicsMap::from_channel("depolarizing", ch);
    c.bench_function("check_linearity/depolarizing/100", |b| {
        b.iter(|| check_linearity(&map, 2, 100, black_box(0)).unwrap())
    });
}

fn ghz(c: &mut Criterion) {
    c.bench_function("run_ghz", |b| b.iter(|| run_ghz().unwrap()));
}

criterion_group!(benches, eigensolver, tomography, linearity, ghz);
criterion_main!(benches);
