use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use randlind::analytic::{dff_gue_dissipator, dff_simple_lindbladian, lvn_sff};
use randlind::ensembles::{sample_ginibre, EnsembleKind, EnsembleSpec};
use randlind::moments::trace_moment_kron;
use randlind::sampling::dissipator_spectrum;
use randlind::specfun::{bessel_i_scaled, expint_e1, hyp_pfq};
use randlind::spectral::{dff_from_spectrum, eigenvalues, TimeGrid};
use randlind::superop::{dissipator_terms, simple_dissipator};

fn ginibre(n: usize) -> randlind::ComplexMatrix {
    sample_ginibre(&EnsembleSpec::new(EnsembleKind::ComplexGinibre, n, 1.0, 7).unwrap()).unwrap()
}

fn eigensolve(c: &mut Criterion) {
    let mut g = c.benchmark_group("dissipator_eigenvalues");
    g.sample_size(10);
    for n in [8usize, 16, 24] {
        let s = simple_dissipator(&ginibre(n)).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &s, |b, s| b.iter(|| eigenvalues(black_box(s)).unwrap()));
    }
    g.finish();
}

fn form_factor(c: &mut Criterion) {
    let spec = dissipator_spectrum(EnsembleKind::ComplexGinibre, 24, 1.0, 7, 0).unwrap();
    let grid = TimeGrid::log(0.01, 100.0, 200).unwrap();
    c.bench_function("dff_from_spectrum/N=24,200 times", |b| {
        b.iter(|| dff_from_spectrum(black_box(&spec), &grid).unwrap())
    });
    let s = dissipator_terms(&ginibre(16), 1.0).unwrap();
    c.bench_function("trace_moment_kron/N=16,n=4", |b| b.iter(|| trace_moment_kron(black_box(&s), 4)));
}

fn closed_forms(c: &mut Criterion) {
    c.bench_function("dff_gue_dissipator/t=1", |b| b.iter(|| dff_gue_dissipator(black_box(1.0), 1.0).unwrap()));
    c.bench_function("dff_gue_dissipator/t=100", |b| b.iter(|| dff_gue_dissipator(black_box(100.0), 1.0).unwrap()));
    c.bench_function("lvn_sff/t=10", |b| b.iter(|| lvn_sff(black_box(10.0), 1.0).unwrap()));
    c.bench_function("dff_simple_lindbladian/t=5", |b| {
        b.iter(|| dff_simple_lindbladian(black_box(5.0), 0.1).unwrap())
    });
}

fn special_functions(c: &mut Criterion) {
    c.bench_function("bessel_i_scaled/x=20", |b| b.iter(|| bessel_i_scaled(1, black_box(20.0)).unwrap()));
    c.bench_function("expint_e1/x=3", |b| b.iter(|| expint_e1(black_box(3.0))));
    c.bench_function("hyp_pfq 1F2/x=-50", |b| {
        b.iter(|| hyp_pfq(&[1.5], &[2.5, 3.0], black_box(-50.0)).unwrap())
    });
}

criterion_group!(benches, eigensolve, form_factor, closed_forms, special_functions);
criterion_main!(benches);
