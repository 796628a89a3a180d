//! Monte Carlo moment gates and large-N spectral laws for the ensembles.

use std::f64::consts::PI;

use randlind::analytic::mp_density;
use randlind::ensembles::*;
use randlind::quad::integrate;
use randlind::spectral::{map_samples, mean_stderr};
use randlind::Result;

const SEED: u64 = 0x5eed_0001;

fn spec(kind: EnsembleKind, dim: usize, v: f64) -> EnsembleSpec {
    EnsembleSpec::new(kind, dim, v, SEED).unwrap()
}

/// Mean of `f` over `samples` members with its 3σ gate against `want`.
fn gate(samples: usize, want: f64, f: impl Fn(usize) -> Result<f64> + Sync) {
    let xs = map_samples(samples, f).unwrap();
    let (mean, se) = mean_stderr(&xs);
    assert!((mean - want).abs() <= 3.0 * se, "mean {mean} ± {se}, want {want}");
}

#[test]
fn gue_off_diagonal_variance() {
    let base = spec(EnsembleKind::Gue, 16, 1.0);
    gate(10_000, 1.0 / 16.0, |k| Ok(sample_gue(&base.member(k as u64))?.get(0, 1).norm_sqr()));
}

#[test]
fn ginibre_second_moments() {
    let base = spec(EnsembleKind::ComplexGinibre, 16, 1.0);
    // ⟨L̄_ij L_kl⟩ = (v/N) δ_ik δ_jl: one diagonal pair and two off pairs
    gate(10_000, 1.0 / 16.0, |k| Ok(sample_ginibre(&base.member(k as u64))?.get(2, 5).norm_sqr()));
    gate(10_000, 0.0, |k| {
        let l = sample_ginibre(&base.member(k as u64))?;
        Ok((l.get(2, 5).conj() * l.get(2, 6)).re)
    });
    gate(10_000, 0.0, |k| {
        let l = sample_ginibre(&base.member(k as u64))?;
        Ok((l.get(1, 3).conj() * l.get(3, 1)).im)
    });
}

#[test]
fn scalar_ginibre_variance() {
    let base = spec(EnsembleKind::ComplexGinibre, 1, 4.0);
    gate(10_000, 4.0, |k| Ok(sample_ginibre(&base.member(k as u64))?.get(0, 0).norm_sqr()));
}

#[test]
fn haar_marginal() {
    let base = spec(EnsembleKind::HaarUnitary, 2, 1.0);
    gate(10_000, 0.5, |k| Ok(sample_haar_unitary(&base.member(k as u64))?.get(0, 0).norm_sqr()));
}

#[test]
fn normal_eigenvalue_second_moment() {
    // finite-N Ginibre eigenvalues: ⟨|τ|²⟩ = v(N + 1)/(2N), tending to the
    // uniform-disk value v/2
    let n = 64;
    let base = spec(EnsembleKind::RandomNormal, n, 1.0);
    gate(1000, (n as f64 + 1.0) / (2.0 * n as f64), |k| {
        let taus = sample_normal_eigenvalues(&base.member(k as u64))?;
        Ok(taus.iter().map(|t| t.norm_sqr()).sum::<f64>() / n as f64)
    });
}

#[test]
fn normal_eigenvalues_fill_the_unit_disk() {
    let taus = sample_normal_eigenvalues(&spec(EnsembleKind::RandomNormal, 500, 1.0)).unwrap();
    let outside = taus.iter().filter(|t| t.norm() > 1.05).count();
    assert!(outside <= 5, "{outside} eigenvalues outside the disk");
    // uniform density: the disk of radius 1/√2 holds half of them
    let inner = taus.iter().filter(|t| t.norm_sqr() < 0.5).count() as f64 / 500.0;
    assert!((inner - 0.5).abs() < 0.05, "{inner}");
}

fn sup_cdf_error(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(k, &x)| {
            let c = cdf(x);
            (c - k as f64 / n).abs().max((c - (k + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn gue_follows_the_semicircle() {
    let lam = sample_gue(&spec(EnsembleKind::Gue, 256, 1.0)).unwrap().hermitian_eigenvalues().unwrap();
    let cdf = |x: f64| {
        let x = x.clamp(-2.0, 2.0);
        0.5 + x * (4.0 - x * x).sqrt() / (4.0 * PI) + (x / 2.0).asin() / PI
    };
    let err = sup_cdf_error(lam, cdf);
    assert!(err < 0.02, "{err}");
}

#[test]
fn wishart_follows_marchenko_pastur() {
    let l = sample_ginibre(&spec(EnsembleKind::ComplexGinibre, 256, 1.0)).unwrap();
    let u = l.gram().hermitian_eigenvalues().unwrap();
    assert!(u.iter().all(|&x| x > -1e-12 && x < 4.0 + 0.2));
    let cdf = |x: f64| {
        let x = x.clamp(0.0, 4.0);
        // substitute x = w² to remove the 1/√x edge
        integrate(|w: f64| 2.0 * w * mp_density(w * w, 1.0), 0.0, x.sqrt(), 1e-12, 1e-10).unwrap().value
    };
    let err = sup_cdf_error(u, cdf);
    assert!(err < 0.02, "{err}");
}

#[test]
fn determinism_across_thread_counts() {
    let base = spec(EnsembleKind::RandomNormal, 6, 1.3);
    let draw = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| map_samples(40, |k| Ok(sample_normal(&base.member(k as u64))?.to_row_major())).unwrap())
    };
    let one = draw(1);
    assert_eq!(one, draw(3));
    assert_eq!(one, draw(1));
}
