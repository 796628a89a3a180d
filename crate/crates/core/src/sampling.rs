//! Per-sample spectra of the generator families used in experiments, keyed
//! by (master seed, sample index) so that any sample can be regenerated alone.

use serde::{Deserialize, Serialize};

use crate::ensembles::{
    sample_ginibre, sample_gue, sample_normal_eigenvalues, EnsembleKind, EnsembleSpec,
};
use crate::error::{invalid, Result};
use crate::spectral::{
    eigenvalues, hermitian_dissipator_spectrum, map_samples, mean_stderr, normal_dissipator_spectrum,
    spectral_gap, ComplexSpectrum,
};
use crate::superop::{lindbladian, multi_dissipator, simple_dissipator};
use crate::C64;

/// Channel offsets so H and each Lₐ of one sample draw from independent streams.
pub const CHANNEL_H: u64 = 0;
pub const CHANNEL_L: u64 = 1;

/// Ensemble spec for one channel of sample `index`.
pub fn member_spec(kind: EnsembleKind, dim: usize, v: f64, seed: u64, index: usize, channel: u64) -> Result<EnsembleSpec> {
    Ok(EnsembleSpec::new(kind, dim, v, seed)?.member(index as u64).member(channel))
}

/// Spectrum of the simple dissipator with a jump operator of the given kind.
/// Normal and GUE jumps use their closed-form spectra; Ginibre jumps need the
/// dense N² × N² eigensolve.
pub fn dissipator_spectrum(kind: EnsembleKind, dim: usize, v: f64, seed: u64, index: usize) -> Result<ComplexSpectrum> {
    let spec = member_spec(kind, dim, v, seed, index, CHANNEL_L)?;
    match kind {
        EnsembleKind::RandomNormal => Ok(normal_dissipator_spectrum(&sample_normal_eigenvalues(&spec)?)),
        EnsembleKind::Gue => Ok(hermitian_dissipator_spectrum(&sample_gue(&spec)?.hermitian_eigenvalues()?)),
        EnsembleKind::ComplexGinibre => eigenvalues(&simple_dissipator(&sample_ginibre(&spec)?)?),
        EnsembleKind::HaarUnitary => Err(invalid("kind", "Haar unitary jumps give a trivial dissipator spectrum")),
    }
}

/// Spectrum of Σₐ 𝓓[Lₐ] with m independent Ginibre jumps.
pub fn multi_jump_spectrum(dim: usize, m: usize, v: f64, seed: u64, index: usize) -> Result<ComplexSpectrum> {
    if m == 0 {
        return Err(invalid("m", "need at least one jump"));
    }
    let jumps = (0..m)
        .map(|a| sample_ginibre(&member_spec(EnsembleKind::ComplexGinibre, dim, v, seed, index, CHANNEL_L + a as u64)?))
        .collect::<Result<Vec<_>>>()?;
    eigenvalues(&multi_dissipator(&jumps, &vec![1.0; m])?)
}

/// Eigenvalues of M = Σₐ Lₐ†Lₐ for m independent Ginibre jumps.
pub fn multi_jump_gram_eigenvalues(dim: usize, m: usize, v: f64, seed: u64, index: usize) -> Result<Vec<f64>> {
    let mut total = None;
    for a in 0..m {
        let l = sample_ginibre(&member_spec(EnsembleKind::ComplexGinibre, dim, v, seed, index, CHANNEL_L + a as u64)?)?;
        let g = l.gram();
        total = Some(match total {
            None => g,
            Some(t) => crate::ComplexMatrix::add(&t, &g),
        });
    }
    total.ok_or_else(|| invalid("m", "need at least one jump"))?.hermitian_eigenvalues()
}

/// Spectrum of −i[H, ·] + γ𝓓[L] with GUE H and Ginibre L.
pub fn simple_lindbladian_spectrum(dim: usize, gamma: f64, v: f64, seed: u64, index: usize) -> Result<ComplexSpectrum> {
    let h = sample_gue(&member_spec(EnsembleKind::Gue, dim, v, seed, index, CHANNEL_H)?)?;
    let l = sample_ginibre(&member_spec(EnsembleKind::ComplexGinibre, dim, v, seed, index, CHANNEL_L)?)?;
    eigenvalues(&lindbladian(&h, &[l], &[gamma])?)
}

/// Eigenvalues of iK = iH + γL†L, the rotated effective Hamiltonian of the
/// sample drawn by [`simple_lindbladian_spectrum`] with the same arguments.
pub fn effective_hamiltonian_eigenvalues(dim: usize, gamma: f64, v: f64, seed: u64, index: usize) -> Result<Vec<C64>> {
    let h = sample_gue(&member_spec(EnsembleKind::Gue, dim, v, seed, index, CHANNEL_H)?)?;
    let l = sample_ginibre(&member_spec(EnsembleKind::ComplexGinibre, dim, v, seed, index, CHANNEL_L)?)?;
    let ik = h.scale(C64::new(0.0, 1.0)).add(&l.gram().scale(C64::new(gamma, 0.0)));
    ik.eigenvalues()
}

/// Spectrum −i(λᵢ − λⱼ) of the LvN generator of a GUE Hamiltonian.
pub fn lvn_spectrum(dim: usize, v: f64, seed: u64, index: usize) -> Result<ComplexSpectrum> {
    let lam = sample_gue(&member_spec(EnsembleKind::Gue, dim, v, seed, index, CHANNEL_H)?)?.hermitian_eigenvalues()?;
    let mut values = Vec::with_capacity(dim * dim);
    for &a in &lam {
        for &b in &lam {
            values.push(C64::new(0.0, -(a - b)));
        }
    }
    Ok(ComplexSpectrum::new(dim, values))
}

/// Mean spectral gap at one dimension.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub dim: usize,
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

/// Average gap of the Ginibre simple dissipator for each dimension.
pub fn gap_scaling(dims: &[usize], v: f64, samples: usize, seed: u64) -> Result<Vec<GapRow>> {
    if samples == 0 {
        return Err(invalid("samples", "at least one sample is required"));
    }
    dims.iter()
        .map(|&n| {
            // each dimension gets its own stream
            let s = crate::ensembles::derive_seed(seed, n as u64);
            let gaps = map_samples(samples, |k| {
                let spec = dissipator_spectrum(EnsembleKind::ComplexGinibre, n, v, s, k)?;
                Ok(spectral_gap(&spec, spec.default_zero_tol())?.gap)
            })?;
            let (mean, stderr) = mean_stderr(&gaps);
            Ok(GapRow { dim: n, mean, stderr, samples })
        })
        .collect()
}

/// Least-squares fit of ln y = ln a + b ln x.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub exponent_stderr: f64,
    pub prefactor: f64,
    pub prefactor_stderr: f64,
}

pub fn power_law_fit(xs: &[f64], ys: &[f64]) -> Result<PowerLawFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(invalid("xs", "need at least two paired points"));
    }
    if xs.iter().chain(ys).any(|&x| !(x > 0.0)) {
        return Err(invalid("xs", "log-log fit needs positive data"));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let (se_b, se_a) = if lx.len() > 2 {
        let rss: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - a - b * x).powi(2)).sum();
        let s2 = rss / (n - 2.0);
        ((s2 / sxx).sqrt(), (s2 * (1.0 / n + mx * mx / sxx)).sqrt())
    } else {
        (0.0, 0.0)
    };
    let pre = a.exp();
    Ok(PowerLawFit { exponent: b, exponent_stderr: se_b, prefactor: pre, prefactor_stderr: pre * se_a })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_exact_power_law() {
        let xs = [8.0, 12.0, 16.0, 24.0, 32.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 5.0 * x.powf(-2.0)).collect();
        let f = power_law_fit(&xs, &ys).unwrap();
        assert!((f.exponent + 2.0).abs() < 1e-12);
        assert!((f.prefactor - 5.0).abs() < 1e-10);
        assert!(f.exponent_stderr < 1e-10);
    }

    #[test]
    fn fast_paths_match_dense_eigensolve() {
        use crate::ensembles::{sample_normal, sample_gue};
        use crate::superop::simple_dissipator;
        let n = 5;
        for kind in [EnsembleKind::RandomNormal, EnsembleKind::Gue] {
            let fast = dissipator_spectrum(kind, n, 1.0, 3, 2).unwrap();
            let spec = member_spec(kind, n, 1.0, 3, 2, CHANNEL_L).unwrap();
            let l = if kind == EnsembleKind::Gue { sample_gue(&spec) } else { sample_normal(&spec) }.unwrap();
            let dense = eigenvalues(&simple_dissipator(&l).unwrap()).unwrap();
            let key = |a: &C64, b: &C64| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im));
            let (mut x, mut y) = (fast.values.clone(), dense.values.clone());
            x.sort_by(key);
            y.sort_by(key);
            let d: f64 = x.iter().zip(&y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(d < 1e-9, "{kind:?}: {d}");
        }
    }

    #[test]
    fn lvn_fast_path_matches_dense() {
        let fast = lvn_spectrum(4, 1.0, 9, 0).unwrap();
        let h = sample_gue(&member_spec(EnsembleKind::Gue, 4, 1.0, 9, 0, CHANNEL_H).unwrap()).unwrap();
        let dense = eigenvalues(&crate::superop::lvn_generator(&h).unwrap()).unwrap();
        let mut a: Vec<f64> = fast.values.iter().map(|z| z.im).collect();
        let mut b: Vec<f64> = dense.values.iter().map(|z| z.im).collect();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-10));
    }

    #[test]
    fn samples_are_reproducible() {
        let a = simple_lindbladian_spectrum(3, 0.5, 1.0, 42, 7).unwrap();
        let b = simple_lindbladian_spectrum(3, 0.5, 1.0, 42, 7).unwrap();
        assert_eq!(a.values, b.values);
    }
}
