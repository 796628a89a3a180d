//! Seeded sampling of GUE, complex Ginibre, random normal and Haar unitary matrices.
//!
//! Every entry has ⟨|X_ij|²⟩ = v/N; complex entries split the variance evenly
//! between real and imaginary parts. GUE diagonals are real with variance v/N.

use faer::Mat;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::matrix::ComplexMatrix;
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleKind {
    #[serde(alias = "GUE")]
    Gue,
    #[serde(alias = "ginibre", alias = "ComplexGinibre")]
    ComplexGinibre,
    #[serde(alias = "normal", alias = "RandomNormal")]
    RandomNormal,
    #[serde(alias = "haar", alias = "HaarUnitary")]
    HaarUnitary,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub dim: usize,
    pub variance: f64,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, dim: usize, variance: f64, seed: u64) -> Result<Self> {
        let spec = Self {
            kind,
            dim,
            variance,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if !(self.variance > 0.0) || !self.variance.is_finite() {
            return Err(invalid("variance", format!("must be positive and finite, got {}", self.variance)));
        }
        Ok(())
    }

    /// Spec for the `index`-th member of an ensemble keyed by this spec's seed.
    pub fn member(&self, index: u64) -> Self {
        Self {
            seed: derive_seed(self.seed, index),
            ..*self
        }
    }

    /// Same seed and dimension, different kind.
    pub fn with_kind(&self, kind: EnsembleKind) -> Self {
        Self { kind, ..*self }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent sub-seed for sample `index` under `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master) ^ splitmix64(index.wrapping_add(0x5851_f42d_4c95_7f2d)))
}

fn require_kind(spec: &EnsembleSpec, kind: EnsembleKind) -> Result<()> {
    spec.validate()?;
    if spec.kind != kind {
        return Err(invalid("kind", format!("expected {kind:?}, got {:?}", spec.kind)));
    }
    Ok(())
}

fn complex_gaussian(rng: &mut ChaCha8Rng, sigma: f64) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(sigma * re, sigma * im)
}

fn ginibre_from(rng: &mut ChaCha8Rng, n: usize, variance: f64) -> Mat<C64> {
    let sigma = (variance / (2.0 * n as f64)).sqrt();
    let mut m = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = complex_gaussian(rng, sigma);
        }
    }
    m
}

fn haar_from(rng: &mut ChaCha8Rng, n: usize) -> Mat<C64> {
    let g = ginibre_from(rng, n, n as f64);
    let qr = g.qr();
    let mut q = qr.compute_Q();
    let r = qr.R();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn sample_gue(spec: &EnsembleSpec) -> Result<ComplexMatrix> {
    require_kind(spec, EnsembleKind::Gue)?;
    let n = spec.dim;
    let mut rng = spec.rng();
    let sigma_off = (spec.variance / (2.0 * n as f64)).sqrt();
    let sigma_diag = (spec.variance / n as f64).sqrt();
    let mut h = Mat::zeros(n, n);
    for i in 0..n {
        let d: f64 = StandardNormal.sample(&mut rng);
        h[(i, i)] = C64::new(sigma_diag * d, 0.0);
        for j in (i + 1)..n {
            let z = complex_gaussian(&mut rng, sigma_off);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    Ok(ComplexMatrix::from_faer_unchecked(h))
}

pub fn sample_ginibre(spec: &EnsembleSpec) -> Result<ComplexMatrix> {
    require_kind(spec, EnsembleKind::ComplexGinibre)?;
    let mut rng = spec.rng();
    Ok(ComplexMatrix::from_faer_unchecked(ginibre_from(&mut rng, spec.dim, spec.variance)))
}

pub fn sample_haar_unitary(spec: &EnsembleSpec) -> Result<ComplexMatrix> {
    require_kind(spec, EnsembleKind::HaarUnitary)?;
    let mut rng = spec.rng();
    Ok(ComplexMatrix::from_faer_unchecked(haar_from(&mut rng, spec.dim)))
}

/// Random normal matrix `U diag(τ) U†` together with its eigenvalues τ.
///
/// τ are the eigenvalues of an independent Ginibre draw and U is Haar, which
/// reproduces the joint eigenvalue density of the normal ensemble exactly.
pub fn sample_normal_with_eigenvalues(spec: &EnsembleSpec) -> Result<(ComplexMatrix, Vec<C64>)> {
    require_kind(spec, EnsembleKind::RandomNormal)?;
    let n = spec.dim;
    let mut rng = spec.rng();
    let g = ComplexMatrix::from_faer_unchecked(ginibre_from(&mut rng, n, spec.variance));
    let taus = g.eigenvalues()?;
    let u = haar_from(&mut rng, n);
    let ud = Mat::from_fn(n, n, |i, j| u[(i, j)] * taus[j]);
    let l = &ud * u.adjoint();
    Ok((ComplexMatrix::from_faer_unchecked(l), taus))
}

pub fn sample_normal(spec: &EnsembleSpec) -> Result<ComplexMatrix> {
    Ok(sample_normal_with_eigenvalues(spec)?.0)
}

/// Eigenvalues τ of a random normal matrix, skipping the conjugation by U.
pub fn sample_normal_eigenvalues(spec: &EnsembleSpec) -> Result<Vec<C64>> {
    require_kind(spec, EnsembleKind::RandomNormal)?;
    let mut rng = spec.rng();
    let g = ComplexMatrix::from_faer_unchecked(ginibre_from(&mut rng, spec.dim, spec.variance));
    g.eigenvalues()
}

/// Dispatches on `spec.kind`.
pub fn sample(spec: &EnsembleSpec) -> Result<ComplexMatrix> {
    match spec.kind {
        EnsembleKind::Gue => sample_gue(spec),
        EnsembleKind::ComplexGinibre => sample_ginibre(spec),
        EnsembleKind::RandomNormal => sample_normal(spec),
        EnsembleKind::HaarUnitary => sample_haar_unitary(spec),
    }
}
