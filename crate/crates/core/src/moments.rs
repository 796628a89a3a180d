//! Trace and matrix moments of generators, and their large-N closed forms.

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::ensembles::{sample_ginibre, EnsembleKind, EnsembleSpec};
use crate::error::{invalid, Result};
use crate::matrix::ComplexMatrix;
use crate::spectral::{eigenvalues, map_samples, mean_stderr, ComplexSpectrum};
use crate::specfun::ln_gamma;
use crate::superop::{dissipator_terms, KronSum, SuperopKind, Superoperator};
use crate::C64;

/// Ensemble-averaged trace moments, stored under both normalizations:
/// ⟨tr Sⁿ⟩/N² and ⟨tr Sⁿ⟩/(N² − 1).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentTable {
    pub dim: usize,
    pub orders: Vec<usize>,
    pub per_n2: Vec<f64>,
    pub per_n2_stderr: Vec<f64>,
    pub per_n2_minus_1: Vec<f64>,
    pub per_n2_minus_1_stderr: Vec<f64>,
    /// Largest |Im| of the per-sample normalized moments.
    pub imag_max: Vec<f64>,
    pub samples: usize,
}

/// Least-squares coefficients of ⟨(Sⁿ)_{ij,kl}⟩ on δ_ik δ_jl (A), δ_ij δ_kl (B)
/// and δ_il δ_jk (C).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixMomentDecomposition {
    pub order: usize,
    pub dim: usize,
    pub samples: usize,
    pub a: f64,
    pub a_stderr: f64,
    pub b: f64,
    pub b_stderr: f64,
    pub c: f64,
    pub c_stderr: f64,
}

fn dense_power(m: &Mat<C64>, n: usize) -> Mat<C64> {
    let d = m.nrows();
    let mut p = Mat::<C64>::identity(d, d);
    for _ in 0..n {
        p = &p * m;
    }
    p
}

/// (1/N²) tr Sⁿ by repeated dense multiplication.
pub fn trace_moment(s: &Superoperator, n: usize) -> C64 {
    let nn = (s.dim() * s.dim()) as f64;
    if n == 0 {
        return C64::new(1.0, 0.0);
    }
    let p = dense_power(s.matrix(), n - 1);
    // tr(P S) without forming the last product
    let m = s.matrix();
    let d = m.nrows();
    let mut tr = C64::new(0.0, 0.0);
    for i in 0..d {
        for k in 0..d {
            tr += p[(i, k)] * m[(k, i)];
        }
    }
    tr / nn
}

/// (1/D) Σ zⁿ over a spectrum of D values.
pub fn trace_moment_from_spectrum(spec: &ComplexSpectrum, n: usize) -> C64 {
    let d = spec.len() as f64;
    spec.values.iter().map(|z| z.powu(n as u32)).sum::<C64>() / d
}

/// (1/N²) tr Sⁿ from the Kronecker-term form; costs (#terms)ⁿ products of
/// N×N matrices instead of N⁶ work per power.
pub fn trace_moment_kron(s: &KronSum, n: usize) -> C64 {
    s.trace_power(n) / (s.dim * s.dim) as f64
}

/// (−1)ⁿ (1/N²) Σᵢⱼ (uᵢ + uⱼ)ⁿ, u the eigenvalues of M = Σₐ Lₐ†Lₐ.
pub fn noncrossing_moment(jumps: &[ComplexMatrix], n: usize) -> Result<f64> {
    let first = jumps.first().ok_or_else(|| invalid("jumps", "need at least one jump operator"))?;
    let dim = first.dim();
    let mut m = ComplexMatrix::zeros(dim);
    for l in jumps {
        if l.dim() != dim {
            return Err(crate::Error::ShapeMismatch { expected: dim, got: l.dim() });
        }
        m = m.add(&l.gram());
    }
    let u = m.hermitian_eigenvalues()?;
    Ok(noncrossing_moment_from_eigenvalues(&u, n))
}

/// Same as [`noncrossing_moment`] from the eigenvalues of M, via power sums:
/// Σᵢⱼ (uᵢ + uⱼ)ⁿ = Σ_q C(n, q) p_q p_{n−q}.
pub fn noncrossing_moment_from_eigenvalues(u: &[f64], n: usize) -> f64 {
    let dim = u.len() as f64;
    let p: Vec<f64> = (0..=n).map(|q| u.iter().map(|x| x.powi(q as i32)).sum()).collect();
    let mut binom = 1.0;
    let mut total = 0.0;
    for q in 0..=n {
        total += binom * p[q] * p[n - q];
        binom = binom * (n - q) as f64 / (q + 1) as f64;
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    sign * total / (dim * dim)
}

fn catalan(n: usize) -> f64 {
    let mut c = 1.0f64;
    for k in 0..n {
        c = c * (2 * (2 * k + 1)) as f64 / (k + 2) as f64;
    }
    c
}

/// Normalized Wishart moment ⟨(1/N) tr (L†L)ⁿ⟩ at large N: the Catalan number Cₙ vⁿ,
/// equal to (2(4v)ⁿ/π) B(n+1/2, 3/2).
pub fn wishart_moment(n: usize, v: f64) -> f64 {
    if n <= 29 {
        return catalan(n) * v.powi(n as i32);
    }
    let nf = n as f64;
    let ln_b = ln_gamma(nf + 0.5) + ln_gamma(1.5) - ln_gamma(nf + 2.0);
    2.0 / std::f64::consts::PI * (nf * (4.0 * v).ln() + ln_b).exp()
}

/// Large-N moments of the GUE dissipator spectrum,
/// 4^{2k+1} Γ(k+1/2) Γ(k+3/2) / (π Γ(k+2) Γ(k+3)) vᵏ = C_k C_{k+1} vᵏ.
pub fn semicircle_dissipator_moment(k: usize, v: f64) -> f64 {
    if k <= 28 {
        return catalan(k) * catalan(k + 1) * v.powi(k as i32);
    }
    let kf = k as f64;
    let ln = (2.0 * kf + 1.0) * 4f64.ln() + ln_gamma(kf + 0.5) + ln_gamma(kf + 1.5)
        - std::f64::consts::PI.ln()
        - ln_gamma(kf + 2.0)
        - ln_gamma(kf + 3.0);
    (ln + kf * v.ln()).exp()
}

/// Orders above this are taken from the spectrum.
const MAX_WORD_ORDER: usize = 6;

/// Monte Carlo trace moments for orders `orders` over `samples` generators
/// returned by `build(index)`.
pub fn moment_table<F>(orders: &[usize], samples: usize, build: F) -> Result<MomentTable>
where
    F: Fn(usize) -> Result<KronSum> + Sync,
{
    if samples == 0 {
        return Err(invalid("samples", "at least one sample is required"));
    }
    let per_sample = map_samples(samples, |k| {
        let s = build(k)?;
        // high powers go through the spectrum instead of products of words
        let spec = if orders.iter().any(|&n| n > MAX_WORD_ORDER) {
            Some(eigenvalues(&Superoperator::from_kron(&s, SuperopKind::Other))?)
        } else {
            None
        };
        let row = orders
            .iter()
            .map(|&n| match &spec {
                Some(sp) if n > MAX_WORD_ORDER => trace_moment_from_spectrum(sp, n),
                _ => trace_moment_kron(&s, n),
            })
            .collect::<Vec<_>>();
        Ok((s.dim, row))
    })?;
    let dim = per_sample[0].0;
    let n2 = (dim * dim) as f64;
    let mut table = MomentTable {
        dim,
        orders: orders.to_vec(),
        per_n2: Vec::new(),
        per_n2_stderr: Vec::new(),
        per_n2_minus_1: Vec::new(),
        per_n2_minus_1_stderr: Vec::new(),
        imag_max: Vec::new(),
        samples,
    };
    for (p, _) in orders.iter().enumerate() {
        let xs: Vec<f64> = per_sample.iter().map(|(_, m)| m[p].re).collect();
        let (mean, err) = mean_stderr(&xs);
        table.per_n2.push(mean);
        table.per_n2_stderr.push(err);
        let r = if dim > 1 { n2 / (n2 - 1.0) } else { f64::NAN };
        table.per_n2_minus_1.push(mean * r);
        table.per_n2_minus_1_stderr.push(err * r);
        table.imag_max.push(per_sample.iter().fold(0.0f64, |a, (_, m)| a.max(m[p].im.abs())));
    }
    Ok(table)
}

/// Projects one N²×N² tensor onto the three Kronecker structures by solving
/// the 3×3 Gram system (diagonal N², off-diagonal N).
pub fn project_kronecker_structures(t: &Mat<C64>, dim: usize) -> [C64; 3] {
    let n = dim;
    let mut tr = C64::new(0.0, 0.0);
    let mut jj = C64::new(0.0, 0.0);
    let mut pp = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            tr += t[(i * n + j, i * n + j)];
            jj += t[(i * n + i, j * n + j)];
            pp += t[(i * n + j, j * n + i)];
        }
    }
    let d = (n * n) as f64;
    let o = n as f64;
    // [[d,o,o],[o,d,o],[o,o,d]]⁻¹ = (1/((d−o)(d+2o))) [[d+o, −o, −o], ...]
    let det = (d - o) * (d + 2.0 * o);
    if det == 0.0 {
        // N = 1: the three structures coincide
        return [tr, C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
    }
    let diag = (d + o) / det;
    let off = -o / det;
    [
        tr * diag + (jj + pp) * off,
        jj * diag + (tr + pp) * off,
        pp * diag + (tr + jj) * off,
    ]
}

/// Matrix moments of the Ginibre simple dissipator 𝓓ⁿ at dimension `dim`.
pub fn matrix_moment_decompose(
    order: usize,
    dim: usize,
    variance: f64,
    samples: usize,
    seed: u64,
) -> Result<MatrixMomentDecomposition> {
    if samples == 0 {
        return Err(invalid("samples", "at least one sample is required"));
    }
    let base = EnsembleSpec::new(EnsembleKind::ComplexGinibre, dim, variance, seed)?;
    let coeffs = map_samples(samples, |k| {
        let l = sample_ginibre(&base.member(k as u64))?;
        let s = dissipator_terms(&l, 1.0)?.to_dense();
        let p = dense_power(&s, order);
        Ok(project_kronecker_structures(&p, dim))
    })?;
    let col = |idx: usize| -> (f64, f64) {
        let xs: Vec<f64> = coeffs.iter().map(|c| c[idx].re).collect();
        mean_stderr(&xs)
    };
    let (a, a_stderr) = col(0);
    let (b, b_stderr) = col(1);
    let (c, c_stderr) = col(2);
    Ok(MatrixMomentDecomposition {
        order,
        dim,
        samples,
        a,
        a_stderr,
        b,
        b_stderr,
        c,
        c_stderr,
    })
}
