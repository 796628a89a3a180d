//! Superoperator spectra, spectral gaps and dissipative form factors.

use faer::Mat;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::superop::Superoperator;
use crate::C64;

/// Eigenvalues of a superoperator (or any fast-path equivalent).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexSpectrum {
    /// System dimension N; the spectrum normally holds N² values.
    pub system_dim: usize,
    pub values: Vec<C64>,
    /// Normwise backward-error bound of the eigensolve (0 for closed forms).
    pub backward_error: f64,
}

impl ComplexSpectrum {
    pub fn new(system_dim: usize, values: Vec<C64>) -> Self {
        Self {
            system_dim,
            values,
            backward_error: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, z| m.max(z.norm()))
    }

    /// 10⁻⁸ times the spectral radius, floored at 10⁻¹².
    pub fn default_zero_tol(&self) -> f64 {
        (1e-8 * self.spectral_radius()).max(1e-12)
    }

    pub fn zero_count(&self, zero_tol: f64) -> usize {
        self.values.iter().filter(|z| z.norm() <= zero_tol).count()
    }

    pub fn max_real(&self) -> f64 {
        self.values.iter().fold(f64::NEG_INFINITY, |m, z| m.max(z.re))
    }

    /// Values sorted by (re, im).
    pub fn sorted(&self) -> Vec<C64> {
        let mut v = self.values.clone();
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    /// max over z of min over z' of |z' − z̄|.
    pub fn conjugate_pair_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for z in &self.values {
            let target = z.conj();
            let best = self.values.iter().fold(f64::INFINITY, |m, w| m.min((w - target).norm()));
            worst = worst.max(best);
        }
        worst
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapEstimate {
    pub gap: f64,
    pub zero_count: usize,
    pub zero_tol: f64,
}

/// Monotone grid of non-negative times.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    times: Vec<f64>,
}

impl TimeGrid {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.is_empty() {
            return Err(invalid("times", "grid is empty"));
        }
        if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return Err(invalid("times", "times must be finite and non-negative"));
        }
        if times.windows(2).any(|w| w[1] < w[0]) {
            return Err(invalid("times", "times must be non-decreasing"));
        }
        Ok(Self { times })
    }

    pub fn linear(t_min: f64, t_max: f64, points: usize) -> Result<Self> {
        if points < 2 {
            return Self::new(vec![t_min]);
        }
        let h = (t_max - t_min) / (points - 1) as f64;
        Self::new((0..points).map(|k| t_min + h * k as f64).collect())
    }

    pub fn log(t_min: f64, t_max: f64, points: usize) -> Result<Self> {
        if !(t_min > 0.0) {
            return Err(invalid("t_min", "log grids need t_min > 0"));
        }
        if points < 2 {
            return Self::new(vec![t_min]);
        }
        let (a, b) = (t_min.ln(), t_max.ln());
        let h = (b - a) / (points - 1) as f64;
        Self::new((0..points).map(|k| (a + h * k as f64).exp()).collect())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Form factor values on a time grid with sampling statistics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormFactorSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    /// Largest imaginary part magnitude seen at each time.
    pub imag: Vec<f64>,
    pub stderr: Vec<f64>,
    pub n_samples: usize,
    pub dim: usize,
}

/// Dense eigenvalues of `s`.
///
/// Hermiticity-preserving generators are first rotated to the orthonormal
/// hermitian basis {E_dd, (E_ij+E_ji)/√2, i(E_ij−E_ji)/√2}, where they are
/// real, and solved with the cheaper real Hessenberg–QR.
pub fn eigenvalues(s: &Superoperator) -> Result<ComplexSpectrum> {
    let n = s.dim();
    let nn = n * n;
    let norm = s.max_abs();
    for c in 0..nn {
        for r in 0..nn {
            let z = s.matrix()[(r, c)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { row: r, col: c });
            }
        }
    }
    let values = if s.is_hermiticity_preserving(1e-12) {
        let r = real_form(s);
        r.eigenvalues().map_err(|_| Error::EigenNonConvergence { dim: nn, norm })?
    } else {
        s.matrix()
            .eigenvalues()
            .map_err(|_| Error::EigenNonConvergence { dim: nn, norm })?
    };
    let frob = s.matrix().norm_l2();
    let backward_error = nn as f64 * f64::EPSILON * frob;
    let sum: C64 = values.iter().sum();
    let residual = (sum - s.trace()).norm();
    if !(residual <= 1e-8 * nn as f64 * norm.max(f64::MIN_POSITIVE)) && nn > 0 {
        return Err(Error::EigenNonConvergence { dim: nn, norm });
    }
    Ok(ComplexSpectrum {
        system_dim: n,
        values,
        backward_error,
    })
}

fn hermitian_basis(n: usize) -> Vec<[(usize, C64); 2]> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let zero = (0usize, C64::new(0.0, 0.0));
    let mut basis = Vec::with_capacity(n * n);
    for i in 0..n {
        basis.push([(i * n + i, C64::new(1.0, 0.0)), zero]);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            basis.push([(i * n + j, C64::new(h, 0.0)), (j * n + i, C64::new(h, 0.0))]);
            basis.push([(i * n + j, C64::new(0.0, h)), (j * n + i, C64::new(0.0, -h))]);
        }
    }
    basis
}

/// V† S V in the hermitian basis; real for hermiticity-preserving S.
pub fn real_form(s: &Superoperator) -> Mat<f64> {
    let n = s.dim();
    let basis = hermitian_basis(n);
    let m = s.matrix();
    let nn = n * n;
    Mat::from_fn(nn, nn, |a, b| {
        let mut acc = 0.0;
        for &(p, cp) in &basis[a] {
            if cp.re == 0.0 && cp.im == 0.0 {
                continue;
            }
            for &(q, cq) in &basis[b] {
                if cq.re == 0.0 && cq.im == 0.0 {
                    continue;
                }
                acc += (cp.conj() * m[(p, q)] * cq).re;
            }
        }
        acc
    })
}

/// Spectral gap −max Re z over |z| > zero_tol.
pub fn spectral_gap(spec: &ComplexSpectrum, zero_tol: f64) -> Result<GapEstimate> {
    let zero_count = spec.zero_count(zero_tol);
    let mut best: Option<C64> = None;
    for z in spec.values.iter().filter(|z| z.norm() > zero_tol) {
        if best.map_or(true, |b| z.re > b.re) {
            best = Some(*z);
        }
    }
    let top = best.ok_or(Error::DegenerateSpectrum { zero_tol })?;
    if top.re > zero_tol {
        return Err(Error::NonDissipative { re: top.re, tol: zero_tol });
    }
    if top.re >= -zero_tol {
        return Err(Error::PurelyImaginaryMode {
            value: format!("{top}"),
        });
    }
    Ok(GapEstimate {
        gap: -top.re,
        zero_count,
        zero_tol,
    })
}

/// (1/D) Σ exp(z t) for one spectrum; D is the number of eigenvalues.
pub fn dff_from_spectrum(spec: &ComplexSpectrum, times: &TimeGrid) -> Result<FormFactorSeries> {
    let (values, imag) = trace_propagator(spec, times)?;
    for (t, im) in times.times().iter().zip(&imag) {
        if *im > 1e-8 {
            return Err(Error::ComplexFormFactor { t: *t, imag: *im });
        }
    }
    Ok(FormFactorSeries {
        times: times.times().to_vec(),
        values,
        stderr: vec![0.0; times.len()],
        imag,
        n_samples: 1,
        dim: spec.system_dim,
    })
}

fn trace_propagator(spec: &ComplexSpectrum, times: &TimeGrid) -> Result<(Vec<f64>, Vec<f64>)> {
    if spec.is_empty() {
        return Err(invalid("spectrum", "spectrum is empty"));
    }
    let tol = 1e-8 * spec.spectral_radius().max(1.0);
    let max_re = spec.max_real();
    if max_re > tol {
        return Err(Error::NonDissipative { re: max_re, tol });
    }
    // smallest contributions first
    let mut z = spec.values.clone();
    z.sort_by(|a, b| a.re.total_cmp(&b.re));
    let d = z.len() as f64;
    let mut values = Vec::with_capacity(times.len());
    let mut imag = Vec::with_capacity(times.len());
    for &t in times.times() {
        let (mut sr, mut cr, mut si, mut ci) = (0.0, 0.0, 0.0, 0.0);
        for zi in &z {
            let e = if t == 0.0 { C64::new(1.0, 0.0) } else { (zi * t).exp() };
            neumaier(&mut sr, &mut cr, e.re);
            neumaier(&mut si, &mut ci, e.im);
        }
        values.push((sr + cr) / d);
        imag.push(((si + ci) / d).abs());
    }
    Ok((values, imag))
}

fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

/// z_ij = −|τᵢ|² − |τⱼ|² + 2 τᵢ τ̄ⱼ for a normal jump operator with eigenvalues τ.
pub fn normal_dissipator_spectrum(taus: &[C64]) -> ComplexSpectrum {
    let n = taus.len();
    let mut values = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            values.push(if i == j {
                C64::new(0.0, 0.0)
            } else {
                2.0 * taus[i] * taus[j].conj() - taus[i].norm_sqr() - taus[j].norm_sqr()
            });
        }
    }
    ComplexSpectrum::new(n, values)
}

/// z_ij = −(τᵢ − τⱼ)² for a hermitian jump operator with eigenvalues τ.
pub fn hermitian_dissipator_spectrum(taus: &[f64]) -> ComplexSpectrum {
    let n = taus.len();
    let mut values = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let d = taus[i] - taus[j];
            values.push(C64::new(-d * d, 0.0));
        }
    }
    ComplexSpectrum::new(n, values)
}

/// Runs `f(0..n)` in parallel and returns results in index order; the first
/// failure (lowest index) is reported with its sample index.
pub fn map_samples<T, F>(n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync,
{
    let results: Vec<Result<T>> = (0..n).into_par_iter().map(&f).collect();
    results
        .into_iter()
        .enumerate()
        .map(|(index, r)| {
            r.map_err(|e| Error::Sample {
                index,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Mean and standard error of the mean, accumulated in the given order.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Ensemble-averaged form factor over `n_samples` spectra from `sample(index)`.
pub fn ensemble_dff<F>(n_samples: usize, times: &TimeGrid, sample: F) -> Result<FormFactorSeries>
where
    F: Fn(usize) -> Result<ComplexSpectrum> + Sync,
{
    if n_samples == 0 {
        return Err(invalid("n_samples", "at least one sample is required"));
    }
    let per_sample = map_samples(n_samples, |k| {
        let spec = sample(k)?;
        let series = dff_from_spectrum(&spec, times)?;
        Ok((spec.system_dim, series))
    })?;
    let dim = per_sample[0].0;
    let mut values = Vec::with_capacity(times.len());
    let mut stderr = Vec::with_capacity(times.len());
    let mut imag = Vec::with_capacity(times.len());
    for p in 0..times.len() {
        let xs: Vec<f64> = per_sample.iter().map(|(_, s)| s.values[p]).collect();
        let (m, e) = mean_stderr(&xs);
        values.push(m);
        stderr.push(e);
        imag.push(per_sample.iter().fold(0.0f64, |a, (_, s)| a.max(s.imag[p])));
    }
    Ok(FormFactorSeries {
        times: times.times().to_vec(),
        values,
        imag,
        stderr,
        n_samples,
        dim,
    })
}

/// Average fidelity of an initially pure state, (1 + N F)/(N + 1).
pub fn fidelity_from_dff(f: f64, n: usize) -> f64 {
    let n = n as f64;
    (1.0 + n * f) / (n + 1.0)
}

/// Autocorrelation C(t) = (N² F − 1)/(N² − 1) · C(0).
pub fn autocorr_from_dff(f: f64, n: usize, c0: f64) -> Result<f64> {
    if n < 2 {
        return Err(invalid("n", format!("need N >= 2, got {n}")));
    }
    let n2 = (n * n) as f64;
    Ok((n2 * f - 1.0) / (n2 - 1.0) * c0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelfAveragingRow {
    pub dim: usize,
    pub mean: f64,
    pub variance: f64,
    pub n_samples: usize,
}

/// Sample variance of tr e^{tS}/N² for each dimension in `dims`.
pub fn self_averaging_test<F>(dims: &[usize], t: f64, n_samples: usize, sample: F) -> Result<Vec<SelfAveragingRow>>
where
    F: Fn(usize, usize) -> Result<ComplexSpectrum> + Sync,
{
    if !(t > 0.0) {
        return Err(invalid("t", format!("must be positive, got {t}")));
    }
    if n_samples < 2 {
        return Err(invalid("n_samples", "variance needs at least two samples"));
    }
    let grid = TimeGrid::new(vec![t])?;
    dims.iter()
        .map(|&n| {
            let xs = map_samples(n_samples, |k| {
                let spec = sample(n, k)?;
                Ok(trace_propagator(&spec, &grid)?.0[0])
            })?;
            let m = xs.len() as f64;
            let mean = xs.iter().sum::<f64>() / m;
            let variance = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
            Ok(SelfAveragingRow {
                dim: n,
                mean,
                variance,
                n_samples,
            })
        })
        .collect()
}
