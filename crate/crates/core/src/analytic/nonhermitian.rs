//! Spectrum of the rotated effective Hamiltonian iK = iH + γ Σₐ Lₐ†Lₐ and the
//! form factor of the simple Lindbladian it controls.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::poly::Poly;
use crate::quad::integrate;
use crate::specfun::expint_e1_scaled;

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(invalid("gamma", format!("must be positive and finite, got {gamma}")));
    }
    Ok(())
}

/// y²(x) on the support boundary, for m channels:
/// 4m/(γx) − [m/x − γ/(1+γx) + 1/γ]². Negative means outside the support.
pub fn nh_support_m(x: f64, gamma: f64, m: usize) -> f64 {
    let p = 1.0 + gamma * x;
    -support_quartic(x, gamma, m) / (gamma * x * p).powi(2)
}

pub fn nh_support(x: f64, gamma: f64) -> f64 {
    nh_support_m(x, gamma, 1)
}

/// ρ(x) = (1/4π)[1/x² − γ²/(1+γx)² + 1], constant in y inside the support.
pub fn nh_density(x: f64, gamma: f64) -> f64 {
    let g = gamma / (1.0 + gamma * x);
    (1.0 / (x * x) - g * g + 1.0) / (4.0 * PI)
}

/// γ²x²(1+γx)²·(−y²), a quartic with the sign of −y² on x > 0.
///
/// Written as (A − B)(A + B) with A − B = (√x − √(mγ))²(1+γx) − γ²x, which
/// keeps its relative precision where y² is tiny against 4m/(γx).
fn support_quartic(x: f64, gamma: f64, m: usize) -> f64 {
    let mf = m as f64;
    let p = 1.0 + gamma * x;
    let a = mf * gamma + x + (mf - 1.0) * gamma * gamma * x + gamma * x * x;
    let b = 2.0 * (mf * gamma * x).sqrt() * p;
    let d = (x.sqrt() - (mf * gamma).sqrt()).powi(2) * p - gamma * gamma * x;
    d * (a + b)
}

/// Support intervals [x₀, x₁] on the positive axis where y² > 0.
pub fn nh_support_intervals(gamma: f64, m: usize) -> Result<Vec<(f64, f64)>> {
    check_gamma(gamma)?;
    if m == 0 {
        return Err(invalid("m", "need at least one channel"));
    }
    let mf = m as f64;
    // Cauchy bound on the positive roots of the expanded quartic
    let c = [
        mf * mf * gamma * gamma,
        2.0 * mf * gamma * (1.0 + (mf - 1.0) * gamma * gamma) - 4.0 * mf * gamma,
        (1.0 + (mf - 1.0) * gamma * gamma).powi(2) + 2.0 * mf * gamma * gamma - 8.0 * mf * gamma * gamma,
        2.0 * gamma * (1.0 + (mf - 1.0) * gamma * gamma) - 4.0 * mf * gamma.powi(3),
    ];
    let lead = gamma * gamma;
    let hi = 1.0 + c.iter().map(|x| (x / lead).abs()).fold(0.0, f64::max);
    let lo = hi * 1e-18;
    let f = |x: f64| support_quartic(x, gamma, m);
    // Support intervals can be far narrower than any fixed grid spacing (width
    // ~4γ² near x = γ at weak coupling), so the scan also visits the real parts
    // of the complex quartic roots and the midpoints between them.
    let quartic = Poly::from_real(&[c[0], c[1], c[2], c[3], lead]);
    let mut seeds: Vec<f64> = quartic
        .roots()?
        .into_iter()
        .map(|r| r.re)
        .filter(|&r| r > lo && r < hi)
        .collect();
    seeds.sort_by(f64::total_cmp);
    let mids: Vec<f64> = seeds.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let n = 4_000;
    let mut pts: Vec<f64> = (0..=n).map(|k| lo * (hi / lo).powf(k as f64 / n as f64)).collect();
    pts.extend(seeds);
    pts.extend(mids);
    pts.sort_by(f64::total_cmp);
    let mut roots = Vec::new();
    for w in pts.windows(2) {
        let (f0, f1) = (f(w[0]), f(w[1]));
        if (f0 > 0.0) != (f1 > 0.0) {
            roots.push((bisect(&f, w[0], w[1])?, f1 <= 0.0));
        }
    }
    let mut out = Vec::new();
    let mut open = None;
    for (r, entering) in roots {
        match (entering, open) {
            (true, None) => open = Some(r),
            (false, Some(a)) => {
                out.push((a, r));
                open = None;
            }
            _ => {}
        }
    }
    if out.is_empty() {
        return Err(Error::Bracketing { lo, hi });
    }
    Ok(out)
}

fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> Result<f64> {
    let mut fa = f(a);
    if (fa > 0.0) == (f(b) > 0.0) && fa != 0.0 {
        return Err(Error::Bracketing { lo: a, hi: b });
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if (fm > 0.0) == (fa > 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Spectral gap x_min(γ) of iK for a single channel.
pub fn nh_gap(gamma: f64) -> Result<f64> {
    multi_channel_nh_gap(gamma, 1)
}

/// Spectral gap with m independent channels.
pub fn multi_channel_nh_gap(gamma: f64, m: usize) -> Result<f64> {
    Ok(nh_support_intervals(gamma, m)?[0].0)
}

/// Gap on a coupling grid, with the outer support edge as a diagnostic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapCurve {
    pub gammas: Vec<f64>,
    pub x_min: Vec<f64>,
    pub x_max: Vec<f64>,
    pub intervals: Vec<usize>,
}

impl GapCurve {
    pub fn compute(gammas: &[f64], m: usize) -> Result<Self> {
        let mut curve = GapCurve { gammas: gammas.to_vec(), x_min: vec![], x_max: vec![], intervals: vec![] };
        for &g in gammas {
            let iv = nh_support_intervals(g, m)?;
            curve.x_min.push(iv[0].0);
            curve.x_max.push(iv[iv.len() - 1].1);
            curve.intervals.push(iv.len());
        }
        Ok(curve)
    }
}

/// ∫ f(x) dx over the support, with x = c − h cos θ on each interval so the
/// square-root edges of y(x) become smooth.
fn integrate_support(gamma: f64, f: impl Fn(f64) -> f64, abs_tol: f64) -> Result<f64> {
    let mut total = 0.0;
    for (a, b) in nh_support_intervals(gamma, 1)? {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let q = integrate(
            |th: f64| {
                let (s, co) = th.sin_cos();
                f(c - h * co) * h * s
            },
            0.0,
            PI,
            abs_tol,
            1e-12,
        )?;
        total += q.value;
    }
    Ok(total)
}

/// Total mass ∫ρ(x)·2y(x)dx of the density inside the support curve.
pub fn nh_mass(gamma: f64) -> Result<f64> {
    integrate_support(gamma, |x| 2.0 * nh_density(x, gamma) * nh_support(x, gamma).max(0.0).sqrt(), 1e-14)
}

/// M(t) = (2/t)∫ρ(x)e^{−xt} sin(y(x)t) dx over the support.
pub fn simple_lindbladian_mgf(t: f64, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(invalid("t", format!("must be positive; the t → 0 limit of F is 1, got {t}")));
    }
    // the bound sets the natural absolute scale
    let scale = (0.5 * ln_dff_upper_bound(t, gamma)?).exp() * t / 2.0;
    let v = integrate_support(
        gamma,
        |x| nh_density(x, gamma) * (-x * t).exp() * (nh_support(x, gamma).max(0.0).sqrt() * t).sin(),
        1e-11 * scale,
    )?;
    Ok(2.0 / t * v)
}

/// F(t) = M(t)²; F(0) = 1.
pub fn dff_simple_lindbladian(t: f64, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    if t == 0.0 {
        return Ok(1.0);
    }
    let m = simple_lindbladian_mgf(t, gamma)?;
    Ok(m * m)
}

/// 1 − y e^y E1(y), computed without cancellation at large y.
fn one_minus_y_s(y: f64) -> f64 {
    if y > 50.0 {
        let mut term = 1.0;
        let mut sum = 0.0;
        for k in 1..20 {
            term *= k as f64 / y;
            sum += if k % 2 == 1 { term } else { -term };
        }
        sum
    } else {
        1.0 - y * expint_e1_scaled(y)
    }
}

/// −e^{bt}I_b(t), the bracket of the antiderivative of ρ(x)e^{−xt}.
fn bracket(b: f64, t: f64, gamma: f64) -> f64 {
    let c = b + 1.0 / gamma;
    1.0 / t + one_minus_y_s(b * t) / b - one_minus_y_s(c * t) / c
}

/// ln of ((2/t)(1/4π)(I_{x_max} − I_{x_min}))².
pub fn ln_dff_upper_bound(t: f64, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(invalid("t", format!("the bound diverges at t = 0, got {t}")));
    }
    let iv = nh_support_intervals(gamma, 1)?;
    let (lo, hi) = (iv[0].0, iv[iv.len() - 1].1);
    let inner = bracket(lo, t, gamma) - (-(hi - lo) * t).exp() * bracket(hi, t, gamma);
    if !(inner > 0.0) {
        return Err(Error::Quadrature { est_error: inner });
    }
    Ok(2.0 * ((2.0 / t).ln() - lo * t + inner.ln() - (4.0 * PI).ln()))
}

pub fn dff_upper_bound(t: f64, gamma: f64) -> Result<f64> {
    Ok(ln_dff_upper_bound(t, gamma)?.exp())
}

/// Limit of ln(bound) + 2δt + 4 ln t as t → ∞, namely ln(4ρ(δ)²).
pub fn bound_tail_constant(gamma: f64) -> Result<f64> {
    let d = nh_gap(gamma)?;
    Ok((4.0 * nh_density(d, gamma).powi(2)).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    #[test]
    fn gap_asymptotes() {
        let g = 1e-3;
        assert!((nh_gap(g).unwrap() / g - 1.0).abs() < 0.05);
        let g = 1e4;
        assert!((nh_gap(g).unwrap() / (4.0 * g).powf(-1.0 / 3.0) - 1.0).abs() < 0.05);
        assert!((multi_channel_nh_gap(1e-3, 4).unwrap() / 4e-3 - 1.0).abs() < 0.05);
        assert!((multi_channel_nh_gap(1e3, 4).unwrap() / 1e3 - 1.0).abs() < 0.05);
    }

    #[test]
    fn gap_matches_quartic_roots() {
        let g: f64 = 1.0;
        let p = Poly::from_real(&[g * g, -2.0 * g, 1.0 - 6.0 * g * g, 2.0 * g * (1.0 - 2.0 * g * g), g * g]);
        let mut real: Vec<f64> = p
            .roots()
            .unwrap()
            .into_iter()
            .filter(|r: &C64| r.im.abs() < 1e-9 && r.re > 0.0)
            .map(|r| r.re)
            .collect();
        real.sort_by(f64::total_cmp);
        let x = nh_gap(g).unwrap();
        assert!((x - real[0]).abs() < 1e-8, "{x} vs {real:?}");
        assert!(nh_support(x, g).abs() < 1e-6);
    }

    #[test]
    fn single_channel_is_m_equal_one() {
        for &g in &[0.01, 0.3, 2.0, 50.0] {
            assert!((nh_gap(g).unwrap() - multi_channel_nh_gap(g, 1).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn gap_is_non_monotonic() {
        let gammas: Vec<f64> = (0..=80).map(|k| 10f64.powf(-4.0 + 0.1 * k as f64)).collect();
        for &g in &gammas {
            assert!(nh_gap(g).is_ok(), "γ = {g}");
        }
        let c = GapCurve::compute(&gammas, 1).unwrap();
        assert!(c.x_min.iter().all(|&x| x > 0.0));
        let (imax, _) = c.x_min.iter().enumerate().fold((0, 0.0), |a, (i, &x)| if x > a.1 { (i, x) } else { a });
        assert!(gammas[imax] > 1e-2 && gammas[imax] < 1e2);
    }

    #[test]
    fn density_mass() {
        for &g in &[0.1, 1.0, 10.0] {
            let m = nh_mass(g).unwrap();
            assert!((m - 1.0).abs() < 1e-4, "γ = {g}: {m}");
        }
    }

    #[test]
    fn bound_dominates_and_tail() {
        let g = 0.1;
        for k in 1..60 {
            let t = 0.25 * k as f64;
            let f = dff_simple_lindbladian(t, g).unwrap();
            let b = dff_upper_bound(t, g).unwrap();
            assert!(f <= b + 1e-12, "t = {t}: {f} > {b}");
        }
        let d = nh_gap(g).unwrap();
        let t = 50.0 / d;
        let lhs = ln_dff_upper_bound(t, g).unwrap() + 2.0 * d * t + 4.0 * t.ln();
        let c = bound_tail_constant(g).unwrap();
        assert!(((lhs - c) / c).abs() < 0.02, "{lhs} vs {c}");
        assert!(simple_lindbladian_mgf(0.0, g).is_err());
        assert_eq!(dff_simple_lindbladian(0.0, g).unwrap(), 1.0);
    }

    #[test]
    fn small_t_continuity() {
        let f = dff_simple_lindbladian(1e-6, 0.5).unwrap();
        let m = nh_mass(0.5).unwrap();
        assert!((f - m * m).abs() < 1e-5);
    }
}
