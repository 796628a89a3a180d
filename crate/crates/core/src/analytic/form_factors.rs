//! Large-N (and exact finite-N) dissipative and spectral form factors.

use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::quad::integrate;
use crate::specfun::{bessel_i_scaled, bessel_j1, hyp_pfq, hyp_series_mp};

fn check_t(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(invalid("t", format!("must be finite and non-negative, got {t}")));
    }
    Ok(())
}

fn check_v(v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(invalid("v", format!("must be positive and finite, got {v}")));
    }
    Ok(())
}

/// Ginibre simple dissipator: e^{−4vt}(I₀(2vt) + I₁(2vt))².
pub fn dff_ginibre(t: f64, v: f64) -> Result<f64> {
    check_t(t)?;
    check_v(v)?;
    let x = 2.0 * v * t;
    let s = bessel_i_scaled(0, x)? + bessel_i_scaled(1, x)?;
    Ok(s * s)
}

/// Exact form factor of the random-normal dissipator at finite N (v = 1):
/// 1/N + t⁻²(1 − (1+t/N)^{−N})² − t⁻²(1 − (1+2t/N)^N (1+t/N)^{−2N}).
pub fn dff_normal_exact(t: f64, n: usize) -> Result<f64> {
    check_t(t)?;
    if n == 0 {
        return Err(invalid("n", "N must be at least 1"));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    let nf = n as f64;
    let tau = t / nf;
    // 1 − (1+τ)^{−N}
    let a = -(-nf * tau.ln_1p()).exp_m1();
    // 1 − ((1+2τ)/(1+τ)²)^N, with (1+2τ)/(1+τ)² = 1 − (τ/(1+τ))²
    let r = tau / (1.0 + tau);
    let b = -(nf * (-r * r).ln_1p()).exp_m1();
    let t2 = t * t;
    Ok(1.0 / nf + a * a / t2 - b / t2)
}

/// Semicircle of variance v: √(4v − x²)/(2πv).
pub fn semicircle_density(x: f64, v: f64) -> f64 {
    let r2 = 4.0 * v - x * x;
    if r2 <= 0.0 {
        0.0
    } else {
        r2.sqrt() / (2.0 * PI * v)
    }
}

/// Density of the difference u = x − y of two independent semicircle
/// variables, P(u) = ∫ρ(x)ρ(x−u)dx; this is the large-N spectral density of
/// H ⊗ 1 − 1 ⊗ Hᵀ for GUE H.
pub fn semicircle_difference_density(u: f64, v: f64) -> Result<f64> {
    check_v(v)?;
    let r = 2.0 * v.sqrt();
    let u = u.abs();
    if u >= 2.0 * r {
        return Ok(0.0);
    }
    // overlap of [−r, r] and [u − r, u + r] is [u − r, r]
    let c = 0.5 * u;
    let h = r - 0.5 * u;
    let q = integrate(
        |th: f64| {
            let x = c - h * th.cos();
            semicircle_density(x, v) * semicircle_density(x - u, v) * h * th.sin()
        },
        0.0,
        PI,
        1e-15,
        1e-13,
    )?;
    Ok(q.value)
}

/// GUE-jump dissipator: ₂F₂(1/2, 3/2; 2, 3; −16vt).
///
/// The series is summed in arbitrary precision for 16vt ≤ 30; beyond that the
/// form factor is ∫P(u)e^{−u²t}du over the semicircle difference density.
pub fn dff_gue_dissipator(t: f64, v: f64) -> Result<f64> {
    check_t(t)?;
    check_v(v)?;
    let x = 16.0 * v * t;
    if x <= 30.0 {
        Ok(hyp_series_mp(&[0.5, 1.5], &[2.0, 3.0], -x)?.value)
    } else {
        dff_gue_dissipator_quadrature(t, v)
    }
}

/// Quadrature branch of [`dff_gue_dissipator`], valid for every t ≥ 0.
pub fn dff_gue_dissipator_quadrature(t: f64, v: f64) -> Result<f64> {
    check_t(t)?;
    check_v(v)?;
    let umax = 4.0 * v.sqrt();
    if t == 0.0 {
        return Ok(1.0);
    }
    // u = s/√t; e^{−s²} is negligible beyond s = 9
    let st = t.sqrt();
    let smax = (umax * st).min(9.0);
    let q = integrate(
        |s: f64| {
            let p = semicircle_difference_density(s / st, v).unwrap_or(f64::NAN);
            p * (-s * s).exp()
        },
        0.0,
        smax,
        1e-16,
        1e-12,
    )?;
    Ok(2.0 * q.value / st)
}

/// Spectral form factor of the GUE LvN generator, (J₁(2√v t)/(√v t))².
pub fn lvn_sff(t: f64, v: f64) -> Result<f64> {
    check_t(t)?;
    check_v(v)?;
    let x = v.sqrt() * t;
    if x < 1e-8 {
        return Ok(1.0 - x * x);
    }
    let j = bessel_j1(2.0 * x) / x;
    Ok(j * j)
}

/// The same form factor as ₁F₂(3/2; 2, 3; −4vt²).
pub fn lvn_sff_hypergeometric(t: f64, v: f64) -> Result<f64> {
    check_t(t)?;
    check_v(v)?;
    Ok(hyp_pfq(&[1.5], &[2.0, 3.0], -4.0 * v * t * t)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_at_origin() {
        assert_eq!(dff_ginibre(0.0, 2.0).unwrap(), 1.0);
        assert_eq!(dff_normal_exact(0.0, 5).unwrap(), 1.0);
        assert_eq!(dff_gue_dissipator(0.0, 1.0).unwrap(), 1.0);
        assert_eq!(lvn_sff(0.0, 1.0).unwrap(), 1.0);
        assert_eq!(lvn_sff_hypergeometric(0.0, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn argument_validation() {
        assert!(dff_ginibre(-1.0, 1.0).is_err());
        assert!(dff_ginibre(1.0, 0.0).is_err());
        assert!(dff_normal_exact(1.0, 0).is_err());
        assert!(lvn_sff(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn normal_exact_limits() {
        assert!((dff_normal_exact(1e-6, 10).unwrap() - 1.0).abs() < 1e-5);
        assert!((dff_normal_exact(1e9, 10).unwrap() - 0.1).abs() < 1e-9);
        let f = dff_normal_exact(1.0, 100_000_000).unwrap();
        let e = (1.0 - (-1f64).exp()).powi(2);
        assert!((f - e).abs() < 1e-4);
        // N = 1: a single zero mode
        assert!((dff_normal_exact(3.0, 1).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn difference_density_is_normalized() {
        let q = integrate(|u: f64| semicircle_difference_density(u, 1.0).unwrap(), -4.0, 4.0, 1e-12, 1e-12)
            .unwrap();
        assert!((q.value - 1.0).abs() < 1e-9);
        // second moment is 2v
        let m2 = integrate(
            |u: f64| u * u * semicircle_difference_density(u, 0.7).unwrap(),
            -4.0,
            4.0,
            1e-12,
            1e-12,
        )
        .unwrap();
        assert!((m2.value - 1.4).abs() < 1e-9);
    }

    #[test]
    fn gue_branches_agree_on_overlap() {
        for &x in &[10.0, 16.0, 22.0, 30.0] {
            let t = x / 16.0;
            let s = dff_gue_dissipator(t, 1.0).unwrap();
            let q = dff_gue_dissipator_quadrature(t, 1.0).unwrap();
            assert!((s - q).abs() < 1e-7, "16vt = {x}: {s} vs {q}");
        }
    }
}
