//! Generalized hypergeometric series pFq and the Gauss function ₂F₁.

use num_bigint::BigInt;
use num_complex::Complex64 as C64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::gamma::ln_gamma;
use crate::error::{invalid, Error, Result};
use crate::quad::integrate;

const MAX_TERMS: usize = 100_000;

/// Result of a series evaluation together with its error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesEvalReport {
    pub value: f64,
    pub terms_used: usize,
    pub est_error: f64,
}

fn check_lower(b: &[f64]) -> Result<()> {
    for &bj in b {
        if bj <= 0.0 && bj == bj.floor() {
            return Err(invalid("b", format!("lower parameter {bj} is a non-positive integer")));
        }
    }
    Ok(())
}

fn term_ratio(a: &[f64], b: &[f64], k: f64) -> f64 {
    let mut r = 1.0 / (k + 1.0);
    for &ai in a {
        r *= ai + k;
    }
    for &bj in b {
        r /= bj + k;
    }
    r
}

/// pFq(a; b; x) by direct double-precision summation.
///
/// Fails when rounding in the partial sums exceeds `1e-12` absolute; see
/// [`hyp_series_tol`] to choose the threshold.
pub fn hyp_series(a: &[f64], b: &[f64], x: f64) -> Result<SeriesEvalReport> {
    hyp_series_tol(a, b, x, 1e-12)
}

pub fn hyp_series_tol(a: &[f64], b: &[f64], x: f64, tol: f64) -> Result<SeriesEvalReport> {
    check_lower(b)?;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut comp = 0.0f64;
    let mut abs_sum = 1.0f64;
    let mut small = 0;
    for k in 0..MAX_TERMS {
        term *= term_ratio(a, b, k as f64) * x;
        // Neumaier compensated summation
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        abs_sum += term.abs();
        if !sum.is_finite() {
            return Err(Error::SeriesNonConvergence { terms: k + 1, last: term });
        }
        let total = sum + comp;
        if term == 0.0 || term.abs() < 1e-16 * total.abs() {
            small += 1;
            if small >= 2 || term == 0.0 {
                let value = total;
                let est_error = 2.0 * f64::EPSILON * abs_sum;
                if est_error > tol {
                    return Err(Error::SeriesCancellation { value, est_error });
                }
                return Ok(SeriesEvalReport {
                    value,
                    terms_used: k + 2,
                    est_error,
                });
            }
        } else {
            small = 0;
        }
    }
    Err(Error::SeriesNonConvergence {
        terms: MAX_TERMS,
        last: term,
    })
}

fn to_ratio(x: f64, name: &'static str) -> Result<(BigInt, BigInt)> {
    let r = BigRational::from_float(x).ok_or_else(|| invalid(name, format!("{x} is not finite")))?;
    Ok((r.numer().clone(), r.denom().clone()))
}

/// pFq(a; b; x) in fixed-point arbitrary precision.
///
/// Parameters and argument are taken as the exact binary rationals their f64
/// values represent; the working precision is chosen from the size of the
/// largest term so that alternating series with huge terms lose nothing.
pub fn hyp_series_mp(a: &[f64], b: &[f64], x: f64) -> Result<SeriesEvalReport> {
    check_lower(b)?;
    if x == 0.0 {
        return Ok(SeriesEvalReport {
            value: 1.0,
            terms_used: 1,
            est_error: 0.0,
        });
    }
    // Locate the largest term in log space to size the working precision.
    let mut ln_term = 0.0f64;
    let mut ln_max = 0.0f64;
    let mut k = 0usize;
    loop {
        let r = term_ratio(a, b, k as f64) * x;
        if r == 0.0 {
            break;
        }
        ln_term += r.abs().ln();
        ln_max = ln_max.max(ln_term);
        k += 1;
        if r.abs() < 0.5 && ln_term < ln_max - 100.0 {
            break;
        }
        if k > MAX_TERMS {
            return Err(Error::SeriesNonConvergence {
                terms: k,
                last: ln_term.exp(),
            });
        }
    }
    let guard = (ln_max / std::f64::consts::LN_2).ceil().max(0.0) as usize;
    let prec = 96 + guard;

    let pa: Vec<(BigInt, BigInt)> = a.iter().map(|&v| to_ratio(v, "a")).collect::<Result<_>>()?;
    let pb: Vec<(BigInt, BigInt)> = b.iter().map(|&v| to_ratio(v, "b")).collect::<Result<_>>()?;
    let (px, qx) = to_ratio(x, "x")?;

    let one = BigInt::from(1) << prec;
    let mut term = one.clone();
    let mut sum = one;
    let mut terms_used = 1usize;
    for k in 0..MAX_TERMS {
        let kb = BigInt::from(k);
        let mut num = px.clone();
        let mut den = qx.clone() * BigInt::from(k + 1);
        for (p, q) in &pa {
            num *= p + &kb * q;
            den *= q;
        }
        for (p, q) in &pb {
            num *= q;
            den *= p + &kb * q;
        }
        term = term * num / den;
        sum += &term;
        terms_used += 1;
        if term.is_zero() && term_ratio(a, b, k as f64).abs() * x.abs() < 1.0 {
            break;
        }
        if k + 1 == MAX_TERMS {
            return Err(Error::SeriesNonConvergence {
                terms: MAX_TERMS,
                last: f64::NAN,
            });
        }
    }
    // keep 64 significant bits before rounding to f64
    let shift = (sum.bits() as usize).saturating_sub(64);
    let neg = sum.is_negative();
    let mag = if neg { -sum } else { sum } >> shift;
    let m = mag.to_f64().unwrap_or(f64::NAN);
    let value = scale_pow2(if neg { -m } else { m }, shift as i64 - prec as i64);
    Ok(SeriesEvalReport {
        value,
        terms_used,
        est_error: terms_used as f64 * 2f64.powi(-(prec as i32)) + f64::EPSILON * value.abs(),
    })
}

fn scale_pow2(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

/// pFq with automatic fallback to arbitrary precision when double-precision
/// summation would lose accuracy.
pub fn hyp_pfq(a: &[f64], b: &[f64], x: f64) -> Result<SeriesEvalReport> {
    match hyp_series_tol(a, b, x, 1e-15) {
        Ok(r) => Ok(r),
        Err(Error::SeriesCancellation { .. }) => hyp_series_mp(a, b, x),
        Err(e) => Err(e),
    }
}

fn series_2f1(a: f64, b: f64, c: f64, w: C64) -> Result<C64> {
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    let mut small = 0;
    for k in 0..MAX_TERMS {
        let k = k as f64;
        term *= w * ((a + k) * (b + k) / ((c + k) * (k + 1.0)));
        sum += term;
        if term.norm() < 1e-17 * sum.norm() || term.norm() == 0.0 {
            small += 1;
            if small >= 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::SeriesNonConvergence {
        terms: MAX_TERMS,
        last: term.norm(),
    })
}

fn on_cut(w: C64) -> bool {
    w.re >= 1.0 && w.im.abs() <= 1e-14 * w.norm()
}

/// ₂F₁(a, b; c; w) through the Pfaff transformation
/// (1-w)^{-a} ₂F₁(a, c-b; c; w/(w-1)).
pub fn hyp2f1_pfaff(a: f64, b: f64, c: f64, w: C64) -> Result<C64> {
    check_lower(&[c])?;
    if on_cut(w) {
        return Err(Error::BranchCut { arg: format!("{w}") });
    }
    let u = w / (w - 1.0);
    if u.norm() >= 1.0 {
        return Err(invalid("w", format!("Pfaff argument |w/(w-1)| = {} is outside the unit disk", u.norm())));
    }
    Ok((C64::new(1.0, 0.0) - w).powf(-a) * series_2f1(a, c - b, c, u)?)
}

fn euler_2f1(a: f64, b: f64, c: f64, w: C64) -> Result<C64> {
    if !(c > b && b > 0.0) {
        return Err(invalid(
            "b, c",
            format!("integral representation needs c > b > 0, got b = {b}, c = {c}"),
        ));
    }
    let pref = (ln_gamma(c) - ln_gamma(b) - ln_gamma(c - b)).exp();
    let one = C64::new(1.0, 0.0);
    let r = integrate(
        |th: f64| {
            let (s, co) = th.sin_cos();
            let s2 = s * s;
            (one - w * s2).powf(-a) * (2.0 * s.powf(2.0 * b - 1.0) * co.powf(2.0 * (c - b) - 1.0))
        },
        0.0,
        std::f64::consts::FRAC_PI_2,
        1e-15,
        1e-13,
    )?;
    Ok(r.value * pref)
}

/// Gauss hypergeometric ₂F₁(a, b; c; w) for complex w off the cut [1, ∞).
///
/// Uses the power series inside |w| ≤ 3/4, the Pfaff transformation where
/// |w/(w-1)| ≤ 3/4, and the Euler integral elsewhere.
pub fn hyp2f1_complex(a: f64, b: f64, c: f64, w: C64) -> Result<C64> {
    check_lower(&[c])?;
    if !(w.re.is_finite() && w.im.is_finite()) {
        return Err(invalid("w", "argument must be finite"));
    }
    if on_cut(w) {
        return Err(Error::BranchCut { arg: format!("{w}") });
    }
    if w.norm() <= 0.75 {
        return series_2f1(a, b, c, w);
    }
    if (w / (w - 1.0)).norm() <= 0.75 {
        return hyp2f1_pfaff(a, b, c, w);
    }
    match euler_2f1(a, b, c, w) {
        Ok(v) => Ok(v),
        // the representation is symmetric in a and b
        Err(Error::InvalidParameter { .. }) => euler_2f1(b, a, c, w),
        Err(e) => Err(e),
    }
}

/// Real-argument ₂F₁ for x < 1.
pub fn hyp2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if x >= 1.0 {
        return Err(Error::BranchCut { arg: format!("{x}") });
    }
    Ok(hyp2f1_complex(a, b, c, C64::new(x, 0.0))?.re)
}
