//! Independent reference constructions for the special functions.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::analytic::{dff_gue_dissipator, lvn_sff, lvn_sff_hypergeometric, semicircle_density};
use crate::quad::{integrate, integrate_to_infinity};
use crate::specfun::{
    bessel_i_scaled, bessel_j1, expint_ei, gamma_incomplete_regularized, hyp2f1, ln_gamma,
};
use crate::Result;

/// Worst error of one function against its oracle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub name: String,
    pub points: usize,
    pub max_error: f64,
    pub tolerance: f64,
}

impl OracleCheck {
    pub fn passed(&self) -> bool {
        self.max_error <= self.tolerance && self.points >= 20
    }
}

fn check(name: &str, tolerance: f64, pts: impl IntoIterator<Item = Result<f64>>) -> Result<OracleCheck> {
    let mut max_error = 0.0f64;
    let mut points = 0;
    for e in pts {
        max_error = max_error.max(e?);
        points += 1;
    }
    Ok(OracleCheck { name: name.into(), points, max_error, tolerance })
}

fn quad(f: impl Fn(f64) -> f64, a: f64, b: f64) -> Result<f64> {
    Ok(integrate(f, a, b, 1e-15, 1e-14)?.value)
}

/// Compares each special function against an independent construction
/// (quadrature, finite sums or a second series) at 20 or more points.
pub fn oracle_checks() -> Result<Vec<OracleCheck>> {
    let grid = |lo: f64, hi: f64, n: usize| (0..n).map(move |k| lo + (hi - lo) * k as f64 / (n - 1) as f64);
    let mut checks = Vec::new();
    for order in [0u32, 1] {
        checks.push(check(
            if order == 0 { "e^-x I0" } else { "e^-x I1" },
            1e-12,
            grid(0.0, 60.0, 24).map(|x| {
                let o = quad(|th: f64| (x * (th.cos() - 1.0)).exp() * (order as f64 * th).cos(), 0.0, PI)? / PI;
                Ok((bessel_i_scaled(order, x)? - o).abs())
            }),
        )?);
    }
    checks.push(check(
        "J1",
        1e-12,
        grid(0.0, 40.0, 24).map(|x| {
            let o = quad(|th: f64| (th - x * th.sin()).cos(), 0.0, PI)? / PI;
            Ok((bessel_j1(x) - o).abs())
        }),
    )?);
    checks.push(check(
        "Ei",
        1e-12,
        grid(0.05, 60.0, 24).map(|x| {
            let o = -integrate_to_infinity(|y: f64| (-y).exp() / y, x, 0.0, 1e-14)?.value;
            Ok(((expint_ei(-x)? - o) / o).abs())
        }),
    )?);
    checks.push(check(
        "ln Γ",
        1e-12,
        (1..=24usize).map(|n| {
            // Γ(n) = (n−1)! and Γ(n + 1/2) = (2n)! √π / (4ⁿ n!)
            let fact: f64 = (1..n).map(|k| (k as f64).ln()).sum();
            let half: f64 = (1..=2 * n).map(|k| (k as f64).ln()).sum::<f64>() + 0.5 * PI.ln()
                - n as f64 * 4f64.ln()
                - (1..=n).map(|k| (k as f64).ln()).sum::<f64>();
            let a = (ln_gamma(n as f64) - fact).abs() / fact.abs().max(1.0);
            let b = (ln_gamma(n as f64 + 0.5) - half).abs() / half.abs().max(1.0);
            Ok(a.max(b))
        }),
    )?);
    checks.push(check(
        "Q(a, x)",
        1e-10,
        (0..24usize).map(|k| {
            let a = 1 + 3 * (k % 8);
            let x = 0.25 + 4.0 * (k / 8) as f64 + 0.7 * (k % 8) as f64 * (1 + k / 8) as f64;
            // e^{−x} Σ_{j<a} xʲ/j!
            let mut term = (-x).exp();
            let mut sum = 0.0;
            for j in 0..a {
                if j > 0 {
                    term *= x / j as f64;
                }
                sum += term;
            }
            Ok((gamma_incomplete_regularized(a as f64, x)? - sum).abs())
        }),
    )?);
    checks.push(check(
        "2F1 terminating",
        1e-12,
        (0..24usize).map(|k| {
            let m = 1 + k % 6;
            let x = -4.0 + 4.8 * (k as f64) / 23.0;
            let (b, c) = (0.5 + 0.25 * (k % 3) as f64, 2.0 + 0.5 * (k % 4) as f64);
            let mut term = 1.0;
            let mut sum = 1.0;
            for j in 0..m {
                let jf = j as f64;
                term *= (-(m as f64) + jf) * (b + jf) / ((c + jf) * (jf + 1.0)) * x;
                sum += term;
            }
            Ok((hyp2f1(-(m as f64), b, c, x)? - sum).abs() / sum.abs().max(1.0))
        }),
    )?);
    checks.push(check(
        "2F2 vs semicircle double integral",
        1e-7,
        grid(0.0, 3.0, 24).map(|t| {
            let o = quad(
                |x: f64| {
                    let inner = quad(|y: f64| semicircle_density(y, 1.0) * (-(x - y).powi(2) * t).exp(), -2.0, 2.0)
                        .unwrap_or(f64::NAN);
                    semicircle_density(x, 1.0) * inner
                },
                -2.0,
                2.0,
            )?;
            Ok((dff_gue_dissipator(t, 1.0)? - o).abs())
        }),
    )?);
    checks.push(check(
        "SFF Bessel vs 1F2",
        1e-9,
        grid(0.0, 20.0, 81).map(|t| Ok((lvn_sff(t, 1.0)? - lvn_sff_hypergeometric(t, 1.0)?).abs())),
    )?);
    Ok(checks)
}
