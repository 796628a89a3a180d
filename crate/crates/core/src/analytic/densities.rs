//! Wishart-type spectral densities and resolvents of M = Σₐ Lₐ†Lₐ.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::poly::Poly;
use crate::quad::integrate;
use crate::C64;

/// Sampled density with its support.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityCurve {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub support: (f64, f64),
}

const GRADING: i32 = 6;

impl DensityCurve {
    /// Samples `f` on `points` nodes graded as s⁶/(s⁶ + (1 − s)⁶) toward both
    /// edges, fine enough that integrable 1/√x edge singularities still give
    /// an accurate trapezoidal mass.
    pub fn sample(f: impl Fn(f64) -> f64, support: (f64, f64), points: usize) -> Result<Self> {
        if points < 2 || !(support.1 > support.0) {
            return Err(invalid("points", "need at least two points on a non-empty support"));
        }
        let (a, b) = support;
        let grid: Vec<f64> = (0..points)
            .map(|k| {
                let s = k as f64 / (points - 1) as f64;
                let (p, q) = (s.powi(GRADING), (1.0 - s).powi(GRADING));
                a + (b - a) * p / (p + q)
            })
            .collect();
        let raw: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
        if let Some(k) = raw.iter().position(|y| y.is_nan()) {
            return Err(invalid("f", format!("density is NaN at x = {}", grid[k])));
        }
        // a divergent edge contributes nothing to its panel
        let values = raw.into_iter().map(|y| if y.is_infinite() { 0.0 } else { y.max(0.0) }).collect();
        Ok(Self { grid, values, support })
    }

    /// Trapezoidal integral over the sampled grid.
    pub fn trapezoid(&self) -> f64 {
        self.grid
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
            .sum()
    }
}

fn check_v(v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(invalid("v", format!("must be positive and finite, got {v}")));
    }
    Ok(())
}

/// Marčenko–Pastur density (1/2πv)√(4v/x − 1) on (0, 4v].
pub fn mp_density(x: f64, v: f64) -> f64 {
    if !(x > 0.0) || x > 4.0 * v {
        return 0.0;
    }
    (4.0 * v / x - 1.0).max(0.0).sqrt() / (2.0 * PI * v)
}

/// Marčenko–Pastur resolvent (z − √z √(z − 4v))/(2vz); G ~ 1/z at infinity.
pub fn mp_resolvent(z: C64, v: f64) -> Result<C64> {
    check_v(v)?;
    if z.im == 0.0 && z.re >= 0.0 && z.re <= 4.0 * v {
        return Err(Error::BranchCut { arg: format!("{z}") });
    }
    Ok((z - z.sqrt() * (z - 4.0 * v).sqrt()) / (2.0 * v * z))
}

/// Resolvent of a sum of m Wishart matrices with common variance v,
/// (z − v(m−1) − √((z − v(m−1))² − 4vz))/(2vz).
pub fn multi_jump_resolvent(z: C64, m: usize, v: f64) -> Result<C64> {
    check_v(v)?;
    if m == 0 {
        return Err(invalid("m", "need at least one jump"));
    }
    let sm = (m as f64).sqrt();
    let (lo, hi) = (v * (1.0 - sm).powi(2), v * (1.0 + sm).powi(2));
    if z.im == 0.0 && z.re >= lo && z.re <= hi {
        return Err(Error::BranchCut { arg: format!("{z}") });
    }
    if m == 1 {
        return mp_resolvent(z, v);
    }
    let w = z - v * (m as f64 - 1.0);
    // √((z − lo)(z − hi)) with the cut on [lo, hi]
    let root = (z - lo).sqrt() * (z - hi).sqrt();
    Ok((w - root) / (2.0 * v * z))
}

/// Density of ξ = x/v for m jumps: (1/2πξ)√((ξ₊ − ξ)(ξ − ξ₋)), ξ± = (1 ± √m)².
pub fn multi_jump_density(xi: f64, m: usize) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let (lo, hi) = multi_jump_edges(m);
    if !(xi > lo && xi < hi) || xi <= 0.0 {
        return 0.0;
    }
    ((hi - xi) * (xi - lo)).sqrt() / (2.0 * PI * xi)
}

pub fn multi_jump_edges(m: usize) -> (f64, f64) {
    let s = (m as f64).sqrt();
    ((1.0 - s).powi(2), (1.0 + s).powi(2))
}

/// ∫ f(ξ) ρ_m(ξ) dξ with the cosine map that removes the square-root edges.
fn integrate_against_multi_density(m: usize, f: impl Fn(f64) -> f64) -> Result<f64> {
    let (lo, hi) = multi_jump_edges(m);
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let q = integrate(
        |th: f64| {
            let (s, co) = th.sin_cos();
            let xi = c - h * co;
            if xi <= 0.0 {
                // m = 1 endpoint: ρ dξ → (2/π) dθ-limit of the removable singularity
                return f(0.0) * h * h * 0.0;
            }
            // √((hi − ξ)(ξ − lo)) = h sin θ and dξ = h sin θ dθ
            h * s * h * s / (2.0 * PI * xi) * f(xi)
        },
        0.0,
        PI,
        1e-15,
        1e-13,
    )?;
    Ok(q.value)
}

/// m-jump form factor (∫ρ(ξ) e^{−vtξ} dξ)² by quadrature.
pub fn dff_multi_jump(t: f64, m: usize, v: f64) -> Result<f64> {
    check_v(v)?;
    if m == 0 {
        return Err(invalid("m", "need at least one jump"));
    }
    if !(t >= 0.0) {
        return Err(invalid("t", format!("must be non-negative, got {t}")));
    }
    // factor out the lower edge so the integral stays well above the
    // absolute tolerance at long times
    let lo = multi_jump_edges(m).0;
    let lap = integrate_against_multi_density(m, |xi| (-v * t * (xi - lo)).exp())?;
    Ok(lap * lap * (-2.0 * v * t * lo).exp())
}

/// Long-time form factor C t⁻³ e^{−2vξ₋t} with C = √m/(4πv³ξ₋²); needs m ≥ 2.
pub fn dff_multi_jump_asymptote(t: f64, m: usize, v: f64) -> Result<f64> {
    check_v(v)?;
    if m < 2 {
        return Err(invalid("m", "the asymptote diverges for m = 1 (ξ₋ = 0); use the Bessel form"));
    }
    if !(t > 0.0) {
        return Err(invalid("t", format!("must be positive, got {t}")));
    }
    let (lo, _) = multi_jump_edges(m);
    let c = (m as f64).sqrt() / (4.0 * PI * v.powi(3) * lo * lo);
    Ok(c * t.powi(-3) * (-2.0 * v * lo * t).exp())
}

/// Resolvent of Σₐ Wₐ for free Wishart matrices with variances vₐ, i.e. the
/// root of G = 1/(z − Σₐ vₐ/(1 − vₐG)) that behaves as 1/z at infinity.
///
/// The root is followed by Newton continuation along the straight path from
/// Re z ± 10³i down to z, then checked against all roots of the equivalent
/// polynomial for collisions.
pub fn sum_wishart_resolvent(z: C64, variances: &[f64]) -> Result<C64> {
    if variances.is_empty() {
        return Err(invalid("variances", "need at least one variance"));
    }
    for &v in variances {
        check_v(v)?;
    }
    if !(z.re.is_finite() && z.im.is_finite()) || z.norm() == 0.0 {
        return Err(invalid("z", format!("must be finite and non-zero, got {z}")));
    }
    let poly_at = |z: C64| -> Poly {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let factor = |v: f64| Poly::new(vec![one, C64::new(-v, 0.0)]);
        let g = Poly::new(vec![zero, one]);
        let mut prod = Poly::constant(one);
        for &v in variances {
            prod = prod.mul(&factor(v));
        }
        let mut sum = Poly::constant(zero);
        for (a, &va) in variances.iter().enumerate() {
            let mut p = Poly::constant(C64::new(va, 0.0));
            for (b, &vb) in variances.iter().enumerate() {
                if a != b {
                    p = p.mul(&factor(vb));
                }
            }
            sum = sum.add(&p);
        }
        // G z Π − G Σ − Π
        g.mul(&prod).scale(z).add(&g.mul(&sum).scale(-one)).add(&prod.scale(-one))
    };
    let newton = |p: &Poly, mut g: C64| -> Option<C64> {
        for _ in 0..100 {
            let (f, df) = p.eval_with_derivative(g);
            if df.norm() == 0.0 {
                return None;
            }
            let step = f / df;
            g -= step;
            if step.norm() <= 1e-15 * g.norm().max(1e-300) {
                return Some(g);
            }
        }
        let (f, _) = p.eval_with_derivative(g);
        (f.norm() < 1e-12).then_some(g)
    };
    let sign = if z.im < 0.0 { -1.0 } else { 1.0 };
    let start = C64::new(z.re, sign * 1e3);
    let mut g = newton(&poly_at(start), C64::new(1.0, 0.0) / start).ok_or(Error::RootCollision {
        roots: "Newton failed at the starting point".into(),
    })?;
    // geometric descent in the imaginary part
    let steps = 400;
    let (a, b) = (1e3f64.ln(), z.im.abs().max(1e-300).ln().max(-40.0));
    for k in 1..=steps {
        let s = if k == steps {
            z.im.abs()
        } else {
            (a + (b - a) * k as f64 / steps as f64).exp().max(z.im.abs())
        };
        let zk = C64::new(z.re, sign * s);
        g = newton(&poly_at(zk), g).ok_or(Error::RootCollision {
            roots: format!("continuation lost the root at z = {zk}"),
        })?;
    }
    let p = poly_at(z);
    let roots = p.roots()?;
    let mut sorted: Vec<(f64, C64)> = roots.iter().map(|r| ((r - g).norm(), *r)).collect();
    sorted.sort_by(|x, y| x.0.total_cmp(&y.0));
    let scale = g.norm().max(1.0);
    if sorted[0].0 > 1e-8 * scale {
        return Err(Error::RootCollision {
            roots: format!("tracked root {g} is not a root of the polynomial ({roots:?})"),
        });
    }
    if sorted.len() > 1 && sorted[1].0 < 1e-7 * scale {
        return Err(Error::RootCollision {
            roots: format!("{} and {}", sorted[0].1, sorted[1].1),
        });
    }
    Ok(g)
}

/// −(1/π) Im G(x + iε).
pub fn stieltjes_density(g: impl Fn(C64) -> Result<C64>, x: f64, eps: f64) -> Result<f64> {
    Ok(-g(C64::new(x, eps))?.im / PI)
}
