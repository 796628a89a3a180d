//! Dense complex polynomials: evaluation and all-roots (Aberth–Ehrlich).

use crate::error::{invalid, Error, Result};
use crate::C64;

/// Coefficients in ascending order: p(x) = Σ cₖ xᵏ.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    pub coeffs: Vec<C64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.norm() == 0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = C64::new(0.0, 0.0);
        Poly::new(
            (0..n)
                .map(|k| *self.coeffs.get(k).unwrap_or(&zero) + *rhs.coeffs.get(k).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn scale(&self, s: C64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Value and derivative by Horner's rule.
    pub fn eval_with_derivative(&self, x: C64) -> (C64, C64) {
        let mut p = C64::new(0.0, 0.0);
        let mut dp = C64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    }

    pub fn eval(&self, x: C64) -> C64 {
        self.eval_with_derivative(x).0
    }

    /// All roots by simultaneous Aberth–Ehrlich iteration.
    pub fn roots(&self) -> Result<Vec<C64>> {
        let deg = self.degree();
        if deg == 0 {
            return Err(invalid("poly", "constant polynomial has no roots"));
        }
        let lead = self.coeffs[deg];
        // Cauchy-type radius for the initial circle
        let radius = 1.0
            + self.coeffs[..deg]
                .iter()
                .map(|c| (c / lead).norm())
                .fold(0.0f64, f64::max);
        let mut z: Vec<C64> = (0..deg)
            .map(|k| C64::from_polar(0.5 * radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / deg as f64 + 0.4))
            .collect();
        for _ in 0..500 {
            let mut moved = 0.0f64;
            for i in 0..deg {
                let (p, dp) = self.eval_with_derivative(z[i]);
                if p.norm() == 0.0 {
                    continue;
                }
                let ratio = p / dp;
                let mut s = C64::new(0.0, 0.0);
                for j in 0..deg {
                    if j != i {
                        s += C64::new(1.0, 0.0) / (z[i] - z[j]);
                    }
                }
                let w = ratio / (C64::new(1.0, 0.0) - ratio * s);
                if w.re.is_finite() && w.im.is_finite() {
                    z[i] -= w;
                    moved = moved.max(w.norm() / z[i].norm().max(1e-300));
                }
            }
            if moved < 1e-15 {
                return Ok(z);
            }
        }
        // accept if residuals are at roundoff level
        let scale: f64 = self.coeffs.iter().map(|c| c.norm()).sum();
        let ok = z.iter().all(|&r| {
            let mag: f64 = self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c.norm() * r.norm().powi(k as i32))
                .sum();
            self.eval(r).norm() <= 1e-10 * mag.max(scale * 1e-300)
        });
        if ok {
            Ok(z)
        } else {
            Err(Error::SeriesNonConvergence {
                terms: 500,
                last: f64::NAN,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_known_polynomial() {
        // (x-1)(x+2)(x-3i)
        let p = Poly::from_real(&[-1.0, 1.0])
            .mul(&Poly::from_real(&[2.0, 1.0]))
            .mul(&Poly::new(vec![C64::new(0.0, -3.0), C64::new(1.0, 0.0)]));
        let mut r = p.roots().unwrap();
        r.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let want = [C64::new(-2.0, 0.0), C64::new(0.0, 3.0), C64::new(1.0, 0.0)];
        for (a, b) in r.iter().zip(&want) {
            assert!((a - b).norm() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn wide_coefficient_range() {
        // roots 1e-4 and 1e4
        let p = Poly::from_real(&[1.0, -(1e4 + 1e-4), 1.0]);
        let mut r: Vec<f64> = p.roots().unwrap().iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        assert!((r[0] / 1e-4 - 1.0).abs() < 1e-12);
        assert!((r[1] / 1e4 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_has_no_roots() {
        assert!(Poly::from_real(&[3.0]).roots().is_err());
    }
}
