//! Dense square complex matrices.

use faer::Mat;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Square complex matrix used for Hamiltonians and jump operators.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    inner: Mat<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            inner: Mat::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            inner: Mat::identity(dim, dim),
        }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut f = f;
        Self {
            inner: Mat::from_fn(dim, dim, |i, j| f(i, j)),
        }
    }

    /// Builds from row-major entries; `entries.len()` must be a perfect square.
    pub fn from_row_major(entries: &[C64]) -> Result<Self> {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        if dim * dim != entries.len() {
            return Err(Error::ShapeMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        let m = Self::from_fn(dim, |i, j| entries[i * dim + j]);
        m.check_finite()?;
        Ok(m)
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        Self::from_fn(diag.len(), |i, j| if i == j { diag[i] } else { C64::new(0.0, 0.0) })
    }

    pub fn real_diagonal(diag: &[f64]) -> Self {
        Self::from_fn(diag.len(), |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    /// Wraps a faer matrix, rejecting non-square shapes and non-finite entries.
    pub fn from_faer(inner: Mat<C64>) -> Result<Self> {
        if inner.nrows() != inner.ncols() {
            return Err(Error::ShapeMismatch {
                expected: inner.nrows(),
                got: inner.ncols(),
            });
        }
        let m = Self { inner };
        m.check_finite()?;
        Ok(m)
    }

    pub(crate) fn from_faer_unchecked(inner: Mat<C64>) -> Self {
        Self { inner }
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn as_faer(&self) -> &Mat<C64> {
        &self.inner
    }

    pub fn into_faer(self) -> Mat<C64> {
        self.inner
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.inner[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        self.inner[(i, j)] = value;
    }

    pub fn to_row_major(&self) -> Vec<C64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.inner[(i, j)]);
            }
        }
        out
    }

    pub fn check_finite(&self) -> Result<()> {
        let n = self.dim();
        for j in 0..n {
            for i in 0..n {
                let z = self.inner[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim(), |i, j| self.inner[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim(), |i, j| self.inner[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.dim(), |i, j| self.inner[(i, j)].conj())
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        Self {
            inner: &self.inner * &rhs.inner,
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self {
            inner: &self.inner + &rhs.inner,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self {
            inner: &self.inner - &rhs.inner,
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_fn(self.dim(), |i, j| self.inner[(i, j)] * s)
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.inner[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        let n = self.dim();
        let mut m = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                m = m.max(self.inner[(i, j)].norm());
            }
        }
        m
    }

    pub fn frobenius(&self) -> f64 {
        self.inner.norm_l2()
    }

    /// Largest |A_ij - conj(A_ji)|.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut d = 0.0f64;
        for i in 0..n {
            for j in i..n {
                d = d.max((self.inner[(i, j)] - self.inner[(j, i)].conj()).norm());
            }
        }
        d
    }

    /// Errors unless the hermiticity defect is within `1e-10 * max(1, max|A|)`.
    pub fn require_hermitian(&self) -> Result<()> {
        let tol = 1e-10 * self.max_abs().max(1.0);
        let deviation = self.hermiticity_defect();
        if deviation > tol {
            return Err(Error::NotHermitian { deviation, tol });
        }
        Ok(())
    }

    /// `L^H L`.
    pub fn gram(&self) -> Self {
        Self {
            inner: self.inner.adjoint() * &self.inner,
        }
    }

    /// Eigenvalues of a hermitian matrix in ascending order.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        let n = self.dim();
        let herm = Mat::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(self.inner[(i, i)].re, 0.0)
            } else {
                self.inner[(i, j)]
            }
        });
        let mut ev: Vec<f64> = herm
            .self_adjoint_eigenvalues(faer::Side::Lower)
            .map_err(|_| Error::EigenNonConvergence {
                dim: n,
                norm: self.max_abs(),
            })?;
        ev.sort_by(f64::total_cmp);
        Ok(ev)
    }

    /// Eigenvalues of a general complex matrix.
    pub fn eigenvalues(&self) -> Result<Vec<C64>> {
        self.inner
            .eigenvalues()
            .map_err(|_| Error::EigenNonConvergence {
                dim: self.dim(),
                norm: self.max_abs(),
            })
    }

    /// Singular values in descending order.
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        let mut s = self
            .inner
            .singular_values()
            .map_err(|_| Error::EigenNonConvergence {
                dim: self.dim(),
                norm: self.max_abs(),
            })?;
        s.sort_by(|a, b| b.total_cmp(a));
        Ok(s)
    }

    /// `A B - B A`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        self.matmul(rhs).sub(&rhs.matmul(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn row_major_round_trip() {
        let v: Vec<C64> = (0..9).map(|k| c(k as f64, -(k as f64))).collect();
        let m = ComplexMatrix::from_row_major(&v).unwrap();
        assert_eq!(m.get(1, 2), c(5.0, -5.0));
        assert_eq!(m.to_row_major(), v);
    }

    #[test]
    fn rejects_non_square_and_nan() {
        assert!(ComplexMatrix::from_row_major(&[c(1.0, 0.0); 3]).is_err());
        let mut v = vec![c(0.0, 0.0); 4];
        v[3] = c(f64::NAN, 0.0);
        assert!(matches!(
            ComplexMatrix::from_row_major(&v),
            Err(Error::NonFinite { row: 1, col: 1 })
        ));
    }

    #[test]
    fn hermitian_check() {
        let h = ComplexMatrix::from_row_major(&[c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)])
            .unwrap();
        assert!(h.require_hermitian().is_ok());
        let ev = h.hermitian_eigenvalues().unwrap();
        let s = 0.5 * 5f64.sqrt();
        assert!((ev[0] - (1.5 - s)).abs() < 1e-14);
        assert!((ev[1] - (1.5 + s)).abs() < 1e-14);
        let nh = ComplexMatrix::from_row_major(&[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])
            .unwrap();
        assert!(nh.require_hermitian().is_err());
    }

    #[test]
    fn gram_and_singular_values() {
        let l = ComplexMatrix::real_diagonal(&[3.0, -2.0]);
        assert_eq!(l.gram().get(0, 0), c(9.0, 0.0));
        assert_eq!(l.singular_values().unwrap(), vec![3.0, 2.0]);
    }
}
