//! N²×N² matrix representations of Lindblad generators.
//!
//! A term `c · A ⊗ₜ B` acts as `X ↦ c A X B`; under row-major vectorization its
//! matrix is `c · A ⊗ Bᵀ`, with entry `[(i,j),(k,l)] = c A_ik B_lj`.

use std::io::{Read, Write};

use faer::linalg::solvers::DenseSolveCore;
use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::matrix::ComplexMatrix;
use crate::C64;

const LSOP_MAGIC: &[u8; 4] = b"LSOP";
const LSOP_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SuperopKind {
    Lvn,
    SimpleDissipator,
    MultiDissipator,
    Lindbladian,
    NonCrossingTruncation,
    /// Read from disk or built by hand.
    Other,
}

/// One factor of a Kronecker term; the identity is kept symbolic.
#[derive(Clone, Debug)]
pub enum Factor {
    Identity,
    Matrix(ComplexMatrix),
}

impl Factor {
    fn product(&self, rhs: &Factor) -> Factor {
        match (self, rhs) {
            (Factor::Identity, f) | (f, Factor::Identity) => f.clone(),
            (Factor::Matrix(a), Factor::Matrix(b)) => Factor::Matrix(a.matmul(b)),
        }
    }

    fn trace(&self, n: usize) -> C64 {
        match self {
            Factor::Identity => C64::new(n as f64, 0.0),
            Factor::Matrix(a) => a.trace(),
        }
    }
}

/// `coeff · left ⊗ₜ right`, i.e. `X ↦ coeff · left · X · right`.
#[derive(Clone, Debug)]
pub struct KronTerm {
    pub coeff: C64,
    pub left: Factor,
    pub right: Factor,
}

/// A superoperator as a sum of Kronecker terms, before densification.
#[derive(Clone, Debug)]
pub struct KronSum {
    pub dim: usize,
    pub terms: Vec<KronTerm>,
}

impl KronSum {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            terms: Vec::new(),
        }
    }

    pub fn push(&mut self, coeff: C64, left: Factor, right: Factor) {
        self.terms.push(KronTerm { coeff, left, right });
    }

    pub fn extend(&mut self, other: KronSum) {
        self.terms.extend(other.terms);
    }

    /// Applies to an N×N matrix without forming the N²×N² matrix.
    pub fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim);
        for t in &self.terms {
            let lx = match &t.left {
                Factor::Identity => x.clone(),
                Factor::Matrix(a) => a.matmul(x),
            };
            let lxr = match &t.right {
                Factor::Identity => lx,
                Factor::Matrix(b) => lx.matmul(b),
            };
            out = out.add(&lxr.scale(t.coeff));
        }
        out
    }

    /// tr(Sⁿ) by expanding the power into Kronecker words:
    /// tr(∏ Aₖ ⊗ₜ Bₖ) = tr(A₁⋯Aₙ) · tr(Bₙ⋯B₁).
    pub fn trace_power(&self, n: usize) -> C64 {
        let d = self.dim;
        if n == 0 {
            return C64::new((d * d) as f64, 0.0);
        }
        // depth-first over words, carrying partial left/right products
        fn walk(s: &KronSum, depth: usize, n: usize, coeff: C64, l: &Factor, r: &Factor) -> C64 {
            if depth == n {
                return coeff * l.trace(s.dim) * r.trace(s.dim);
            }
            let mut acc = C64::new(0.0, 0.0);
            for t in &s.terms {
                let l2 = l.product(&t.left);
                let r2 = t.right.product(r);
                acc += walk(s, depth + 1, n, coeff * t.coeff, &l2, &r2);
            }
            acc
        }
        walk(self, 0, n, C64::new(1.0, 0.0), &Factor::Identity, &Factor::Identity)
    }

    pub fn to_dense(&self) -> Mat<C64> {
        let n = self.dim;
        let nn = n * n;
        let mut m = Mat::<C64>::zeros(nn, nn);
        for t in &self.terms {
            let c = t.coeff;
            match (&t.left, &t.right) {
                (Factor::Identity, Factor::Identity) => {
                    for p in 0..nn {
                        m[(p, p)] += c;
                    }
                }
                (Factor::Matrix(a), Factor::Identity) => {
                    for i in 0..n {
                        for k in 0..n {
                            let v = c * a.get(i, k);
                            for j in 0..n {
                                m[(i * n + j, k * n + j)] += v;
                            }
                        }
                    }
                }
                (Factor::Identity, Factor::Matrix(b)) => {
                    for j in 0..n {
                        for l in 0..n {
                            let v = c * b.get(l, j);
                            for i in 0..n {
                                m[(i * n + j, i * n + l)] += v;
                            }
                        }
                    }
                }
                (Factor::Matrix(a), Factor::Matrix(b)) => {
                    for k in 0..n {
                        for l in 0..n {
                            for i in 0..n {
                                let v = c * a.get(i, k);
                                for j in 0..n {
                                    m[(i * n + j, k * n + l)] += v * b.get(l, j);
                                }
                            }
                        }
                    }
                }
            }
        }
        m
    }
}

/// Dense N²×N² superoperator in the row-major vectorization.
#[derive(Clone, Debug)]
pub struct Superoperator {
    dim: usize,
    matrix: Mat<C64>,
    kind: SuperopKind,
}

impl Superoperator {
    pub fn from_kron(sum: &KronSum, kind: SuperopKind) -> Self {
        Self {
            dim: sum.dim,
            matrix: sum.to_dense(),
            kind,
        }
    }

    pub fn from_dense(dim: usize, matrix: Mat<C64>, kind: SuperopKind) -> Result<Self> {
        if matrix.nrows() != dim * dim || matrix.ncols() != dim * dim {
            return Err(Error::ShapeMismatch {
                expected: dim * dim,
                got: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Self { dim, matrix, kind })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> SuperopKind {
        self.kind
    }

    pub fn matrix(&self) -> &Mat<C64> {
        &self.matrix
    }

    /// Entry `[(i,j),(k,l)]`.
    pub fn entry(&self, i: usize, j: usize, k: usize, l: usize) -> C64 {
        let n = self.dim;
        self.matrix[(i * n + j, k * n + l)]
    }

    pub fn max_abs(&self) -> f64 {
        let nn = self.dim * self.dim;
        let mut m = 0.0f64;
        for c in 0..nn {
            for r in 0..nn {
                m = m.max(self.matrix[(r, c)].norm());
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim * self.dim).map(|p| self.matrix[(p, p)]).sum()
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.dim() != self.dim {
            return Err(Error::ShapeMismatch {
                expected: self.dim,
                got: rho.dim(),
            });
        }
        let v = vectorize(rho);
        let nn = self.dim * self.dim;
        let x = Mat::from_fn(nn, 1, |p, _| v[p]);
        let y = &self.matrix * &x;
        let out: Vec<C64> = (0..nn).map(|p| y[(p, 0)]).collect();
        unvectorize(&out)
    }

    /// max over (k,l) of |Σᵢ S[(i,i),(k,l)]|.
    pub fn trace_preservation_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for col in 0..n * n {
            let s: C64 = (0..n).map(|i| self.matrix[(i * n + i, col)]).sum();
            worst = worst.max(s.norm());
        }
        worst
    }

    /// max |S[(i,j),(k,l)] - conj(S[(j,i),(l,k)])|.
    pub fn hermiticity_preservation_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let d = self.matrix[(i * n + j, k * n + l)]
                            - self.matrix[(j * n + i, l * n + k)].conj();
                        worst = worst.max(d.norm());
                    }
                }
            }
        }
        worst
    }

    pub fn is_hermiticity_preserving(&self, rel_tol: f64) -> bool {
        self.hermiticity_preservation_defect() <= rel_tol * self.max_abs().max(f64::MIN_POSITIVE)
    }

    /// Binary dump: `LSOP`, version u32, N u32, then N⁴ (re, im) f64 pairs,
    /// row-major, all little-endian.
    pub fn write_lsop<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(LSOP_MAGIC)?;
        w.write_all(&LSOP_VERSION.to_le_bytes())?;
        w.write_all(&(self.dim as u32).to_le_bytes())?;
        let nn = self.dim * self.dim;
        for r in 0..nn {
            for c in 0..nn {
                let z = self.matrix[(r, c)];
                w.write_all(&z.re.to_le_bytes())?;
                w.write_all(&z.im.to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn read_lsop<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != LSOP_MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let mut word = [0u8; 4];
        r.read_exact(&mut word)?;
        let version = u32::from_le_bytes(word);
        if version != LSOP_VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        r.read_exact(&mut word)?;
        let dim = u32::from_le_bytes(word) as usize;
        let nn = dim * dim;
        let mut m = Mat::<C64>::zeros(nn, nn);
        let mut buf = [0u8; 8];
        for row in 0..nn {
            for col in 0..nn {
                r.read_exact(&mut buf)?;
                let re = f64::from_le_bytes(buf);
                r.read_exact(&mut buf)?;
                let im = f64::from_le_bytes(buf);
                m[(row, col)] = C64::new(re, im);
            }
        }
        Self::from_dense(dim, m, SuperopKind::Other)
    }
}

/// Row-major flattening: ρ_ij ↦ index i·N + j.
pub fn vectorize(rho: &ComplexMatrix) -> Vec<C64> {
    rho.to_row_major()
}

pub fn unvectorize(v: &[C64]) -> Result<ComplexMatrix> {
    ComplexMatrix::from_row_major(v)
}

const I: C64 = C64 { re: 0.0, im: 1.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

pub fn lvn_terms(h: &ComplexMatrix) -> Result<KronSum> {
    h.check_finite()?;
    h.require_hermitian()?;
    let mut s = KronSum::new(h.dim());
    s.push(-I, Factor::Matrix(h.clone()), Factor::Identity);
    s.push(I, Factor::Identity, Factor::Matrix(h.clone()));
    Ok(s)
}

pub fn dissipator_terms(l: &ComplexMatrix, gamma: f64) -> Result<KronSum> {
    l.check_finite()?;
    let g = C64::new(gamma, 0.0);
    let ldl = l.gram();
    let mut s = KronSum::new(l.dim());
    s.push(2.0 * g, Factor::Matrix(l.clone()), Factor::Matrix(l.adjoint()));
    s.push(-g, Factor::Matrix(ldl.clone()), Factor::Identity);
    s.push(-g, Factor::Identity, Factor::Matrix(ldl));
    Ok(s)
}

fn check_channels(dim: usize, jumps: &[ComplexMatrix], gammas: &[f64]) -> Result<()> {
    if jumps.len() != gammas.len() {
        return Err(Error::ShapeMismatch {
            expected: jumps.len(),
            got: gammas.len(),
        });
    }
    for (index, (l, &g)) in jumps.iter().zip(gammas).enumerate() {
        if l.dim() != dim {
            return Err(Error::ShapeMismatch {
                expected: dim,
                got: l.dim(),
            });
        }
        if !(g > 0.0) || !g.is_finite() {
            return Err(Error::NegativeRate { index, value: g });
        }
    }
    Ok(())
}

fn channel_dim(h: Option<&ComplexMatrix>, jumps: &[ComplexMatrix]) -> Result<usize> {
    let dim = h.map(|h| h.dim()).or_else(|| jumps.first().map(|l| l.dim()));
    match dim {
        Some(0) | None => Err(Error::ZeroDimension),
        Some(d) => Ok(d),
    }
}

pub fn lindbladian_terms(
    h: Option<&ComplexMatrix>,
    jumps: &[ComplexMatrix],
    gammas: &[f64],
) -> Result<KronSum> {
    let dim = channel_dim(h, jumps)?;
    check_channels(dim, jumps, gammas)?;
    let mut s = KronSum::new(dim);
    if let Some(h) = h {
        s.extend(lvn_terms(h)?);
    }
    for (l, &g) in jumps.iter().zip(gammas) {
        s.extend(dissipator_terms(l, g)?);
    }
    Ok(s)
}

/// −i(K ⊗ₜ 1) + i(1 ⊗ₜ K†) with K = H − i Σ γₐ Lₐ†Lₐ.
pub fn noncrossing_terms(
    h: Option<&ComplexMatrix>,
    jumps: &[ComplexMatrix],
    gammas: &[f64],
) -> Result<KronSum> {
    let dim = channel_dim(h, jumps)?;
    check_channels(dim, jumps, gammas)?;
    let k = effective_hamiltonian(h, jumps, gammas)?;
    let mut s = KronSum::new(dim);
    s.push(-I, Factor::Matrix(k.clone()), Factor::Identity);
    s.push(I, Factor::Identity, Factor::Matrix(k.adjoint()));
    Ok(s)
}

/// K = H − i Σ γₐ Lₐ†Lₐ.
pub fn effective_hamiltonian(
    h: Option<&ComplexMatrix>,
    jumps: &[ComplexMatrix],
    gammas: &[f64],
) -> Result<ComplexMatrix> {
    let dim = channel_dim(h, jumps)?;
    check_channels(dim, jumps, gammas)?;
    let mut k = match h {
        Some(h) => {
            h.check_finite()?;
            h.require_hermitian()?;
            h.clone()
        }
        None => ComplexMatrix::zeros(dim),
    };
    for (l, &g) in jumps.iter().zip(gammas) {
        k = k.sub(&l.gram().scale(C64::new(0.0, g)));
    }
    Ok(k)
}

/// −i(H ⊗ 1 − 1 ⊗ Hᵀ).
pub fn lvn_generator(h: &ComplexMatrix) -> Result<Superoperator> {
    if h.dim() == 0 {
        return Err(Error::ZeroDimension);
    }
    Ok(Superoperator::from_kron(&lvn_terms(h)?, SuperopKind::Lvn))
}

/// 2 L ⊗ₜ L† − L†L ⊗ₜ 1 − 1 ⊗ₜ L†L.
pub fn simple_dissipator(l: &ComplexMatrix) -> Result<Superoperator> {
    if l.dim() == 0 {
        return Err(Error::ZeroDimension);
    }
    Ok(Superoperator::from_kron(&dissipator_terms(l, 1.0)?, SuperopKind::SimpleDissipator))
}

/// Σₐ γₐ 𝓓_{Lₐ} without a Hamiltonian part.
pub fn multi_dissipator(jumps: &[ComplexMatrix], gammas: &[f64]) -> Result<Superoperator> {
    if jumps.is_empty() {
        return Err(invalid("jumps", "at least one jump operator is required"));
    }
    Ok(Superoperator::from_kron(
        &lindbladian_terms(None, jumps, gammas)?,
        SuperopKind::MultiDissipator,
    ))
}

/// −i[H, ·] + Σₐ γₐ 𝓓_{Lₐ}.
pub fn lindbladian(h: &ComplexMatrix, jumps: &[ComplexMatrix], gammas: &[f64]) -> Result<Superoperator> {
    Ok(Superoperator::from_kron(
        &lindbladian_terms(Some(h), jumps, gammas)?,
        SuperopKind::Lindbladian,
    ))
}

/// Lindbladian with every recycling term `2γ L ⊗ₜ L†` removed.
pub fn noncrossing_truncation(
    h: Option<&ComplexMatrix>,
    jumps: &[ComplexMatrix],
    gammas: &[f64],
) -> Result<Superoperator> {
    Ok(Superoperator::from_kron(
        &noncrossing_terms(h, jumps, gammas)?,
        SuperopKind::NonCrossingTruncation,
    ))
}

/// Positive semidefinite, unit-trace, hermitian N×N matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    rho: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(rho: ComplexMatrix) -> Result<Self> {
        rho.check_finite()?;
        let dev = rho.hermiticity_defect();
        if dev > 1e-10 {
            return Err(Error::NotHermitian { deviation: dev, tol: 1e-10 });
        }
        let tr = rho.trace();
        if (tr - ONE).norm() > 1e-10 {
            return Err(invalid("rho", format!("trace is {tr}, expected 1")));
        }
        let min = rho.hermitian_eigenvalues()?.first().copied().unwrap_or(0.0);
        if min < -1e-8 {
            return Err(invalid("rho", format!("smallest eigenvalue {min:e} is negative")));
        }
        Ok(Self { rho })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }
}

/// Steady state of 𝓓_L: ρ = M⁻¹ / tr M⁻¹ with M = L†L.
pub fn steady_state(l: &ComplexMatrix) -> Result<DensityMatrix> {
    if l.dim() == 0 {
        return Err(Error::ZeroDimension);
    }
    l.check_finite()?;
    let m = l.gram();
    let sv = m.singular_values()?;
    let largest = sv[0];
    let smallest = *sv.last().unwrap();
    let condition = if smallest > 0.0 { largest / smallest } else { f64::INFINITY };
    if !(condition < 1e12) {
        return Err(Error::SingularJump { smallest, condition });
    }
    let inv = m.as_faer().partial_piv_lu().inverse();
    let inv = ComplexMatrix::from_faer_unchecked(inv);
    let tr = inv.trace();
    let rho = inv.scale(ONE / tr);
    // enforce exact hermiticity lost to rounding in the inverse
    let rho = rho.add(&rho.adjoint()).scale(C64::new(0.5, 0.0));
    DensityMatrix::new(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{sample_ginibre, sample_gue, EnsembleKind, EnsembleSpec};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn ginibre(n: usize, seed: u64) -> ComplexMatrix {
        sample_ginibre(&EnsembleSpec::new(EnsembleKind::ComplexGinibre, n, 1.0, seed).unwrap()).unwrap()
    }

    fn gue(n: usize, seed: u64) -> ComplexMatrix {
        sample_gue(&EnsembleSpec::new(EnsembleKind::Gue, n, 1.0, seed).unwrap()).unwrap()
    }

    fn dense_diff(a: &Superoperator, b: &Superoperator) -> f64 {
        let m = a.matrix() - b.matrix();
        let mut worst = 0.0f64;
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                worst = worst.max(m[(i, j)].norm());
            }
        }
        worst
    }

    #[test]
    fn trivial_generators_vanish() {
        for h in [ComplexMatrix::zeros(3), ComplexMatrix::identity(3)] {
            assert_eq!(lvn_generator(&h).unwrap().max_abs(), 0.0);
        }
        assert_eq!(simple_dissipator(&ComplexMatrix::identity(3)).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn lvn_rejects_non_hermitian() {
        let l = ginibre(3, 1);
        assert!(matches!(lvn_generator(&l), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn rate_validation() {
        let h = gue(2, 0);
        let l = ginibre(2, 0);
        assert!(matches!(
            lindbladian(&h, &[l.clone()], &[-0.1]),
            Err(Error::NegativeRate { index: 0, .. })
        ));
        assert!(lindbladian(&h, &[l.clone()], &[]).is_err());
        assert!(lindbladian(&h, &[ginibre(3, 0)], &[1.0]).is_err());
    }

    #[test]
    fn amplitude_damping_entries() {
        // L = |1><0|: D[|0><0|] = 2|1><1| - 2|0><0|
        let l = ComplexMatrix::from_row_major(&[c(0., 0.), c(0., 0.), c(1., 0.), c(0., 0.)]).unwrap();
        let d = simple_dissipator(&l).unwrap();
        assert_eq!(d.entry(1, 1, 0, 0), c(2.0, 0.0));
        assert_eq!(d.entry(0, 0, 0, 0), c(-2.0, 0.0));
        assert_eq!(d.entry(0, 1, 0, 1), c(-1.0, 0.0));
    }

    #[test]
    fn lindbladian_reductions() {
        let h = ComplexMatrix::real_diagonal(&[1.0, -1.0]);
        let l = ginibre(2, 4);
        let pure = lindbladian(&h, &[], &[]).unwrap();
        assert_eq!(dense_diff(&pure, &lvn_generator(&h).unwrap()), 0.0);
        let diss = lindbladian(&ComplexMatrix::zeros(2), &[l.clone()], &[1.0]).unwrap();
        assert_eq!(dense_diff(&diss, &simple_dissipator(&l).unwrap()), 0.0);
        let nc = noncrossing_truncation(Some(&h), &[], &[]).unwrap();
        assert!(dense_diff(&nc, &lvn_generator(&h).unwrap()) < 1e-15);
        let nc0 = noncrossing_truncation(Some(&h), &[ComplexMatrix::zeros(2)], &[1.0]).unwrap();
        assert!(dense_diff(&nc0, &lvn_generator(&h).unwrap()) < 1e-15);
    }

    #[test]
    fn noncrossing_without_hamiltonian() {
        let l = ginibre(3, 9);
        let m = l.gram();
        let nc = noncrossing_truncation(None, &[l], &[1.0]).unwrap();
        // -(M ⊗ 1 + 1 ⊗ Mᵀ)
        let n = 3;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for q in 0..n {
                        let mut want = c(0.0, 0.0);
                        if j == q {
                            want -= m.get(i, k);
                        }
                        if i == k {
                            want -= m.get(q, j);
                        }
                        assert!((nc.entry(i, j, k, q) - want).norm() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn steady_state_examples() {
        let rho = steady_state(&ComplexMatrix::identity(4)).unwrap();
        assert!(rho.matrix().sub(&ComplexMatrix::identity(4).scale(c(0.25, 0.0))).max_abs() < 1e-15);
        let rho = steady_state(&ComplexMatrix::real_diagonal(&[1.0, 2.0])).unwrap();
        assert!((rho.matrix().get(0, 0).re - 0.8).abs() < 1e-15);
        assert!((rho.matrix().get(1, 1).re - 0.2).abs() < 1e-15);
        let singular = ComplexMatrix::real_diagonal(&[1.0, 0.0]);
        assert!(matches!(steady_state(&singular), Err(Error::SingularJump { .. })));
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(ComplexMatrix::real_diagonal(&[0.5, 0.5])).is_ok());
        assert!(DensityMatrix::new(ComplexMatrix::real_diagonal(&[0.5, 0.6])).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::real_diagonal(&[1.5, -0.5])).is_err());
    }

    #[test]
    fn lsop_round_trip() {
        let s = lindbladian(&gue(3, 1), &[ginibre(3, 2)], &[0.7]).unwrap();
        let mut buf = Vec::new();
        s.write_lsop(&mut buf).unwrap();
        assert_eq!(buf.len(), 12 + 81 * 16);
        assert_eq!(&buf[..4], b"LSOP");
        let back = Superoperator::read_lsop(&buf[..]).unwrap();
        assert_eq!(back.dim(), 3);
        assert_eq!(dense_diff(&s, &back), 0.0);
        assert!(Superoperator::read_lsop(&b"NOPE\x01\0\0\0"[..]).is_err());
    }

    #[test]
    fn kron_apply_matches_dense() {
        let s = lindbladian_terms(Some(&gue(4, 3)), &[ginibre(4, 5)], &[0.3]).unwrap();
        let rho = ginibre(4, 6);
        let via_terms = s.apply(&rho);
        let via_dense = Superoperator::from_kron(&s, SuperopKind::Lindbladian).apply(&rho).unwrap();
        assert!(via_terms.sub(&via_dense).max_abs() < 1e-13);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn vec_unvec_round_trip(seed in any::<u64>(), n in 1usize..8) {
            let a = ginibre(n, seed);
            prop_assert_eq!(unvectorize(&vectorize(&a)).unwrap(), a);
        }

        #[test]
        fn kron_transpose_acts_as_sandwich(seed in any::<u64>(), n in 1usize..8) {
            let a = ginibre(n, seed);
            let b = ginibre(n, seed ^ 1);
            let rho = ginibre(n, seed ^ 2);
            let mut s = KronSum::new(n);
            s.push(ONE, Factor::Matrix(a.clone()), Factor::Matrix(b.clone()));
            let got = Superoperator::from_kron(&s, SuperopKind::Other).apply(&rho).unwrap();
            let want = a.matmul(&rho).matmul(&b);
            prop_assert!(got.sub(&want).max_abs() < 1e-12);
        }

        #[test]
        fn generators_preserve_trace_and_hermiticity(seed in any::<u64>(), n in 1usize..7, g in 0.01f64..10.0) {
            let s = lindbladian(&gue(n, seed), &[ginibre(n, seed ^ 7)], &[g]).unwrap();
            let scale = s.max_abs().max(1.0);
            prop_assert!(s.trace_preservation_defect() < 1e-10 * scale);
            prop_assert!(s.hermiticity_preservation_defect() < 1e-10 * scale);
            let d = simple_dissipator(&ginibre(n, seed ^ 9)).unwrap();
            prop_assert!(d.trace_preservation_defect() < 1e-10 * d.max_abs().max(1.0));
        }

        #[test]
        fn truncation_removes_exactly_the_recycling_terms(seed in any::<u64>(), n in 1usize..7, g in 0.01f64..5.0) {
            let h = gue(n, seed);
            let l = ginibre(n, seed ^ 3);
            let full = lindbladian(&h, &[l.clone()], &[g]).unwrap();
            let nc = noncrossing_truncation(Some(&h), &[l.clone()], &[g]).unwrap();
            let mut rec = KronSum::new(n);
            rec.push(C64::new(2.0 * g, 0.0), Factor::Matrix(l.clone()), Factor::Matrix(l.adjoint()));
            let rec = Superoperator::from_kron(&rec, SuperopKind::Other);
            let diff = full.matrix() - nc.matrix() - rec.matrix();
            let mut worst = 0.0f64;
            for j in 0..diff.ncols() { for i in 0..diff.nrows() { worst = worst.max(diff[(i, j)].norm()); } }
            prop_assert!(worst < 1e-12 * full.max_abs().max(1.0));
        }
    }
}
