//! Random Lindblad generators built from random-matrix ensembles.
//!
//! Row-major vectorization is used throughout: ρ_ij sits at flat index
//! `i * N + j`, so `A ⊗ Bᵀ` acts on `vec(ρ)` as `ρ ↦ A ρ B`.

pub mod ensembles;
pub mod error;
pub mod export;
pub mod analytic;
pub mod matrix;
pub mod moments;
pub mod oracles;
pub mod poly;
pub mod quad;
pub mod sampling;
pub mod specfun;
pub mod spectral;
pub mod superop;

pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
pub use num_complex::Complex64 as C64;
