use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("matrix is not hermitian: max |A - A^H| = {deviation:e} exceeds tolerance {tol:e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("rate {index} is {value}; Lindblad rates must be positive")]
    NegativeRate { index: usize, value: f64 },

    #[error("L^H L is singular: smallest singular value {smallest:e}, condition number {condition:e}")]
    SingularJump { smallest: f64, condition: f64 },

    #[error("eigensolver failed to converge on a {dim}x{dim} matrix (max |entry| = {norm:e})")]
    EigenNonConvergence { dim: usize, norm: f64 },

    #[error("spectrum entirely degenerate at zero (zero_tol = {zero_tol:e})")]
    DegenerateSpectrum { zero_tol: f64 },

    #[error("eigenvalue {value} is purely imaginary and non-zero; no finite gap")]
    PurelyImaginaryMode { value: String },

    #[error("non-dissipative spectrum: eigenvalue with real part {re:e} > tolerance {tol:e}")]
    NonDissipative { re: f64, tol: f64 },

    #[error("form factor has imaginary part {imag:e} at t = {t}")]
    ComplexFormFactor { t: f64, imag: f64 },

    #[error("sample {index} failed: {source}")]
    Sample {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("series did not converge within {terms} terms (last term {last:e})")]
    SeriesNonConvergence { terms: usize, last: f64 },

    #[error("catastrophic cancellation in series: estimated error {est_error:e} vs value {value:e}")]
    SeriesCancellation { value: f64, est_error: f64 },

    #[error("argument {arg} lies on a branch cut")]
    BranchCut { arg: String },

    #[error("root collision in branch tracking: {roots}")]
    RootCollision { roots: String },

    #[error("no sign change found on [{lo}, {hi}]")]
    Bracketing { lo: f64, hi: f64 },

    #[error("quadrature failed to reach tolerance: estimated error {est_error:e}")]
    Quadrature { est_error: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
