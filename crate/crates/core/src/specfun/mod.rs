//! Special functions: scaled modified Bessel, J₁, hypergeometric series,
//! exponential integrals and incomplete gamma.

mod bessel;
mod expint;
mod gamma;
mod hypergeometric;

pub use bessel::{bessel_i_scaled, bessel_j1};
pub use expint::{expint_e1, expint_e1_scaled, expint_ei};
pub use gamma::{gamma, gamma_incomplete_regularized, ln_gamma};
pub use hypergeometric::{
    hyp2f1, hyp2f1_complex, hyp2f1_pfaff, hyp_pfq, hyp_series, hyp_series_mp, hyp_series_tol,
    SeriesEvalReport,
};
