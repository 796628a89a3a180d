//! Closed-form large-N results and their quadrature fallbacks.

pub mod densities;
pub mod form_factors;
pub mod nonhermitian;
pub mod resolvents;

pub use densities::*;
pub use form_factors::*;
pub use nonhermitian::*;
pub use resolvents::*;
