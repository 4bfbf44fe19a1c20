//! Special functions and quadrature used by the geometry and kernel code.

pub mod bessel;
pub mod beta;
pub mod gamma;
pub mod quadrature;

pub use bessel::{bessel_j, normalized_bessel, normalized_bessel_envelope};
pub use beta::{betainc, ln_beta};
pub use gamma::{gamma_half, ln_gamma};
pub use quadrature::{gauss_legendre, AdaptiveIntegrator, Integral};
