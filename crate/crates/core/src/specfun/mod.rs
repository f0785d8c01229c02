//! Special functions and quadrature.

mod bessel;
mod gamma;
mod quadrature;

pub use bessel::bessel_k;
pub use gamma::{beta_fn, gamma_fn, ln_gamma};
pub use quadrature::{gauss_legendre, QuadratureRule, MAX_ORDER};
