//! Numerical laboratory for Lieb-Thirring type inequalities.
//!
//! The crate discretizes three families of operators and cross-checks the
//! spectral inequalities that connect them:
//!
//! * the Laplacian on a half-space with a Robin (third-type) boundary
//!   condition `du/dnu = v u`, equivalently `-Delta - v(x) delta(y)`;
//! * the relativistic operator `sqrt(-Delta + tau) - v` on a periodic box;
//! * the Birman-Schwinger operator `v^{1/2} (-Delta + tau)^{-1/2} v^{1/2}`.
//!
//! Module map:
//!
//! * [`specfun`]: Gamma, modified Bessel `K_nu`, Gauss-Legendre rules.
//! * [`numerics`]: symmetric matrices, dense eigensolver, Lanczos, LDLᵀ inertia.
//! * [`constants`]: semiclassical constants and tabulated bounds.
//! * [`operators`]: potentials, grids and the discretized operators.
//! * [`spectral`]: Riesz means, counting-function integrals, Weyl scans.
//! * [`inequalities`]: one checker per inequality plus the BKS fuzzer.
//! * [`cli`]: the `ltlab` command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod constants;
pub mod error;
pub mod inequalities;
pub mod numerics;
pub mod operators;
pub mod spectral;
pub mod specfun;

pub use error::{Error, Result};
