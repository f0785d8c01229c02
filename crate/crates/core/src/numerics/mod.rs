//! Symmetric eigensolvers, inertia counting and sparse storage.

mod eigen;
mod lanczos;
mod ldlt;
mod slicing;
mod matrix;

pub use slicing::{eigenvalues_by_slicing, lowest_by_slicing};
pub use eigen::{eig_dense, eigh_dense, tridiagonal_count_below, tridiagonal_eigenvalues, tridiagonal_eigh, Eigh};
pub use lanczos::{eig_lanczos_lowest, eig_lanczos_lowest_with, LanczosOptions, DEFAULT_TOL, MAX_WANTED};
pub use ldlt::{bunch_kaufman_inertia, inertia_bracket, inertia_below, BandedLdlt, Inertia};
pub use matrix::{CsrMatrix, Spectrum, SymmetricMatrix, DENSE_LIMIT};
