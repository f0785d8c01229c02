//! Discretized operators: relativistic and Birman-Schwinger matrices on a
//! periodic box, the Robin half-plane operator `H(v)`, its whole-plane
//! delta-line analogue, the Robin half-line and the interval waveguide.

pub mod duality;
pub mod fourier;
pub mod grid;
pub mod halfline;
pub mod halfspace;
pub mod potential;
pub mod waveguide;

use crate::numerics::SymmetricMatrix;
use serde::Serialize;

pub use duality::{duality_grids, duality_table, DualityRow, DUALITY_HEADER};
pub use fourier::{
    birman_schwinger_matrix, count_negatives_relativistic, nystrom_birman_schwinger, relativistic_matrix,
    relativistic_matrix_shifted, RelativisticCount,
};
pub use grid::{AxisSpec, BoxGrid, HalfSpaceGrid};
pub use halfline::{robin_halfline_ground_state, RobinHalfLine};
pub use halfspace::{delta_plane_matrix, robin_halfspace_matrix, PlaneCounter, Sector};
pub use potential::{Potential, Profile};
pub use waveguide::waveguide_riesz_exact;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorKind {
    Relativistic,
    BirmanSchwinger,
    RobinHalfSpace,
    DeltaPlane,
}

/// A symmetric matrix together with what it discretizes.
#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    pub matrix: SymmetricMatrix,
    pub d: usize,
    pub kind: OperatorKind,
    pub grid: String,
    pub tau: f64,
    pub warnings: Vec<String>,
}
