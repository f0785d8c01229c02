use super::grid::{Axis, HalfSpaceGrid};
use super::potential::Potential;
use super::{DiscreteOperator, OperatorKind};
use crate::error::{Error, Result};
use crate::numerics::{eigenvalues_by_slicing, inertia_below, inertia_bracket, lowest_by_slicing, tridiagonal_eigh, SymmetricMatrix};

/// Potential values below this fraction of the maximum are dropped from the
/// boundary coupling.
const SUPPORT_CUTOFF: f64 = 1e-15;

/// Which plane operator a counter or matrix discretizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    /// `H(v)`: `-Δ` on `y > 0` with `∂_y u = -v u` at `y = 0`.
    Robin,
    /// `-Δ - v(x) δ(y)` on the whole plane.
    DeltaPlane,
}

fn check(p: &Potential) -> Result<()> {
    if p.d != 1 {
        return Err(Error::Config(format!("plane operators need a one-dimensional potential, got d = {}", p.d)));
    }
    Ok(())
}

/// The `y` axis and the index of the line `y = 0` on it.
fn y_axis(g: &HalfSpaceGrid, sector: Sector) -> Result<(Axis, usize)> {
    let half = g.y_axis()?;
    Ok(match sector {
        Sector::Robin => (half, 0),
        Sector::DeltaPlane => {
            let c = half.len() - 1;
            (half.mirrored()?, c)
        }
    })
}

fn resolution_warnings(p: &Potential, y: &Axis, c: usize) -> Vec<String> {
    let vmax = p.max_value();
    let hy = if c + 1 < y.len() { y.nodes[c + 1] - y.nodes[c] } else { y.right_gap };
    if vmax > 0.0 && hy > 0.2 / vmax {
        vec![format!("boundary layer under-resolved: hy = {hy:.3e} > 0.2/max v = {:.3e}", 0.2 / vmax)]
    } else {
        vec![]
    }
}

/// Mass-scaled sparse matrix `W^{-1/2} A W^{-1/2}` of the quadratic form
/// `∫|∇u|² - ∫ v(x)|u(x,0)|² dx`, with P1 stiffness and lumped mass per
/// axis. Eigenvalues equal those of the generalized problem `A u = λ W u`.
fn assemble(p: &Potential, g: &HalfSpaceGrid, sector: Sector, kind: OperatorKind) -> Result<DiscreteOperator> {
    check(p)?;
    let x = g.x_axis()?;
    let (y, c) = y_axis(g, sector)?;
    let (nx, ny) = (x.len(), y.len());
    let (wx, wy) = (x.mass(), y.mass());
    let ((kxd, kxo), (kyd, kyo)) = (x.stiffness(), y.stiffness());
    let v: Vec<f64> = x.nodes.iter().map(|&t| p.value(&[t])).collect();
    // the shorter axis runs fastest to keep the bandwidth small
    let x_fast = nx <= ny;
    let idx = |i: usize, j: usize| if x_fast { j * nx + i } else { i * ny + j };
    let mut t = Vec::with_capacity(3 * nx * ny);
    for i in 0..nx {
        for j in 0..ny {
            let mut diag = kxd[i] / wx[i] + kyd[j] / wy[j];
            if j == c {
                diag -= v[i] / wy[c];
            }
            t.push((idx(i, j), idx(i, j), diag));
            if i + 1 < nx {
                t.push((idx(i + 1, j), idx(i, j), kxo[i] / (wx[i] * wx[i + 1]).sqrt()));
            }
            if j + 1 < ny {
                t.push((idx(i, j + 1), idx(i, j), kyo[j] / (wy[j] * wy[j + 1]).sqrt()));
            }
        }
    }
    Ok(DiscreteOperator {
        matrix: SymmetricMatrix::sparse(nx * ny, t)?,
        d: 1,
        kind,
        grid: g.describe(),
        tau: 0.0,
        warnings: resolution_warnings(p, &y, c),
    })
}

/// Sparse discretization of `H(v)` on `[-X, X] x [0, Y]`, Dirichlet on the
/// far sides, assembled from the quadratic form.
pub fn robin_halfspace_matrix(p: &Potential, g: &HalfSpaceGrid) -> Result<DiscreteOperator> {
    assemble(p, g, Sector::Robin, OperatorKind::RobinHalfSpace)
}

/// Sparse discretization of `-Δ - v(x)δ(y)` on `[-X, X] x [-Y, Y]`.
pub fn delta_plane_matrix(p: &Potential, g: &HalfSpaceGrid) -> Result<DiscreteOperator> {
    assemble(p, g, Sector::DeltaPlane, OperatorKind::DeltaPlane)
}

/// Counting function `τ ↦ N(-τ)` of a plane operator, reduced to the line
/// `y = 0`.
///
/// The `x` part is diagonalized once (`W_x^{-1/2} K_x W_x^{-1/2} = Ψ μ Ψ^T`);
/// for each mode the `y` problem is eliminated onto the line, leaving a
/// Schur complement `s_k(τ)`. Then
/// `N(-τ) = #{eigenvalues of V^{1/2} Ψ diag(1/s) Ψ^T V^{1/2} above 1}`,
/// which equals the inertia count of the full sparse matrix.
#[derive(Debug, Clone)]
pub struct PlaneCounter {
    sector: Sector,
    mu: Vec<f64>,
    /// `√v_i Ψ_ik` on the support nodes, row-major `support x nx`.
    coupled: Vec<f64>,
    support: usize,
    y_diag: Vec<f64>,
    y_off: Vec<f64>,
    y_mass: Vec<f64>,
    line: usize,
    vmax: f64,
    pub warnings: Vec<String>,
    pub grid: String,
}

impl PlaneCounter {
    pub fn new(p: &Potential, g: &HalfSpaceGrid, sector: Sector) -> Result<Self> {
        check(p)?;
        let x = g.x_axis()?;
        let (y, line) = y_axis(g, sector)?;
        let nx = x.len();
        let wx = x.mass();
        let (kxd, kxo) = x.stiffness();
        let diag: Vec<f64> = (0..nx).map(|i| kxd[i] / wx[i]).collect();
        let off: Vec<f64> = (0..nx.saturating_sub(1)).map(|i| kxo[i] / (wx[i] * wx[i + 1]).sqrt()).collect();
        let eig = tridiagonal_eigh(&diag, &off)?;
        let v: Vec<f64> = x.nodes.iter().map(|&t| p.value(&[t])).collect();
        let vmax = v.iter().cloned().fold(0.0, f64::max);
        let nodes: Vec<usize> = (0..nx).filter(|&i| v[i] > SUPPORT_CUTOFF * vmax && v[i] > 0.0).collect();
        let mut coupled = Vec::with_capacity(nodes.len() * nx);
        for &i in &nodes {
            let r = v[i].sqrt();
            coupled.extend((0..nx).map(|k| r * eig.vector(k)[i]));
        }
        let (y_diag, y_off) = y.stiffness();
        Ok(Self {
            sector,
            mu: eig.values,
            coupled,
            support: nodes.len(),
            y_diag,
            y_off,
            y_mass: y.mass(),
            line,
            vmax: p.max_value(),
            warnings: resolution_warnings(p, &y, line),
            grid: g.describe(),
        })
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    /// Schur complement on the line of `K_y + a W_y` (`a > 0`).
    fn schur(&self, a: f64) -> f64 {
        let n = self.y_diag.len();
        let t = |j: usize| self.y_diag[j] + a * self.y_mass[j];
        let mut s = t(self.line);
        if self.line + 1 < n {
            let mut r = t(n - 1);
            for j in (self.line + 1..n - 1).rev() {
                r = t(j) - self.y_off[j].powi(2) / r;
            }
            s -= self.y_off[self.line].powi(2) / r;
        }
        if self.line > 0 {
            let mut r = t(0);
            for j in 1..self.line {
                r = t(j) - self.y_off[j - 1].powi(2) / r;
            }
            s -= self.y_off[self.line - 1].powi(2) / r;
        }
        s
    }

    /// `I - V^{1/2} Ψ diag(1/s(τ)) Ψ^T V^{1/2}` on the support nodes.
    fn reduced(&self, tau: f64) -> Result<SymmetricMatrix> {
        let nx = self.mu.len();
        let inv: Vec<f64> = self.mu.iter().map(|&m| 1.0 / self.schur(m + tau)).collect();
        let rows = &self.coupled;
        SymmetricMatrix::dense_from_fn(self.support, |i, j| {
            let (a, b) = (&rows[i * nx..(i + 1) * nx], &rows[j * nx..(j + 1) * nx]);
            let dot: f64 = a.iter().zip(b).zip(&inv).map(|((x, y), w)| x * y * w).sum();
            if i == j {
                1.0 - dot
            } else {
                -dot
            }
        })
    }

    /// `(N(-τ - δ), N(-τ + δ))`; the two differ when an eigenvalue sits
    /// within the inertia tolerance of `-τ`.
    pub fn count_bracket(&self, tau: f64) -> Result<(usize, usize)> {
        if !(tau >= 0.0) || !tau.is_finite() {
            return Err(Error::Domain(format!("counting threshold -tau needs tau >= 0, got {tau}")));
        }
        if self.support == 0 {
            return Ok((0, 0));
        }
        inertia_bracket(&self.reduced(tau)?, 0.0)
    }

    /// `N(-τ)`: number of eigenvalues below `-τ`.
    pub fn count(&self, tau: f64) -> Result<usize> {
        if !(tau >= 0.0) || !tau.is_finite() {
            return Err(Error::Domain(format!("counting threshold -tau needs tau >= 0, got {tau}")));
        }
        if self.support == 0 {
            return Ok(0);
        }
        let mut t = tau;
        for _ in 0..4 {
            match inertia_below(&self.reduced(t)?, 0.0) {
                Err(Error::Pivot { .. }) => t = t * (1.0 + 1e-13) + 1e-300,
                r => return r,
            }
        }
        inertia_below(&self.reduced(t)?, 0.0)
    }

    /// Lower bound for the spectrum of the discretization.
    pub fn spectral_floor(&self) -> f64 {
        -(self.vmax * self.vmax) * 1.5 - 1.0
    }

    /// All negative eigenvalues below `-tau_min`, ascending, by slicing.
    pub fn negative_eigenvalues(&self, tau_min: f64, tol: f64) -> Result<Vec<f64>> {
        let floor = self.spectral_floor();
        eigenvalues_by_slicing(|l| self.count_at(l), floor, -tau_min.max(0.0), tol)
    }

    /// The `k` lowest eigenvalues below 0.
    pub fn lowest(&self, k: usize, tol: f64) -> Result<Vec<f64>> {
        lowest_by_slicing(|l| self.count_at(l), self.spectral_floor(), 0.0, k, tol)
    }

    /// Number of eigenvalues below `λ <= 0`.
    fn count_at(&self, lambda: f64) -> Result<usize> {
        self.count((-lambda).max(0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{eig_dense, eig_lanczos_lowest};

    fn small() -> HalfSpaceGrid {
        HalfSpaceGrid::uniform(4.0, 3.0, 21, 14).unwrap()
    }

    #[test]
    fn free_operator_is_positive() {
        let p = Potential::zero(1).unwrap();
        for op in [robin_halfspace_matrix(&p, &small()).unwrap(), delta_plane_matrix(&p, &small()).unwrap()] {
            assert_eq!(inertia_below(&op.matrix, 0.0).unwrap(), 0);
            assert!(eig_dense(&op.matrix.to_dense().unwrap()).unwrap().min().unwrap() > 0.0);
        }
        let c = PlaneCounter::new(&p, &small(), Sector::Robin).unwrap();
        assert_eq!(c.count(0.0).unwrap(), 0);
    }

    #[test]
    fn reduced_count_matches_full_inertia() {
        let p = Potential::gaussian(1, 3.0, 1.0).unwrap();
        let g = small();
        for sector in [Sector::Robin, Sector::DeltaPlane] {
            let op = assemble(&p, &g, sector, OperatorKind::RobinHalfSpace).unwrap();
            let c = PlaneCounter::new(&p, &g, sector).unwrap();
            for tau in [0.0, 0.01, 0.3, 1.0, 2.5, 5.0] {
                assert_eq!(c.count(tau).unwrap(), inertia_below(&op.matrix, -tau).unwrap(), "{sector:?} {tau}");
            }
        }
    }

    #[test]
    fn slicing_matches_dense_eigenvalues() {
        let p = Potential::gaussian(1, 3.0, 1.0).unwrap();
        let g = small();
        let op = robin_halfspace_matrix(&p, &g).unwrap();
        let dense = eig_dense(&op.matrix.to_dense().unwrap()).unwrap();
        let neg: Vec<f64> = dense.eigenvalues.iter().cloned().filter(|&e| e < 0.0).collect();
        let c = PlaneCounter::new(&p, &g, Sector::Robin).unwrap();
        let sliced = c.negative_eigenvalues(0.0, 1e-10).unwrap();
        assert_eq!(neg.len(), sliced.len());
        for (a, b) in neg.iter().zip(&sliced) {
            assert!((a - b).abs() < 1e-8, "{neg:?} {sliced:?}");
        }
        let lz = eig_lanczos_lowest(&op.matrix, 2, 1e-9).unwrap();
        assert!((lz.eigenvalues[0] - sliced[0]).abs() < 1e-7);
    }

    #[test]
    fn delta_plane_is_robin_at_half_coupling() {
        let p = Potential::gaussian(1, 4.0, 1.0).unwrap();
        let half = p.with_coupling(0.5).unwrap();
        let g = HalfSpaceGrid::uniform(6.0, 5.0, 59, 49).unwrap();
        let delta = PlaneCounter::new(&p, &g, Sector::DeltaPlane).unwrap().lowest(3, 1e-10).unwrap();
        let robin = PlaneCounter::new(&half, &g, Sector::Robin).unwrap().lowest(3, 1e-10).unwrap();
        assert_eq!(delta.len(), robin.len());
        for (a, b) in delta.iter().zip(&robin) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn coarse_boundary_layer_warns() {
        let p = Potential::gaussian(1, 20.0, 1.0).unwrap();
        let g = HalfSpaceGrid::uniform(4.0, 3.0, 11, 5).unwrap();
        assert!(!robin_halfspace_matrix(&p, &g).unwrap().warnings.is_empty());
    }

    #[test]
    fn rejects_two_dimensional_potentials() {
        let p = Potential::gaussian(2, 1.0, 1.0).unwrap();
        assert!(robin_halfspace_matrix(&p, &small()).is_err());
    }
}
