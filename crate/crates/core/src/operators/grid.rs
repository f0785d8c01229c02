use crate::error::{Error, Result};
use super::Potential;
use serde::Serialize;
use std::f64::consts::PI;

/// Largest `M` per dimension for which box operators are assembled as dense
/// matrices.
pub const MAX_MODES_1D: usize = 2048;
pub const MAX_MODES_2D: usize = 48;
/// Largest `M` for FFT-only work (Sobolev quotients) in `d = 3`.
pub const MAX_MODES_3D: usize = 64;
/// Largest `M` for FFT-only work in `d = 2`.
pub const MAX_TRANSFORM_2D: usize = 1024;

/// Periodic box `[-L, L]^d` with `M` collocation points per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoxGrid {
    pub d: usize,
    pub half_length: f64,
    pub modes_per_axis: usize,
}

impl BoxGrid {
    /// Box for dense operator assembly.
    pub fn new(d: usize, half_length: f64, modes_per_axis: usize) -> Result<Self> {
        Self::build(d, half_length, modes_per_axis, MAX_MODES_2D)
    }

    /// Box used only through transforms, which allows finer `d = 2` grids.
    pub fn for_transform(d: usize, half_length: f64, modes_per_axis: usize) -> Result<Self> {
        Self::build(d, half_length, modes_per_axis, MAX_TRANSFORM_2D)
    }

    /// Whether dense operators may be assembled on this box.
    pub fn fits_dense(&self) -> bool {
        self.d == 1 || (self.d == 2 && self.modes_per_axis <= MAX_MODES_2D)
    }

    fn build(d: usize, half_length: f64, modes_per_axis: usize, limit_2d: usize) -> Result<Self> {
        let limit = match d {
            1 => MAX_MODES_1D,
            2 => limit_2d,
            3 => MAX_MODES_3D,
            _ => return Err(Error::Config(format!("box grids exist for d = 1, 2, 3, got {d}"))),
        };
        if modes_per_axis < 2 || !modes_per_axis.is_multiple_of(2) {
            return Err(Error::Config(format!("modes per axis must be even and >= 2, got {modes_per_axis}")));
        }
        if modes_per_axis > limit {
            return Err(Error::Capacity { what: "modes per axis", n: modes_per_axis, limit });
        }
        if !(half_length > 0.0) || !half_length.is_finite() {
            return Err(Error::Config(format!("box half-length must be positive, got {half_length}")));
        }
        Ok(Self { d, half_length, modes_per_axis })
    }

    pub fn len(&self) -> usize {
        self.modes_per_axis.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_length / self.modes_per_axis as f64
    }

    /// Collocation points `x_j = -L + 2Lj/M` along one axis.
    pub fn axis_points(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.modes_per_axis).map(|j| -self.half_length + h * j as f64).collect()
    }

    /// Frequency `(π/L) k` for FFT index `j`, with `k ∈ {-M/2, ..., M/2-1}`.
    pub fn frequency(&self, j: usize) -> f64 {
        let m = self.modes_per_axis as i64;
        let k = if (j as i64) < m / 2 { j as i64 } else { j as i64 - m };
        PI / self.half_length * k as f64
    }

    /// All points in row-major order (last axis fastest).
    pub fn points(&self) -> Vec<Vec<f64>> {
        let ax = self.axis_points();
        let m = self.modes_per_axis;
        (0..self.len())
            .map(|mut idx| {
                let mut p = vec![0.0; self.d];
                for k in (0..self.d).rev() {
                    p[k] = ax[idx % m];
                    idx /= m;
                }
                p
            })
            .collect()
    }

    /// Twice the modes and 1.5 times the box, the convergence step.
    pub fn refined(&self) -> Result<Self> {
        Self::new(self.d, 1.5 * self.half_length, 2 * self.modes_per_axis)
    }
}

/// Whether an axis end carries a Dirichlet condition or is free (natural).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    Free,
    Dirichlet,
}

/// Nodes of a one-dimensional P1 discretization.
///
/// `nodes` are the unknowns; a Dirichlet end adds a boundary point at
/// distance `left_gap` (`right_gap`) outside the first (last) node.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub nodes: Vec<f64>,
    pub left: End,
    pub right: End,
    pub left_gap: f64,
    pub right_gap: f64,
}

impl Axis {
    /// Builds an axis from every point including Dirichlet boundary points.
    fn from_points(points: &[f64], left: End, right: End) -> Self {
        let lo = if left == End::Dirichlet { 1 } else { 0 };
        let hi = if right == End::Dirichlet { points.len() - 1 } else { points.len() };
        let nodes = points[lo..hi].to_vec();
        let left_gap = if left == End::Dirichlet { points[1] - points[0] } else { 0.0 };
        let right_gap = if right == End::Dirichlet { points[points.len() - 1] - points[points.len() - 2] } else { 0.0 };
        Self { nodes, left, right, left_gap, right_gap }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn gaps(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.len();
        let mut left = vec![0.0; n];
        let mut right = vec![0.0; n];
        for i in 0..n {
            left[i] = if i > 0 { self.nodes[i] - self.nodes[i - 1] } else if self.left == End::Dirichlet { self.left_gap } else { 0.0 };
            right[i] = if i + 1 < n {
                self.nodes[i + 1] - self.nodes[i]
            } else if self.right == End::Dirichlet {
                self.right_gap
            } else {
                0.0
            };
        }
        (left, right)
    }

    /// Lumped mass weights `(h_left + h_right)/2`.
    pub fn mass(&self) -> Vec<f64> {
        let (l, r) = self.gaps();
        l.iter().zip(&r).map(|(a, b)| 0.5 * (a + b)).collect()
    }

    /// Stiffness `∫ u'²` as `(diagonal, superdiagonal)`.
    pub fn stiffness(&self) -> (Vec<f64>, Vec<f64>) {
        let (l, r) = self.gaps();
        let inv = |h: f64| if h > 0.0 { 1.0 / h } else { 0.0 };
        let diag = l.iter().zip(&r).map(|(&a, &b)| inv(a) + inv(b)).collect();
        let off = (0..self.len().saturating_sub(1)).map(|i| -1.0 / (self.nodes[i + 1] - self.nodes[i])).collect();
        (diag, off)
    }

    /// Mirror of a free-left axis about its first node: Dirichlet at both
    /// ends, with the free node in the middle.
    pub fn mirrored(&self) -> Result<Self> {
        if self.left != End::Free || self.right != End::Dirichlet {
            return Err(Error::Config("only a free-left, Dirichlet-right axis can be mirrored".into()));
        }
        let origin = self.nodes[0];
        let mut nodes: Vec<f64> = self.nodes[1..].iter().rev().map(|&y| 2.0 * origin - y).collect();
        nodes.extend_from_slice(&self.nodes);
        Ok(Self { nodes, left: End::Dirichlet, right: End::Dirichlet, left_gap: self.right_gap, right_gap: self.right_gap })
    }

    pub fn min_spacing(&self) -> f64 {
        self.nodes.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }
}

/// Parameters from which an axis is generated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AxisSpec {
    /// `n` interior points at spacing `extent/(n+1)` (times 2 for symmetric axes).
    Uniform { extent: f64, n: usize },
    /// Spacing `h0` on `[0, core]`, then growing by `ratio` up to `hmax`,
    /// until `extent`.
    Graded { extent: f64, core: f64, h0: f64, ratio: f64, hmax: f64 },
}

/// Points `0 = t_0 < t_1 < ... < t_m = extent` of a graded half-axis.
fn graded_points(extent: f64, core: f64, h0: f64, ratio: f64, hmax: f64) -> Vec<f64> {
    let mut pts = vec![0.0];
    let mut h = h0;
    let mut t = 0.0;
    loop {
        if t + 1e-12 >= core {
            h = (h * ratio).min(hmax);
        }
        if t + h >= extent - 0.5 * h {
            break;
        }
        t += h;
        pts.push(t);
    }
    pts.push(extent);
    pts
}

impl AxisSpec {
    fn validate(&self) -> Result<()> {
        match *self {
            AxisSpec::Uniform { extent, n } => {
                if !(extent > 0.0) || n == 0 {
                    return Err(Error::Config(format!("uniform axis needs extent > 0 and n >= 1, got {extent}, {n}")));
                }
            }
            AxisSpec::Graded { extent, core, h0, ratio, hmax } => {
                if !(extent > 0.0 && core >= 0.0 && h0 > 0.0 && ratio >= 1.0 && hmax >= h0) {
                    return Err(Error::Config(format!(
                        "graded axis needs extent > 0, core >= 0, h0 > 0, ratio >= 1, hmax >= h0; got {self:?}"
                    )));
                }
                if extent / h0 > 1e7 {
                    return Err(Error::Capacity { what: "graded axis points", n: (extent / h0) as usize, limit: 10_000_000 });
                }
            }
        }
        Ok(())
    }

    pub fn extent(&self) -> f64 {
        match *self {
            AxisSpec::Uniform { extent, .. } | AxisSpec::Graded { extent, .. } => extent,
        }
    }

    /// Axis on `[-extent, extent]` with Dirichlet ends.
    pub fn symmetric(&self) -> Result<Axis> {
        self.validate()?;
        let pts = match *self {
            AxisSpec::Uniform { extent, n } => {
                let h = 2.0 * extent / (n as f64 + 1.0);
                (0..n + 2).map(|i| -extent + h * i as f64).collect::<Vec<_>>()
            }
            AxisSpec::Graded { extent, core, h0, ratio, hmax } => {
                let half = graded_points(extent, core, h0, ratio, hmax);
                let mut all: Vec<f64> = half[1..].iter().rev().map(|t| -t).collect();
                all.extend_from_slice(&half);
                all
            }
        };
        Ok(Axis::from_points(&pts, End::Dirichlet, End::Dirichlet))
    }

    /// Axis on `[0, extent]`, free at 0 and Dirichlet at `extent`.
    pub fn half_line(&self) -> Result<Axis> {
        self.validate()?;
        let pts = match *self {
            AxisSpec::Uniform { extent, n } => {
                let h = extent / (n as f64 + 1.0);
                (0..n + 2).map(|i| h * i as f64).collect::<Vec<_>>()
            }
            AxisSpec::Graded { extent, core, h0, ratio, hmax } => graded_points(extent, core, h0, ratio, hmax),
        };
        Ok(Axis::from_points(&pts, End::Free, End::Dirichlet))
    }

    /// Half the spacing everywhere (grading ratio replaced by its square root).
    pub fn refined(&self) -> Self {
        match *self {
            AxisSpec::Uniform { extent, n } => AxisSpec::Uniform { extent, n: 2 * n + 1 },
            AxisSpec::Graded { extent, core, h0, ratio, hmax } => {
                AxisSpec::Graded { extent, core, h0: 0.5 * h0, ratio: ratio.sqrt(), hmax: 0.5 * hmax }
            }
        }
    }

    /// Extent scaled by `factor` at the same spacing.
    pub fn enlarged(&self, factor: f64) -> Self {
        match *self {
            AxisSpec::Uniform { extent, n } => {
                AxisSpec::Uniform { extent: factor * extent, n: ((n as f64 + 1.0) * factor).round() as usize - 1 }
            }
            AxisSpec::Graded { extent, core, h0, ratio, hmax } => AxisSpec::Graded { extent: factor * extent, core, h0, ratio, hmax },
        }
    }
}

/// Grid for the half-plane `{(x, y): y > 0}` truncated to `[-X, X] x [0, Y]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HalfSpaceGrid {
    pub x: AxisSpec,
    pub y: AxisSpec,
}

impl HalfSpaceGrid {
    /// Uniform grid: `hx = 2X/(nx+1)`, `hy = Y/(ny+1)`, `ny + 1` unknowns in
    /// `y` including the boundary row.
    pub fn uniform(x_half_length: f64, y_depth: f64, nx: usize, ny: usize) -> Result<Self> {
        let g = Self { x: AxisSpec::Uniform { extent: x_half_length, n: nx }, y: AxisSpec::Uniform { extent: y_depth, n: ny } };
        g.x.validate()?;
        g.y.validate()?;
        Ok(g)
    }

    pub fn graded(x: AxisSpec, y: AxisSpec) -> Result<Self> {
        x.validate()?;
        y.validate()?;
        Ok(Self { x, y })
    }

    /// Graded grid on `[-x_extent, x_extent] x [0, y_depth]` for the
    /// potential `p`: spacing `0.3/sup v` in `x` across `1.5` times the
    /// effective radius and `0.1/sup v` in `y` at the boundary, growing by
    /// 10% per cell up to 0.5.
    pub fn adapted(p: &Potential, x_extent: f64, y_depth: f64) -> Result<Self> {
        let vmax = p.max_value().max(1.0);
        let core = (1.5 * p.effective_radius(1e-3)).clamp(1.0, x_extent);
        Self::graded(
            AxisSpec::Graded { extent: x_extent, core, h0: 0.3 / vmax, ratio: 1.1, hmax: 0.5 },
            AxisSpec::Graded { extent: y_depth, core: 0.0, h0: 0.1 / vmax, ratio: 1.1, hmax: 0.5 },
        )
    }

    pub fn x_axis(&self) -> Result<Axis> {
        self.x.symmetric()
    }

    pub fn y_axis(&self) -> Result<Axis> {
        self.y.half_line()
    }

    /// Doubled resolution and 1.5 times the extents, the convergence step.
    pub fn refined(&self) -> Self {
        Self { x: self.x.refined().enlarged(1.5), y: self.y.refined().enlarged(1.5) }
    }

    pub fn describe(&self) -> String {
        let ax = |a: &AxisSpec| match *a {
            AxisSpec::Uniform { extent, n } => format!("uniform(extent={extent},n={n})"),
            AxisSpec::Graded { extent, core, h0, ratio, hmax } => {
                format!("graded(extent={extent},core={core},h0={h0},ratio={ratio},hmax={hmax})")
            }
        };
        format!("x:{};y:{}", ax(&self.x), ax(&self.y))
    }
}
