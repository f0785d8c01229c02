use super::grid::BoxGrid;
use super::potential::Potential;
use super::{DiscreteOperator, OperatorKind};
use crate::error::{Error, Result};
use crate::numerics::{inertia_below, inertia_bracket, SymmetricMatrix};
use crate::specfun::bessel_k;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::Serialize;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Relative size of `v` at `|x| = L/2` above which a truncation warning is
/// attached.
const TAIL_WARNING: f64 = 1e-10;

/// Unnormalized `d`-dimensional DFT in place over the box index (row-major,
/// last axis fastest); `inverse` selects the sign `+i`.
pub fn fft_box(g: &BoxGrid, data: &mut [Complex<f64>], inverse: bool) {
    let m = g.modes_per_axis;
    let n = g.len();
    let mut planner = FftPlanner::<f64>::new();
    let fft = if inverse { planner.plan_fft_inverse(m) } else { planner.plan_fft_forward(m) };
    let mut line = vec![Complex::new(0.0, 0.0); m];
    for k in 0..g.d {
        let stride = m.pow((g.d - 1 - k) as u32);
        for base in 0..n {
            if !(base / stride).is_multiple_of(m) {
                continue;
            }
            for t in 0..m {
                line[t] = data[base + t * stride];
            }
            fft.process(&mut line);
            for t in 0..m {
                data[base + t * stride] = line[t];
            }
        }
    }
}

/// `|ξ|²` at every flat frequency index of the box.
pub fn frequency_squares(g: &BoxGrid) -> Vec<f64> {
    let m = g.modes_per_axis;
    let xi: Vec<f64> = (0..m).map(|j| g.frequency(j)).collect();
    (0..g.len())
        .map(|mut idx| {
            let mut s = 0.0;
            for _ in 0..g.d {
                s += xi[idx % m].powi(2);
                idx /= m;
            }
            s
        })
        .collect()
}

/// Inverse discrete Fourier transform of `symbol(|ξ|²)` over the box
/// frequencies: the first row of the circulant `C[symbol]`, indexed by the
/// offset between collocation points.
pub fn circulant_kernel<F: Fn(f64) -> f64>(g: &BoxGrid, symbol: F) -> Vec<f64> {
    let mut data: Vec<Complex<f64>> = frequency_squares(g).into_iter().map(|s| Complex::new(symbol(s), 0.0)).collect();
    fft_box(g, &mut data, true);
    let norm = 1.0 / g.len() as f64;
    data.iter().map(|c| c.re * norm).collect()
}

/// Offset index of `p - q` (componentwise modulo `M`) for flat indices.
fn offset(p: usize, q: usize, m: usize, d: usize) -> usize {
    let (mut p, mut q) = (p, q);
    let mut out = 0;
    let mut scale = 1;
    for _ in 0..d {
        let dp = (p % m + m - q % m) % m;
        out += dp * scale;
        scale *= m;
        p /= m;
        q /= m;
    }
    out
}

/// Dense `C[symbol] - diag(samples)` on the box.
fn multiplier_minus_diag(g: &BoxGrid, kernel: &[f64], samples: &[f64]) -> Result<SymmetricMatrix> {
    let m = g.modes_per_axis;
    SymmetricMatrix::dense_from_fn(g.len(), |i, j| kernel[offset(i, j, m, g.d)] - if i == j { samples[i] } else { 0.0 })
}

fn check_dims(p: &Potential, g: &BoxGrid) -> Result<()> {
    if p.d != g.d {
        return Err(Error::Config(format!("potential has d = {}, box has d = {}", p.d, g.d)));
    }
    if g.d > 2 {
        return Err(Error::Config("box operators are assembled for d = 1, 2 only".into()));
    }
    if !g.fits_dense() {
        return Err(Error::Capacity { what: "modes per axis of a dense box operator", n: g.modes_per_axis, limit: super::grid::MAX_MODES_2D });
    }
    Ok(())
}

fn tail_warnings(p: &Potential, g: &BoxGrid) -> Vec<String> {
    let vmax = p.max_value();
    if vmax == 0.0 {
        return vec![];
    }
    let tail = p.radial(0.5 * g.half_length) / vmax;
    if tail > TAIL_WARNING {
        vec![format!("potential not negligible at |x| = L/2: relative tail {tail:.3e}")]
    } else {
        vec![]
    }
}

/// Potential samples at the box collocation points.
pub fn sample(p: &Potential, g: &BoxGrid) -> Vec<f64> {
    g.points().iter().map(|x| p.value(x)).collect()
}

/// `√(-Δ + τ) - v` on the periodic box.
///
/// The matrix acts on point values: the multiplier is applied exactly per
/// Fourier mode and the potential by multiplication at the collocation
/// points. It is unitarily equivalent to the Fourier-basis matrix with
/// diagonal `√(|ξ|²+τ)` and off-diagonal `-v̂(ξ - ξ')`.
pub fn relativistic_matrix(p: &Potential, g: &BoxGrid, tau: f64) -> Result<DiscreteOperator> {
    relativistic_matrix_shifted(p, g, tau, 0.0)
}

/// `√(-Δ + τ) - offset - v`; `offset = m`, `τ = m²` gives the massive operator.
pub fn relativistic_matrix_shifted(p: &Potential, g: &BoxGrid, tau: f64, offset_value: f64) -> Result<DiscreteOperator> {
    check_dims(p, g)?;
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::Domain(format!("tau must be >= 0, got {tau}")));
    }
    let kernel = circulant_kernel(g, |s| (s + tau).sqrt() - offset_value);
    let matrix = multiplier_minus_diag(g, &kernel, &sample(p, g))?;
    Ok(DiscreteOperator {
        matrix,
        d: g.d,
        kind: OperatorKind::Relativistic,
        grid: format!("box(L={},M={})", g.half_length, g.modes_per_axis),
        tau,
        warnings: tail_warnings(p, g),
    })
}

/// Birman-Schwinger matrix `√v C[(|ξ|²+τ)^{-1/2}] √v` for given samples of `v >= 0`.
pub fn birman_schwinger_from_samples(samples: &[f64], g: &BoxGrid, tau: f64) -> Result<SymmetricMatrix> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::Domain(format!("the Birman-Schwinger operator needs tau > 0, got {tau}")));
    }
    if samples.len() != g.len() {
        return Err(Error::Data(format!("{} samples for {} grid points", samples.len(), g.len())));
    }
    if samples.iter().any(|&v| v < 0.0) {
        return Err(Error::Data("the Birman-Schwinger operator needs v >= 0".into()));
    }
    let kernel = circulant_kernel(g, |s| 1.0 / (s + tau).sqrt());
    let root: Vec<f64> = samples.iter().map(|v| v.sqrt()).collect();
    let m = g.modes_per_axis;
    SymmetricMatrix::dense_from_fn(g.len(), |i, j| root[i] * kernel[offset(i, j, m, g.d)] * root[j])
}

/// `v^{1/2} (-Δ + τ)^{-1/2} v^{1/2}` on the periodic box.
pub fn birman_schwinger_matrix(p: &Potential, g: &BoxGrid, tau: f64) -> Result<DiscreteOperator> {
    check_dims(p, g)?;
    let matrix = birman_schwinger_from_samples(&sample(p, g), g, tau)?;
    Ok(DiscreteOperator {
        matrix,
        d: g.d,
        kind: OperatorKind::BirmanSchwinger,
        grid: format!("box(L={},M={})", g.half_length, g.modes_per_axis),
        tau,
        warnings: tail_warnings(p, g),
    })
}

/// Number of eigenvalues of a Birman-Schwinger matrix above 1, with a flag
/// for eigenvalues within `1e-9` of the threshold.
pub fn count_above_one(bs: &SymmetricMatrix) -> Result<(usize, bool)> {
    let n = bs.n();
    let shifted = SymmetricMatrix::dense_from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 } - bs.get(i, j))?;
    let (lo, hi) = inertia_bracket(&shifted, 0.0)?;
    Ok((lo, lo != hi))
}

/// Both counting routes for `N(√(-Δ+τ) - v)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelativisticCount {
    pub count: usize,
    /// Negative eigenvalues of the relativistic matrix.
    pub direct: usize,
    /// Birman-Schwinger eigenvalues above 1 (`τ > 0` only).
    pub birman_schwinger: Option<usize>,
    /// An eigenvalue lies within the boundary tolerance of the threshold.
    pub boundary: bool,
    pub warnings: Vec<String>,
}

/// `N(√(-Δ+τ) - v)`: the Birman-Schwinger count for `τ > 0`, the direct
/// inertia count for `τ = 0`. Both routes are reported.
pub fn count_negatives_relativistic(p: &Potential, g: &BoxGrid, tau: f64) -> Result<RelativisticCount> {
    let op = relativistic_matrix(p, g, tau)?;
    let (lo, hi) = inertia_bracket(&op.matrix, 0.0)?;
    let mut warnings = op.warnings.clone();
    let mut boundary = lo != hi;
    if tau == 0.0 || p.is_zero() {
        if boundary {
            warnings.push("an eigenvalue lies within 1e-9 of 0; both counts reported".into());
        }
        return Ok(RelativisticCount { count: lo, direct: lo, birman_schwinger: if tau > 0.0 { Some(0) } else { None }, boundary, warnings });
    }
    let bs = birman_schwinger_matrix(p, g, tau)?;
    let (via_bs, near) = count_above_one(&bs.matrix)?;
    boundary |= near;
    if boundary {
        warnings.push("an eigenvalue lies within 1e-9 of the threshold; both counts reported".into());
    }
    Ok(RelativisticCount { count: via_bs, direct: lo, birman_schwinger: Some(via_bs), boundary, warnings })
}

/// Number of eigenvalues of `√(-Δ+τ) - offset - v` below `-δ`, for sample
/// vectors, with `δ` the inertia bracket tolerance.
pub fn count_negatives_samples(samples: &[f64], g: &BoxGrid, tau: f64, offset_value: f64) -> Result<usize> {
    let kernel = circulant_kernel(g, |s| (s + tau).sqrt() - offset_value);
    Ok(inertia_bracket(&multiplier_minus_diag(g, &kernel, samples)?, 0.0)?.0)
}

/// Dense `C[symbol(|ξ|²)] - diag(samples)` for an arbitrary real symbol.
pub fn multiplier_minus_potential<F: Fn(f64) -> f64>(g: &BoxGrid, symbol: F, samples: &[f64]) -> Result<SymmetricMatrix> {
    if samples.len() != g.len() {
        return Err(Error::Data(format!("{} samples for {} grid points", samples.len(), g.len())));
    }
    multiplier_minus_diag(g, &circulant_kernel(g, symbol), samples)
}

/// Number of Birman-Schwinger eigenvalues above 1 for samples of `v`, by
/// inertia of `I - K`; `τ ↦` this is the counting function `N(-τ, H(v))`.
pub fn count_birman_schwinger(samples: &[f64], g: &BoxGrid, tau: f64) -> Result<usize> {
    let mut t = tau;
    for _ in 0..4 {
        let bs = birman_schwinger_from_samples(samples, g, t)?;
        let n = bs.n();
        let shifted = SymmetricMatrix::dense_from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 } - bs.get(i, j))?;
        match inertia_below(&shifted, 0.0) {
            // an eigenvalue sits exactly at 1: move off it
            Err(Error::Pivot { .. }) => t *= 1.0 + 1e-12,
            r => return r,
        }
    }
    Err(Error::Pivot { index: 0, pivot: 0.0 })
}

/// Kernel of `(-Δ + τ)^{-1/2}` on the line, `K_0(√τ |r|)/π`.
pub fn resolvent_root_kernel_1d(r: f64, tau: f64) -> Result<f64> {
    Ok(bessel_k(0.0, tau.sqrt() * r.abs())? / std::f64::consts::PI)
}

/// Nyström discretization of the one-dimensional Birman-Schwinger operator
/// on `n` equispaced nodes of `[-a, a]`.
///
/// The logarithmic diagonal singularity of `K_0` is handled by the
/// corrected trapezoidal rule: the diagonal weight is
/// `(h/π)(ln(4π/(h√τ)) - γ_E)`.
pub fn nystrom_birman_schwinger(p: &Potential, tau: f64, a: f64, n: usize) -> Result<SymmetricMatrix> {
    if p.d != 1 {
        return Err(Error::Config("the Nyström discretization is one-dimensional".into()));
    }
    if !(tau > 0.0) {
        return Err(Error::Domain(format!("tau must be positive, got {tau}")));
    }
    if n < 2 || !(a > 0.0) {
        return Err(Error::Config("Nyström grid needs n >= 2 and a > 0".into()));
    }
    let h = 2.0 * a / (n - 1) as f64;
    let root: Vec<f64> = (0..n).map(|i| p.value(&[-a + h * i as f64]).sqrt()).collect();
    let diag = h / std::f64::consts::PI * ((4.0 * std::f64::consts::PI / (h * tau.sqrt())).ln() - EULER_GAMMA);
    // kernel depends only on |i - j|
    let mut k = vec![diag; n];
    for (d, kd) in k.iter_mut().enumerate().skip(1) {
        *kd = h * resolvent_root_kernel_1d(h * d as f64, tau)?;
    }
    SymmetricMatrix::dense_from_fn(n, |i, j| root[i] * k[i - j] * root[j])
}
