//! Riesz means of negative spectra, the counting-function representation
//! `tr[H]_-^γ = γ ∫_0^∞ N(-τ) τ^{γ-1} dτ`, and strong-coupling scans.

use crate::constants::{lt_classical, rel_classical, ConstantQuery};
use crate::error::{Error, Result};
use crate::numerics::{eig_dense, Spectrum};
use crate::operators::halfspace::{PlaneCounter, Sector};
use crate::operators::{relativistic_matrix, BoxGrid, HalfSpaceGrid, Potential};
use crate::specfun::QuadratureRule;
use serde::Serialize;
use std::fmt;

/// Relative change between two resolutions accepted as converged.
pub const CONVERGENCE_RTOL: f64 = 2e-2;
/// Absolute change always accepted (rounding of vanishing means).
pub const CONVERGENCE_ATOL: f64 = 1e-12;

/// Outcome of the resolution test attached to a computed Riesz mean.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationCertificate {
    pub converged: bool,
    pub warning: Option<String>,
    /// Absolute changes of the value under each refinement step.
    pub deltas: Vec<f64>,
}

impl TruncationCertificate {
    /// Certificate of an exact computation.
    pub fn exact() -> Self {
        Self { converged: true, warning: None, deltas: vec![] }
    }

    /// Compares a value at two resolutions.
    pub fn from_pair(coarse: f64, fine: f64, rtol: f64) -> Self {
        let delta = (fine - coarse).abs();
        let converged = delta <= rtol * fine.abs().max(coarse.abs()) || delta <= CONVERGENCE_ATOL;
        let warning = (!converged).then(|| format!("refinement changed the value by {delta:.3e} (from {coarse:.6e} to {fine:.6e})"));
        Self { converged, warning, deltas: vec![delta] }
    }

    /// Largest recorded change, the absolute error estimate.
    pub fn error(&self) -> f64 {
        self.deltas.iter().cloned().fold(0.0, f64::max)
    }

    pub fn note(&self) -> String {
        match &self.warning {
            Some(w) => w.clone(),
            None if self.deltas.is_empty() => "exact".into(),
            None => format!("converged under refinement, change {:.3e}", self.error()),
        }
    }
}

/// `∑ (λ_j)_-^γ` over the negative eigenvalues.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RieszMean {
    pub gamma: f64,
    pub value: f64,
    pub eigencount: usize,
    pub certificate: TruncationCertificate,
}

impl RieszMean {
    pub fn with_certificate(mut self, certificate: TruncationCertificate) -> Self {
        self.certificate = certificate;
        self
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!("gamma must be finite and >= 0, got {gamma}")));
    }
    Ok(())
}

/// Riesz mean of a spectrum; `γ = 0` counts strictly negative eigenvalues.
pub fn riesz_mean(s: &Spectrum, gamma: f64) -> Result<RieszMean> {
    riesz_mean_shifted(s, gamma, 0.0)
}

/// `tr[H + τ]_-^γ` from a spectrum of `H`.
pub fn riesz_mean_shifted(s: &Spectrum, gamma: f64, tau: f64) -> Result<RieszMean> {
    check_gamma(gamma)?;
    if !s.covers_below(-tau) {
        return Err(Error::Completeness(format!(
            "spectrum is certified only below {:?}, eigenvalues below {} are needed",
            s.certified_below, -tau
        )));
    }
    let neg: Vec<f64> = s.eigenvalues.iter().map(|&e| e + tau).filter(|&e| e < 0.0).collect();
    let value = if gamma == 0.0 { neg.len() as f64 } else { neg.iter().map(|e| (-e).powf(gamma)).sum() };
    Ok(RieszMean { gamma, value, eigencount: neg.len(), certificate: TruncationCertificate::exact() })
}

/// Jumps of a non-increasing counting function on `(lo, hi]`, as
/// `(location, size)` pairs, bracketed to width `tol + 1e-12 |location|`.
pub fn counting_jumps<F>(counter: &mut F, lo: f64, hi: f64, tol: f64) -> Result<Vec<(f64, usize)>>
where
    F: FnMut(f64) -> Result<usize>,
{
    let n_lo = counter(lo)?;
    let n_hi = counter(hi)?;
    if n_hi > n_lo {
        return Err(Error::Data(format!("counting function increases from {n_lo} at {lo} to {n_hi} at {hi}")));
    }
    let mut jumps = Vec::new();
    let mut stack = vec![(lo, hi, n_lo, n_hi)];
    while let Some((a, b, na, nb)) = stack.pop() {
        if na <= nb {
            if na < nb {
                return Err(Error::Data("counting function is not monotone".into()));
            }
            continue;
        }
        if b - a <= tol + 1e-12 * b.abs() {
            jumps.push((0.5 * (a + b), na - nb));
            continue;
        }
        let m = 0.5 * (a + b);
        let nm = counter(m)?;
        stack.push((a, m, na, nm));
        stack.push((m, b, nm, nb));
    }
    jumps.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(jumps)
}

/// `tr[H]_-^γ = γ ∫_0^{τ_max} N(-τ) τ^{γ-1} dτ` for a counter `τ ↦ N(-τ)`.
///
/// Jumps of the step function are located by bisection to
/// `1e-12 (max(1, τ_max) + τ)`; between consecutive jumps `N` is constant and the
/// panel is integrated by `rule` in the variable `u = τ^γ`. On the first
/// bracket `(0, tol]` the count is taken as `N(-tol)`, so the counter is
/// never evaluated at `τ = 0`.
pub fn riesz_via_counting<F>(mut counter: F, gamma: f64, rule: &QuadratureRule, tau_max: f64) -> Result<RieszMean>
where
    F: FnMut(f64) -> Result<usize>,
{
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!("the counting representation needs gamma > 0, got {gamma}")));
    }
    if !(tau_max > 0.0) || !tau_max.is_finite() {
        return Err(Error::Domain(format!("tau_max must be positive, got {tau_max}")));
    }
    let tail = counter(tau_max)?;
    if tail > 0 {
        return Err(Error::Tail { count: tail, tau_max });
    }
    let tol = 1e-12 * tau_max.max(1.0);
    let start = tol.min(0.5 * tau_max);
    let n0 = counter(start)?;
    let jumps = counting_jumps(&mut counter, start, tau_max, tol)?;
    let mut value = 0.0;
    let mut level = n0;
    let mut a = 0.0f64;
    let panel = |a: f64, b: f64, n: usize| -> f64 {
        if n == 0 || b <= a {
            return 0.0;
        }
        n as f64 * rule.integrate(a.powf(gamma), b.powf(gamma), |_| 1.0)
    };
    for &(b, size) in &jumps {
        value += panel(a, b, level);
        level -= size;
        a = b;
    }
    value += panel(a, tau_max, level);
    Ok(RieszMean { gamma, value, eigencount: n0, certificate: TruncationCertificate::exact() })
}

/// Family of a strong-coupling scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WeylKind {
    /// `tr[H(αv)]_-^γ` against `L^cl_{γ,d} α^{2γ+d} ∫v^{2γ+d}`.
    Surface,
    /// `tr[√(-Δ) - αv]_-^γ` against `D^cl_{γ,d} α^{γ+d} ∫v^{γ+d}`.
    Relativistic,
}

impl fmt::Display for WeylKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeylKind::Surface => "surface",
            WeylKind::Relativistic => "relativistic",
        })
    }
}

impl WeylKind {
    /// Power of the coupling and of `v` in the classical term.
    pub fn exponent(&self, gamma: f64, d: usize) -> f64 {
        match self {
            WeylKind::Surface => 2.0 * gamma + d as f64,
            WeylKind::Relativistic => gamma + d as f64,
        }
    }

    pub fn classical_constant(&self, gamma: f64, d: usize) -> Result<f64> {
        let q = ConstantQuery::new(gamma, d)?;
        match self {
            WeylKind::Surface => lt_classical(q),
            WeylKind::Relativistic => rel_classical(q),
        }
    }
}

/// One point of a strong-coupling scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeylPoint {
    pub alpha: f64,
    pub gamma: f64,
    pub d: usize,
    pub kind: WeylKind,
    pub riesz: f64,
    pub classical_rhs: f64,
    pub ratio: f64,
    pub converged: bool,
    pub warning: Option<String>,
}

pub const SCAN_HEADER: &str = "alpha,gamma,d,kind,riesz,classical_rhs,ratio,converged";

impl WeylPoint {
    pub fn to_csv(&self) -> String {
        format!(
            "{:.16e},{:.16e},{},{},{:.16e},{:.16e},{:.16e},{}",
            self.alpha, self.gamma, self.d, self.kind, self.riesz, self.classical_rhs, self.ratio, self.converged
        )
    }
}

/// Strong-coupling scan: `ratio(α) = tr[·]_-^γ / (C^cl α^p ∫v^p)`.
///
/// `builder` returns the Riesz mean at coupling `α` with its certificate;
/// `norm_integral` is `∫v^p` for the unit-coupling profile.
pub fn weyl_scan<F>(mut builder: F, gamma: f64, d: usize, alphas: &[f64], norm_integral: f64, kind: WeylKind) -> Result<Vec<WeylPoint>>
where
    F: FnMut(f64) -> Result<RieszMean>,
{
    check_gamma(gamma)?;
    if alphas.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Config("scan couplings must be strictly increasing".into()));
    }
    if !(norm_integral > 0.0) {
        return Err(Error::Config(format!("norm integral must be positive, got {norm_integral}")));
    }
    let c = kind.classical_constant(gamma, d)?;
    let p = kind.exponent(gamma, d);
    let mut out = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let mean = builder(alpha)?;
        let rhs = c * alpha.powf(p) * norm_integral;
        out.push(WeylPoint {
            alpha,
            gamma,
            d,
            kind,
            riesz: mean.value,
            classical_rhs: rhs,
            ratio: mean.value / rhs,
            converged: mean.certificate.converged,
            warning: mean.certificate.warning.clone(),
        });
    }
    Ok(out)
}

/// `tr[√(-Δ+τ) - v]_-^γ` from the dense box spectrum.
pub fn relativistic_riesz(p: &Potential, g: &BoxGrid, tau: f64, gamma: f64) -> Result<RieszMean> {
    let op = relativistic_matrix(p, g, tau)?;
    riesz_mean(&eig_dense(&op.matrix)?, gamma)
}

/// Relativistic Riesz mean at `g` and its refinement, reporting the fine value.
pub fn relativistic_riesz_certified(p: &Potential, g: &BoxGrid, gamma: f64) -> Result<RieszMean> {
    let coarse = relativistic_riesz(p, g, 0.0, gamma)?;
    let fine = relativistic_riesz(p, &g.refined()?, 0.0, gamma)?;
    let cert = TruncationCertificate::from_pair(coarse.value, fine.value, CONVERGENCE_RTOL);
    Ok(fine.with_certificate(cert))
}

/// `tr[H(v) + τ]_-^γ` of the Robin discretization, from its sliced negative
/// spectrum below `-τ`.
pub fn surface_riesz(p: &Potential, g: &HalfSpaceGrid, gamma: f64, tau: f64) -> Result<RieszMean> {
    check_gamma(gamma)?;
    let counter = PlaneCounter::new(p, g, Sector::Robin)?;
    let tol = 1e-9 * (1.0 + p.max_value().powi(2));
    let ev = counter.negative_eigenvalues(tau.max(0.0), tol)?;
    // every eigenvalue below -τ is found, so the list is certified there
    riesz_mean_shifted(&Spectrum::partial(ev, Some(-tau.max(0.0))), gamma, tau)
}

/// Surface Riesz mean at `g` and at its refinement, reporting the fine value.
pub fn surface_riesz_certified(p: &Potential, g: &HalfSpaceGrid, gamma: f64, tau: f64) -> Result<RieszMean> {
    let coarse = surface_riesz(p, g, gamma, tau)?;
    let fine = surface_riesz(p, &g.refined(), gamma, tau)?;
    let cert = TruncationCertificate::from_pair(coarse.value, fine.value, CONVERGENCE_RTOL);
    Ok(fine.with_certificate(cert))
}
