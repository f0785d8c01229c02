use super::grid::AxisSpec;
use crate::error::{Error, Result};
use crate::numerics::tridiagonal_eigenvalues;
use serde::Serialize;

/// `-d²/dy²` on `(0, Y)` with `u'(0) = -v u(0)` and `u(Y) = 0`, from the form
/// `∫|u'|² - v|u(0)|²` on a uniform P1 grid with lumped mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobinHalfLine {
    pub v: f64,
    pub depth: f64,
    pub n: usize,
}

impl RobinHalfLine {
    pub fn new(v: f64, depth: f64, n: usize) -> Result<Self> {
        if !v.is_finite() || !(depth > 0.0) || n == 0 {
            return Err(Error::Config(format!("half-line needs finite v, Y > 0, n >= 1; got {v}, {depth}, {n}")));
        }
        Ok(Self { v, depth, n })
    }

    pub fn spacing(&self) -> f64 {
        self.depth / (self.n as f64 + 1.0)
    }

    /// All eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let axis = AxisSpec::Uniform { extent: self.depth, n: self.n }.half_line()?;
        let w = axis.mass();
        let (k, off) = axis.stiffness();
        let mut diag: Vec<f64> = k.iter().zip(&w).map(|(k, w)| k / w).collect();
        diag[0] -= self.v / w[0];
        let off: Vec<f64> = (0..off.len()).map(|i| off[i] / (w[i] * w[i + 1]).sqrt()).collect();
        tridiagonal_eigenvalues(&diag, &off)
    }

    pub fn ground_state(&self) -> Result<f64> {
        Ok(self.eigenvalues()?[0])
    }

    /// `tr[H + τ]_-^γ` of the discretization.
    pub fn shifted_riesz(&self, tau: f64, gamma: f64) -> Result<f64> {
        let ev = self.eigenvalues()?;
        Ok(ev.iter().map(|&e| e + tau).filter(|&e| e < 0.0).map(|e| if gamma == 0.0 { 1.0 } else { (-e).powf(gamma) }).sum())
    }
}

/// Ground state at two resolutions and its Richardson extrapolation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extrapolated {
    pub coarse: f64,
    pub fine: f64,
    pub value: f64,
}

/// Ground state of the Robin half-line with `n` and `2n + 1` interior
/// points (spacing halved), extrapolated as `(4 λ(h/2) - λ(h)) / 3`.
pub fn robin_halfline_ground_state(v: f64, depth: f64, n: usize) -> Result<Extrapolated> {
    let coarse = RobinHalfLine::new(v, depth, n)?.ground_state()?;
    let fine = RobinHalfLine::new(v, depth, 2 * n + 1)?.ground_state()?;
    Ok(Extrapolated { coarse, fine, value: (4.0 * fine - coarse) / 3.0 })
}
