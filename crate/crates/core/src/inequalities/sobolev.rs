use super::{InequalityReport, ReportInputs};
use crate::constants::{daubechies_lower_factor, sobolev_trace_constant};
use crate::error::{Error, Result};
use crate::operators::fourier::{fft_box, frequency_squares, sample};
use crate::operators::{BoxGrid, Potential};
use rustfft::num_complex::Complex;

/// `‖(-Δ)^{1/4} u‖² / ‖u‖²_{2d/(d-1)}` for samples of `u` on the box.
///
/// With `û = h^d DFT(u)` the numerator is `(2L)^{-d} ∑ |ξ| |û|²` and the
/// `L^q` norm is the grid sum `h^d ∑ |u|^q`.
pub fn sobolev_quotient(u: &[f64], g: &BoxGrid) -> Result<f64> {
    if g.d < 2 {
        return Err(Error::Domain("the Sobolev quotient needs d >= 2".into()));
    }
    if u.len() != g.len() {
        return Err(Error::Data(format!("{} samples for {} grid points", u.len(), g.len())));
    }
    let d = g.d as i32;
    let hd = g.spacing().powi(d);
    let mut data: Vec<Complex<f64>> = u.iter().map(|&x| Complex::new(x, 0.0)).collect();
    fft_box(g, &mut data, false);
    let kinetic: f64 = frequency_squares(g).iter().zip(&data).map(|(s, c)| s.sqrt() * c.norm_sqr()).sum::<f64>() * hd * hd
        / (2.0 * g.half_length).powi(d);
    let q = 2.0 * g.d as f64 / (g.d as f64 - 1.0);
    let norm_q = (hd * u.iter().map(|x| x.abs().powf(q)).sum::<f64>()).powf(1.0 / q);
    if norm_q == 0.0 {
        return Err(Error::Data("trial function vanishes on the grid".into()));
    }
    Ok(kinetic / (norm_q * norm_q))
}

/// Confirms `S'_d <= ‖(-Δ)^{1/4}u‖² / ‖u‖²_{2d/(d-1)}` for a trial function
/// built from `trial`, the ingredient of the lower bound
/// `D_{0,d} >= factor · D^cl_{0,d}` (factor 4 for `d = 2`, 3 for `d = 3`).
///
/// The report has `lhs = S'_d` and `rhs` the quotient; the box and its
/// coarsening (half the modes on the same box) give the error estimate.
pub fn lower_bound_certificate(d: usize, g: &BoxGrid, trial: &Potential) -> Result<InequalityReport> {
    if !(d == 2 || d == 3) || g.d != d || trial.d != d {
        return Err(Error::Config(format!("lower-bound certificate needs d in {{2, 3}} on a matching box, got d = {d}")));
    }
    if trial.is_zero() {
        return Err(Error::Data("trial profile must be nontrivial".into()));
    }
    let fine = sobolev_quotient(&sample(trial, g), g)?;
    let coarse_g = BoxGrid::for_transform(d, g.half_length, (g.modes_per_axis / 2).max(2))?;
    let coarse = sobolev_quotient(&sample(trial, &coarse_g), &coarse_g)?;
    let err = (fine - coarse).abs();
    let s = sobolev_trace_constant(d)?;
    let factor = daubechies_lower_factor(d)?;
    Ok(InequalityReport::new(
        "sobolev-lower-bound",
        "S'_d ||u||^2_{2d/(d-1)} <= ||(-Delta)^{1/4} u||^2, which yields D_{0,d} >= factor D^cl_{0,d}",
        s,
        fine,
        factor,
        err,
        err <= 1e-3 * fine,
        ReportInputs {
            potential: trial.to_string(),
            gamma: Some(0.0),
            d,
            tau: None,
            grid: format!("box(d={d},L={},M={})", g.half_length, g.modes_per_axis),
        },
    )
    .with_certificate(format!("quotient {fine:.12} (half modes: {coarse:.12})"))
    .with_certificate(format!("implied lower-bound factor {factor}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequalities::Verdict;

    #[test]
    fn gaussian_quotient_exceeds_constant_in_two_dimensions() {
        let g = BoxGrid::for_transform(2, 40.0, 512).unwrap();
        let u = Potential::gaussian(2, 1.0, 1.0).unwrap();
        let r = lower_bound_certificate(2, &g, &u).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "{r:?}");
        assert!(r.rhs >= std::f64::consts::PI.sqrt());
        assert_eq!(r.factor, 4.0);
    }

    #[test]
    fn quotient_is_scale_invariant() {
        let g = BoxGrid::for_transform(2, 40.0, 512).unwrap();
        let a = sobolev_quotient(&sample(&Potential::gaussian(2, 1.0, 1.0).unwrap(), &g), &g).unwrap();
        let b = sobolev_quotient(&sample(&Potential::gaussian(2, 1.0, 1.3).unwrap(), &g), &g).unwrap();
        assert!((a - b).abs() <= 1e-3 * a, "{a} {b}");
    }
}
