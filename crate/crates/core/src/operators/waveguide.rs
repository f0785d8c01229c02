use crate::error::{Error, Result};

/// `∑_{k=1}^{k_max} (v0² - (πk/L)²)_+^γ`: the Riesz mean of the Dirichlet
/// Laplacian on `(0, L)` shifted by `-v0²`.
pub fn waveguide_riesz_exact(length: f64, v0: f64, gamma: f64, k_max: usize) -> Result<f64> {
    if !(length > 0.0) || !(v0 > 0.0) || !(gamma >= 0.0) || !length.is_finite() || !v0.is_finite() {
        return Err(Error::Domain(format!("waveguide needs L > 0, v0 > 0, gamma >= 0; got {length}, {v0}, {gamma}")));
    }
    let needed = (v0 * length / std::f64::consts::PI).ceil() as usize;
    if k_max < needed {
        return Err(Error::Completeness(format!("k_max = {k_max} misses modes below threshold; need at least {needed}")));
    }
    let mut sum = 0.0;
    for k in 1..=k_max {
        let gap = v0 * v0 - (std::f64::consts::PI * k as f64 / length).powi(2);
        if gap <= 0.0 {
            break;
        }
        sum += if gamma == 0.0 { 1.0 } else { gap.powf(gamma) };
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn single_mode() {
        assert_eq!(waveguide_riesz_exact(PI, 2.0, 1.0, 2).unwrap(), 3.0);
        assert_eq!(waveguide_riesz_exact(PI, 2.0, 0.0, 5).unwrap(), 1.0);
    }

    #[test]
    fn below_threshold_is_zero() {
        assert_eq!(waveguide_riesz_exact(2.0, 0.9 * PI / 2.0, 1.0, 1).unwrap(), 0.0);
    }

    #[test]
    fn too_few_modes() {
        assert!(matches!(waveguide_riesz_exact(PI, 10.0, 1.0, 3), Err(Error::Completeness(_))));
    }
}
