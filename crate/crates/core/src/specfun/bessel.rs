use crate::error::{Error, Result};
use std::f64::consts::PI;

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 10_000;
/// Series below this argument, Steed's continued fraction above.
const X_SWITCH: f64 = 2.0;

/// Taylor coefficients of `1/Γ(z) = Σ c_k z^k`, `k = 1..=26`.
const RECIP_GAMMA: [f64; 26] = [
    1.0,
    0.577_215_664_901_532_9,
    -0.655_878_071_520_253_8,
    -0.042_002_635_034_095_2,
    0.166_538_611_382_291_5,
    -0.042_197_734_555_544_3,
    -0.009_621_971_527_877_0,
    0.007_218_943_246_663_0,
    -0.001_165_167_591_859_1,
    -0.000_215_241_674_114_9,
    0.000_128_050_282_388_2,
    -0.000_020_134_854_780_7,
    -0.000_001_250_493_482_1,
    0.000_001_133_027_232_0,
    -0.000_000_205_633_841_7,
    0.000_000_006_116_095_0,
    0.000_000_005_002_007_5,
    -0.000_000_001_181_274_6,
    0.000_000_000_104_342_7,
    0.000_000_000_007_782_3,
    -0.000_000_000_003_696_8,
    0.000_000_000_000_510_0,
    -0.000_000_000_000_020_6,
    -0.000_000_000_000_005_4,
    0.000_000_000_000_001_4,
    0.000_000_000_000_000_1,
];

/// Temme's auxiliary quantities for `|mu| <= 1/2`:
/// `(gam1, gam2, 1/Γ(1+mu), 1/Γ(1-mu))`.
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    // 1/Γ(1+mu) = Σ_k c_{k+1} mu^k
    let mut even = 0.0; // Σ c_{2j+1} mu^{2j}
    let mut odd = 0.0; // Σ c_{2j+2} mu^{2j}
    let mu2 = mu * mu;
    for j in (0..RECIP_GAMMA.len() / 2).rev() {
        even = even * mu2 + RECIP_GAMMA[2 * j];
        odd = odd * mu2 + RECIP_GAMMA[2 * j + 1];
    }
    let gampl = even + mu * odd;
    let gammi = even - mu * odd;
    (-odd, even, gampl, gammi)
}

/// Modified Bessel function of the second kind `K_nu(x)`.
///
/// Uses Temme's series for `x < 2` and Steed's continued fraction `CF2`
/// otherwise, both for the fractional order `|mu| <= 1/2`, followed by upward
/// recurrence in the order.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("bessel_k requires x > 0, got {x}")));
    }
    if !(0.0..=5.0).contains(&nu) {
        return Err(Error::Domain(format!("bessel_k supports 0 <= nu <= 5, got {nu}")));
    }
    let nl = (nu + 0.5).floor() as usize;
    let mu = nu - nl as f64;
    let mu2 = mu * mu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;

    let (mut k_mu, mut k_mu1) = if x < X_SWITCH {
        let x2 = 0.5 * x;
        let pimu = PI * mu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = mu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(mu);
        let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let mut sum = ff;
        let ee = e.exp();
        let mut p = 0.5 * ee / gampl;
        let mut q = 0.5 / (ee * gammi);
        let mut c = 1.0;
        let dd = x2 * x2;
        let mut sum1 = p;
        let mut converged = false;
        for i in 1..=MAX_ITER {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - mu2);
            c *= dd / fi;
            p /= fi - mu;
            q /= fi + mu;
            let del = c * ff;
            sum += del;
            sum1 += c * (p - fi * ff);
            if del.abs() < sum.abs() * EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Convergence { message: "bessel_k series".into(), residuals: vec![] });
        }
        (sum, sum1 * xi2)
    } else {
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut delh = d;
        let mut h = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let a1 = 0.25 - mu2;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        let mut converged = false;
        for i in 2..=MAX_ITER {
            let fi = i as f64;
            a -= 2.0 * (fi - 1.0);
            c = -a * c / fi;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh *= b * d - 1.0 ;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Convergence { message: "bessel_k continued fraction".into(), residuals: vec![] });
        }
        h *= a1;
        let k = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
        (k, k * (mu + x + 0.5 - h) * xi)
    };

    for i in 1..=nl {
        let next = (mu + i as f64) * xi2 * k_mu1 + k_mu;
        k_mu = k_mu1;
        k_mu1 = next;
    }
    Ok(k_mu)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn half_order_closed_form() {
        for &x in &[1e-6, 0.01, 0.5, 1.0, 1.99, 2.0, 2.01, 7.5, 30.0, 50.0] {
            let exact = (PI / (2.0 * x)).sqrt() * (-x).exp();
            assert!(rel(bessel_k(0.5, x).unwrap(), exact) < 1e-13, "x = {x}");
            // K_{3/2}(x) = K_{1/2}(x) (1 + 1/x)
            assert!(rel(bessel_k(1.5, x).unwrap(), exact * (1.0 + 1.0 / x)) < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn tabulated_values() {
        // Abramowitz & Stegun, table 9.8
        assert!(rel(bessel_k(0.0, 1.0).unwrap(), 0.421_024_438_240_708_3) < 1e-13);
        assert!(rel(bessel_k(1.0, 1.0).unwrap(), 0.601_907_230_197_234_6) < 1e-13);
        assert!(rel(bessel_k(1.0, 2.0).unwrap(), 0.139_865_881_816_522_4) < 1e-13);
        assert!(rel(bessel_k(0.0, 0.1).unwrap(), 2.427_069_024_702_017) < 1e-13);
    }

    #[test]
    fn small_argument_log_behaviour() {
        // K_0(x) = -ln(x/2) - γ_E + O(x² ln x)
        let x = 1e-6;
        let approx = -(x / 2.0f64).ln() - 0.577_215_664_901_532_9;
        assert!(rel(bessel_k(0.0, x).unwrap(), approx) < 1e-10);
    }

    #[test]
    fn continuity_across_switch() {
        for &nu in &[0.0, 0.3, 1.0, 2.7, 5.0] {
            let lo = bessel_k(nu, X_SWITCH * (1.0 - 1e-12)).unwrap();
            let hi = bessel_k(nu, X_SWITCH).unwrap();
            assert!(rel(lo, hi) < 1e-10, "nu = {nu}");
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(bessel_k(0.0, 0.0).is_err());
        assert!(bessel_k(0.0, -1.0).is_err());
        assert!(bessel_k(6.0, 1.0).is_err());
        assert!(bessel_k(-0.1, 1.0).is_err());
    }
}
