use crate::error::{Error, Result};
use crate::specfun::{gamma_fn, gauss_legendre, QuadratureRule};
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// Radial profile of a nonnegative potential centred at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Profile {
    /// `amp · exp(-|x|²/width²)`
    Gaussian { amp: f64, width: f64 },
    /// `amp · (1 - |x|²/radius²)_+^3`
    Bump { amp: f64, radius: f64 },
    /// `amp · sech²(x/width)`, one dimension only
    Sech2 { amp: f64, width: f64 },
    Zero,
}

/// `coupling · profile(x)` on `ℝ^d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Potential {
    pub d: usize,
    pub profile: Profile,
    pub coupling: f64,
}

/// Surface area of the unit sphere in `ℝ^d`.
fn sphere_area(d: usize) -> f64 {
    let df = d as f64;
    2.0 * PI.powf(df / 2.0) / gamma_fn(df / 2.0).expect("positive argument")
}

impl Potential {
    pub fn new(d: usize, profile: Profile, coupling: f64) -> Result<Self> {
        if !(1..=3).contains(&d) {
            return Err(Error::Config(format!("potentials live in d = 1, 2 or 3, got {d}")));
        }
        if !(coupling >= 0.0) || !coupling.is_finite() {
            return Err(Error::Config(format!("coupling must be finite and >= 0, got {coupling}")));
        }
        let check = |name: &str, x: f64, strict: bool| {
            if !x.is_finite() || x < 0.0 || (strict && x == 0.0) {
                Err(Error::Config(format!("{name} must be {}, got {x}", if strict { "positive" } else { ">= 0" })))
            } else {
                Ok(())
            }
        };
        match profile {
            Profile::Gaussian { amp, width } => {
                check("amp", amp, false)?;
                check("width", width, true)?;
            }
            Profile::Bump { amp, radius } => {
                check("amp", amp, false)?;
                check("radius", radius, true)?;
            }
            Profile::Sech2 { amp, width } => {
                if d != 1 {
                    return Err(Error::Config("the sech2 profile is one-dimensional".into()));
                }
                check("amp", amp, false)?;
                check("width", width, true)?;
            }
            Profile::Zero => {}
        }
        Ok(Self { d, profile, coupling })
    }

    pub fn gaussian(d: usize, amp: f64, width: f64) -> Result<Self> {
        Self::new(d, Profile::Gaussian { amp, width }, 1.0)
    }

    pub fn bump(d: usize, amp: f64, radius: f64) -> Result<Self> {
        Self::new(d, Profile::Bump { amp, radius }, 1.0)
    }

    pub fn sech2(amp: f64, width: f64) -> Result<Self> {
        Self::new(1, Profile::Sech2 { amp, width }, 1.0)
    }

    pub fn zero(d: usize) -> Result<Self> {
        Self::new(d, Profile::Zero, 1.0)
    }

    /// Same profile with a different coupling.
    pub fn with_coupling(&self, coupling: f64) -> Result<Self> {
        Self::new(self.d, self.profile, coupling)
    }

    /// Same profile in another dimension.
    pub fn with_dim(&self, d: usize) -> Result<Self> {
        Self::new(d, self.profile, self.coupling)
    }

    /// Peak amplitude times coupling.
    fn scale(&self) -> f64 {
        self.coupling
            * match self.profile {
                Profile::Gaussian { amp, .. } | Profile::Bump { amp, .. } | Profile::Sech2 { amp, .. } => amp,
                Profile::Zero => 0.0,
            }
    }

    pub fn is_zero(&self) -> bool {
        self.scale() == 0.0
    }

    /// `sup v`, attained at the origin.
    pub fn max_value(&self) -> f64 {
        self.scale()
    }

    /// Value at radius `r = |x|`.
    pub fn radial(&self, r: f64) -> f64 {
        let r = r.abs();
        self.coupling
            * match self.profile {
                Profile::Gaussian { amp, width } => amp * (-(r / width).powi(2)).exp(),
                Profile::Bump { amp, radius } => {
                    let t = 1.0 - (r / radius).powi(2);
                    if t > 0.0 {
                        amp * t * t * t
                    } else {
                        0.0
                    }
                }
                Profile::Sech2 { amp, width } => {
                    let c = (r / width).cosh();
                    amp / (c * c)
                }
                Profile::Zero => 0.0,
            }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.radial(x.iter().map(|t| t * t).sum::<f64>().sqrt())
    }

    /// Radius beyond which `v < rel · sup v` (or the support radius).
    pub fn effective_radius(&self, rel: f64) -> f64 {
        match self.profile {
            Profile::Gaussian { width, .. } => width * (1.0 / rel).ln().sqrt(),
            Profile::Bump { radius, .. } => radius,
            Profile::Sech2 { width, .. } => width * (1.0 / rel.sqrt()).acosh(),
            Profile::Zero => 0.0,
        }
    }

    /// `∫_{ℝ^d} v^p dx` in closed form, `p > 0`.
    pub fn lp_integral(&self, p: f64) -> Result<f64> {
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::Domain(format!("exponent must be positive, got {p}")));
        }
        let d = self.d as f64;
        let c = self.coupling.powf(p);
        Ok(match self.profile {
            Profile::Gaussian { amp, width } => c * amp.powf(p) * (PI / p).powf(d / 2.0) * width.powf(d),
            Profile::Bump { amp, radius } => {
                c * amp.powf(p) * PI.powf(d / 2.0) * radius.powf(d) * gamma_fn(3.0 * p + 1.0)? / gamma_fn(3.0 * p + 1.0 + d / 2.0)?
            }
            Profile::Sech2 { amp, width } => c * amp.powf(p) * width * gamma_fn(p)? * PI.sqrt() / gamma_fn(p + 0.5)?,
            Profile::Zero => 0.0,
        })
    }

    /// Radius `r*` with `v(r*) = level` for `0 < level < sup v`.
    fn level_radius(&self, level: f64) -> f64 {
        let t = level / self.scale();
        match self.profile {
            Profile::Gaussian { width, .. } => width * (-t.ln()).sqrt(),
            Profile::Bump { radius, .. } => radius * (1.0 - t.cbrt()).max(0.0).sqrt(),
            Profile::Sech2 { width, .. } => width * (1.0 / t.sqrt()).acosh(),
            Profile::Zero => 0.0,
        }
    }

    /// `∫_{ℝ^d} (v² - τ)_+^p dx` for `τ >= 0`, `p > 0`.
    ///
    /// The integrand vanishes outside the ball of radius `r*` with
    /// `v(r*)² = τ`; the radial integral is taken with panels graded toward
    /// `r*`, where it has an algebraic endpoint singularity.
    pub fn shifted_integral(&self, tau: f64, p: f64) -> Result<f64> {
        if !(tau >= 0.0) || !tau.is_finite() {
            return Err(Error::Domain(format!("tau must be >= 0, got {tau}")));
        }
        if tau == 0.0 {
            return self.lp_integral(2.0 * p);
        }
        if !(p > 0.0) {
            return Err(Error::Domain(format!("exponent must be positive, got {p}")));
        }
        let vmax = self.max_value();
        if vmax * vmax <= tau {
            return Ok(0.0);
        }
        let r_star = self.level_radius(tau.sqrt());
        let rule = gauss_legendre(40)?;
        let d = self.d;
        let f = |r: f64| {
            let v = self.radial(r);
            (v * v - tau).max(0.0).powf(p) * r.powi(d as i32 - 1)
        };
        Ok(sphere_area(d) * graded_toward_end(&rule, r_star, f))
    }
}

/// `∫_0^b f` with geometric panels accumulating at `b`.
fn graded_toward_end<F: Fn(f64) -> f64>(rule: &QuadratureRule, b: f64, f: F) -> f64 {
    const SIGMA: f64 = 0.2;
    const LEVELS: usize = 30;
    // u = b - r runs from b down to 0
    let mut sum = 0.0;
    let mut hi = b;
    for _ in 0..LEVELS {
        let lo = hi * SIGMA;
        sum += rule.integrate(lo, hi, |u| f(b - u));
        hi = lo;
    }
    sum + rule.integrate(0.0, hi, |u| f(b - u))
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.profile {
            Profile::Gaussian { amp, width } => write!(f, "gaussian:amp={amp},width={width}")?,
            Profile::Bump { amp, radius } => write!(f, "bump:amp={amp},radius={radius}")?,
            Profile::Sech2 { amp, width } => write!(f, "sech2:amp={amp},width={width}")?,
            Profile::Zero => write!(f, "zero:")?,
        }
        if self.coupling != 1.0 {
            write!(f, ",coupling={}", self.coupling)?;
        }
        write!(f, ",d={}", self.d)
    }
}

impl FromStr for Potential {
    type Err = Error;

    /// Parses `family:key=value,...`.
    ///
    /// Families are `gaussian` (`amp`, `width`), `bump` (`amp`, `radius`),
    /// `sech2` (`amp`, `width`) and `zero`. Optional keys: `coupling`
    /// (default 1) and `d` (default 1).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (family, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut amp = None;
        let mut width = None;
        let mut radius = None;
        let mut coupling = 1.0;
        let mut d = 1usize;
        for item in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value in potential spec, got '{item}'")))?;
            let k = k.trim();
            let v = v.trim();
            let num = || v.parse::<f64>().map_err(|_| Error::Parse(format!("'{v}' is not a number (key '{k}')")));
            match k {
                "amp" => amp = Some(num()?),
                "width" => width = Some(num()?),
                "radius" => radius = Some(num()?),
                "coupling" | "alpha" => coupling = num()?,
                "d" => d = v.parse().map_err(|_| Error::Parse(format!("'{v}' is not a dimension")))?,
                _ => return Err(Error::Parse(format!("unknown potential parameter '{k}'"))),
            }
        }
        let need = |name: &str, x: Option<f64>| x.ok_or_else(|| Error::Parse(format!("{family} needs '{name}'")));
        let profile = match family.trim() {
            "gaussian" => Profile::Gaussian { amp: need("amp", amp)?, width: need("width", width)? },
            "bump" => Profile::Bump { amp: need("amp", amp)?, radius: need("radius", radius)? },
            "sech2" => Profile::Sech2 { amp: need("amp", amp)?, width: need("width", width)? },
            "zero" => Profile::Zero,
            other => return Err(Error::Parse(format!("unknown potential family '{other}'"))),
        };
        Potential::new(d, profile, coupling)
    }
}
