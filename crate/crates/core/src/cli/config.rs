use crate::error::{Error, Result};
use std::path::PathBuf;

/// Output format of the artifact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Subcommand of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Constants,
    Weyl,
    Duality,
    Check(String),
    BksFuzz,
    Waveguide,
    Sandwich,
}

impl Command {
    pub fn name(&self) -> &str {
        match self {
            Command::Constants => "constants",
            Command::Weyl => "weyl",
            Command::Duality => "duality",
            Command::Check(_) => "check",
            Command::BksFuzz => "bks-fuzz",
            Command::Waveguide => "waveguide",
            Command::Sandwich => "sandwich",
        }
    }
}

/// Every setting of a run. Unset fields fall back to per-command defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub potential: Option<String>,
    pub gamma: Option<f64>,
    pub d: Option<usize>,
    pub tau: Option<f64>,
    pub rho: Option<f64>,
    pub m: Option<f64>,
    /// Boundary coupling of the half-line check.
    pub v: Option<f64>,
    /// Half side of the periodic box.
    pub box_half_length: Option<f64>,
    /// Modes per axis of the periodic box.
    pub box_modes: Option<usize>,
    pub plane_x: Option<f64>,
    pub plane_y: Option<f64>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub alphas: Option<Vec<f64>>,
    pub taus: Option<Vec<f64>>,
    pub v0s: Option<Vec<f64>>,
    /// Waveguide cross-section length.
    pub length: Option<f64>,
    /// Scan kind, `surface` or `relativistic`.
    pub kind: Option<String>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub output: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Keys accepted in config files and as `--key` flags.
pub const KEYS: &[&str] = &[
    "potential", "gamma", "d", "tau", "rho", "m", "v", "L", "M", "X", "Y", "nx", "ny", "alphas", "taus", "v0s", "length", "kind",
    "seed", "trials", "output", "format",
];

fn real(key: &str, value: &str) -> Result<f64> {
    let x: f64 = value.trim().parse().map_err(|_| Error::Parse(format!("{key}: '{value}' is not a number")))?;
    if !x.is_finite() {
        return Err(Error::Config(format!("{key} must be finite, got {value}")));
    }
    Ok(x)
}

fn nonneg(key: &str, value: &str) -> Result<f64> {
    let x = real(key, value)?;
    if x < 0.0 {
        return Err(Error::Config(format!("{key} must be >= 0, got {x}")));
    }
    Ok(x)
}

fn positive(key: &str, value: &str) -> Result<f64> {
    let x = real(key, value)?;
    if x <= 0.0 {
        return Err(Error::Config(format!("{key} must be > 0, got {x}")));
    }
    Ok(x)
}

fn count(key: &str, value: &str) -> Result<usize> {
    value.trim().parse().map_err(|_| Error::Parse(format!("{key}: '{value}' is not a nonnegative integer")))
}

fn list(key: &str, value: &str) -> Result<Vec<f64>> {
    let xs = value.split(',').map(|t| positive(key, t)).collect::<Result<Vec<_>>>()?;
    if xs.is_empty() {
        return Err(Error::Config(format!("{key} must not be empty")));
    }
    Ok(xs)
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            potential: None,
            gamma: None,
            d: None,
            tau: None,
            rho: None,
            m: None,
            v: None,
            box_half_length: None,
            box_modes: None,
            plane_x: None,
            plane_y: None,
            nx: None,
            ny: None,
            alphas: None,
            taus: None,
            v0s: None,
            length: None,
            kind: None,
            seed: None,
            trials: None,
            output: None,
            output_dir: None,
            format: None,
        }
    }

    /// Sets one key from its text form, validating the value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "potential" => self.potential = Some(value.to_string()),
            "gamma" => self.gamma = Some(nonneg(key, value)?),
            "d" => {
                let d = count(key, value)?;
                if d > 10 {
                    return Err(Error::Config(format!("d must be at most 10, got {d}")));
                }
                self.d = Some(d)
            }
            "tau" => self.tau = Some(nonneg(key, value)?),
            "rho" => {
                let r = positive(key, value)?;
                if r >= 1.0 {
                    return Err(Error::Config(format!("rho must lie in (0, 1), got {r}")));
                }
                self.rho = Some(r)
            }
            "m" => self.m = Some(nonneg(key, value)?),
            "v" => self.v = Some(nonneg(key, value)?),
            "L" => self.box_half_length = Some(positive(key, value)?),
            "M" => {
                let m = count(key, value)?;
                if m < 2 || m % 2 != 0 {
                    return Err(Error::Config(format!("M must be even and >= 2, got {m}")));
                }
                self.box_modes = Some(m)
            }
            "X" => self.plane_x = Some(positive(key, value)?),
            "Y" => self.plane_y = Some(positive(key, value)?),
            "nx" => self.nx = Some(count(key, value)?.max(1)),
            "ny" => self.ny = Some(count(key, value)?.max(1)),
            "alphas" => {
                let xs = list(key, value)?;
                if xs.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::Config("alphas must be strictly increasing".into()));
                }
                self.alphas = Some(xs)
            }
            "taus" => self.taus = Some(list(key, value)?),
            "v0s" => self.v0s = Some(list(key, value)?),
            "length" => self.length = Some(positive(key, value)?),
            "kind" => match value {
                "surface" | "relativistic" => self.kind = Some(value.to_string()),
                _ => return Err(Error::Config(format!("kind must be surface or relativistic, got '{value}'"))),
            },
            "seed" => self.seed = Some(value.parse().map_err(|_| Error::Parse(format!("seed: '{value}' is not an integer")))?),
            "trials" => self.trials = Some(count(key, value)?),
            "output" => self.output = Some(PathBuf::from(value)),
            "format" => {
                self.format = Some(match value {
                    "csv" => Format::Csv,
                    "json" => Format::Json,
                    _ => return Err(Error::Config(format!("format must be csv or json, got '{value}'"))),
                })
            }
            _ => return Err(Error::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }
}

/// Parses `key = value` lines; blank lines and lines starting with `#` are skipped.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse(format!("line {}: expected key=value, got '{line}'", i + 1)))?;
        let k = k.trim();
        if !KEYS.contains(&k) {
            return Err(Error::Config(format!("line {}: unknown key '{k}'", i + 1)));
        }
        out.push((k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}
