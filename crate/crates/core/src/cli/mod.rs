//! The `ltlab` command-line front end.
//!
//! Settings come from `--key value` flags and from an optional plain-text
//! `key = value` file given with `--config`; flags override the file. The
//! artifact (CSV or JSON) goes to `--output`, else to
//! `$LTLAB_OUTPUT_DIR/<command>.<ext>`, else to standard output, followed by
//! one summary line per result.
//!
//! Exit status: 0 all checks hold (or are inconclusive with a certificate),
//! 1 usage error or refused input, 2 violation, 3 convergence failure.

mod config;

pub use config::{parse_key_values, Command, Format, RunConfig, KEYS};

use crate::constants::{surface_bound_table, table_rows, ConstantQuery, TABLE_HEADER};
use crate::error::{Error, Result};
use crate::inequalities::{
    bks_fuzz, check_bks_schroedinger_chain, check_duality_sandwich, check_massive, check_relativistic_lt, check_sharp_shifted,
    check_sharp_shifted_halfline, check_surface_lt, check_waveguide, lower_bound_certificate, FuzzConfig, InequalityReport, Verdict,
    REPORT_HEADER,
};
use crate::operators::{duality_grids, duality_table, BoxGrid, HalfSpaceGrid, Potential, DUALITY_HEADER};
use crate::spectral::{
    relativistic_riesz_certified, surface_riesz_certified, weyl_scan, RieszMean, WeylKind, CONVERGENCE_RTOL, SCAN_HEADER,
};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_VAR: &str = "LTLAB_OUTPUT_DIR";

/// Checker names accepted by `check`.
pub const CHECKERS: &[&str] = &[
    "surface-lt",
    "sharp-shifted",
    "sharp-shifted-halfline",
    "relativistic-lt",
    "sandwich",
    "massive",
    "bks-chain",
    "waveguide",
    "sobolev-lower",
];

const DEFAULT_POTENTIAL: &str = "gaussian:amp=1,width=1";

#[derive(Parser, Debug)]
#[command(name = "ltlab", version, about = "Numerical checks of Lieb-Thirring inequalities for surface and relativistic operators")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Semiclassical constants and tabulated bounds at (gamma, d)
    Constants,
    /// Strong-coupling scan of Riesz mean over semiclassical value
    Weyl,
    /// Robin eigenvalue counts against Birman-Schwinger counts over a tau list
    Duality,
    /// Run one inequality checker by name
    Check {
        /// One of surface-lt, sharp-shifted, sharp-shifted-halfline, relativistic-lt, sandwich, massive, bks-chain,
        /// waveguide, sobolev-lower
        name: String,
    },
    /// Randomized search for violations of the matrix trace inequality
    BksFuzz,
    /// Exact waveguide Riesz means against the bound
    Waveguide,
    /// Two-sided comparison of relativistic and surface Riesz means
    Sandwich,
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// Plain-text key = value file; flags override its entries
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Potential, e.g. "gaussian:amp=3,width=1"
    #[arg(long, global = true)]
    potential: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    gamma: Option<String>,
    /// Dimension (of the boundary for surface problems)
    #[arg(long, global = true)]
    d: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    tau: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    rho: Option<String>,
    /// Mass
    #[arg(long, global = true, allow_hyphen_values = true)]
    m: Option<String>,
    /// Boundary coupling of the half-line check
    #[arg(long, global = true, allow_hyphen_values = true)]
    v: Option<String>,
    /// Half side of the periodic box
    #[arg(long = "L", global = true)]
    big_l: Option<String>,
    /// Modes per axis of the periodic box
    #[arg(long = "M", global = true)]
    big_m: Option<String>,
    /// Half width of the half-plane grid
    #[arg(long = "X", global = true)]
    big_x: Option<String>,
    /// Depth of the half-plane grid
    #[arg(long = "Y", global = true)]
    big_y: Option<String>,
    /// Interior points in x (uniform half-plane grid)
    #[arg(long, global = true)]
    nx: Option<String>,
    /// Interior points in y (uniform half-plane grid)
    #[arg(long, global = true)]
    ny: Option<String>,
    /// Comma-separated couplings of a scan
    #[arg(long, global = true)]
    alphas: Option<String>,
    /// Comma-separated spectral shifts
    #[arg(long, global = true)]
    taus: Option<String>,
    /// Comma-separated waveguide depths
    #[arg(long, global = true)]
    v0s: Option<String>,
    /// Waveguide cross-section length
    #[arg(long, global = true)]
    length: Option<String>,
    /// Scan kind: surface or relativistic
    #[arg(long, global = true)]
    kind: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    #[arg(long, global = true)]
    trials: Option<String>,
    /// Artifact path
    #[arg(long, global = true)]
    output: Option<String>,
    /// csv or json
    #[arg(long, global = true)]
    format: Option<String>,
}

impl Flags {
    fn pairs(&self) -> Vec<(&'static str, &String)> {
        let all: [(&'static str, &Option<String>); 22] = [
            ("potential", &self.potential),
            ("gamma", &self.gamma),
            ("d", &self.d),
            ("tau", &self.tau),
            ("rho", &self.rho),
            ("m", &self.m),
            ("v", &self.v),
            ("L", &self.big_l),
            ("M", &self.big_m),
            ("X", &self.big_x),
            ("Y", &self.big_y),
            ("nx", &self.nx),
            ("ny", &self.ny),
            ("alphas", &self.alphas),
            ("taus", &self.taus),
            ("v0s", &self.v0s),
            ("length", &self.length),
            ("kind", &self.kind),
            ("seed", &self.seed),
            ("trials", &self.trials),
            ("output", &self.output),
            ("format", &self.format),
        ];
        all.into_iter().filter_map(|(k, v)| v.as_ref().map(|v| (k, v))).collect()
    }
}

/// Overall status of a run, in increasing severity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok,
    Violation,
    Unconverged,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Violation => 2,
            Status::Unconverged => 3,
        }
    }
}

/// Exit status for an error: 3 for numerical failures, 1 for everything else.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Convergence { .. } | Error::Tail { .. } | Error::Completeness(_) | Error::Pivot { .. } => 3,
        _ => 1,
    }
}

/// Result of a run before emission.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub artifact: String,
    /// File name used under the output directory.
    pub file_name: String,
    pub summary: Vec<String>,
    pub status: Status,
}

/// Builds the configuration from command-line arguments (program name first).
///
/// `Ok(Err(text))` carries help or version output.
pub fn parse_args<I, T>(args: I, output_dir: Option<PathBuf>) -> Result<std::result::Result<RunConfig, String>>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Ok(Err(e.render().to_string())),
                _ => Err(Error::Parse(e.render().to_string())),
            };
        }
    };
    let command = match cli.command {
        Sub::Constants => Command::Constants,
        Sub::Weyl => Command::Weyl,
        Sub::Duality => Command::Duality,
        Sub::Check { name } => Command::Check(name),
        Sub::BksFuzz => Command::BksFuzz,
        Sub::Waveguide => Command::Waveguide,
        Sub::Sandwich => Command::Sandwich,
    };
    let mut cfg = RunConfig::new(command);
    if let Some(path) = &cli.flags.config {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        for (k, v) in parse_key_values(&text)? {
            cfg.set(&k, &v)?;
        }
    }
    for (k, v) in cli.flags.pairs() {
        cfg.set(k, v)?;
    }
    cfg.output_dir = output_dir;
    Ok(Ok(cfg))
}

/// Runs the command-line tool and returns the exit status.
pub fn main_with_args<I, T>(args: I, output_dir: Option<PathBuf>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match parse_args(args, output_dir) {
        Ok(Ok(cfg)) => cfg,
        Ok(Err(text)) => {
            let _ = write!(out, "{text}");
            return 0;
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };
    let outcome = match run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    match emit(&cfg, &outcome, out) {
        Ok(()) => outcome.status.code(),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn emit(cfg: &RunConfig, outcome: &Outcome, out: &mut dyn Write) -> Result<()> {
    let target = cfg.output.clone().or_else(|| cfg.output_dir.as_ref().map(|d| d.join(&outcome.file_name)));
    match &target {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(path, &outcome.artifact)?;
        }
        None => out.write_all(outcome.artifact.as_bytes())?,
    }
    for line in &outcome.summary {
        writeln!(out, "{line}")?;
    }
    if let Some(path) = target {
        writeln!(out, "wrote {}", path.display())?;
    }
    Ok(())
}

fn potential(cfg: &RunConfig, default: &str) -> Result<Potential> {
    let p: Potential = cfg.potential.as_deref().unwrap_or(default).parse()?;
    match cfg.d {
        Some(d) if d != p.d => p.with_dim(d),
        _ => Ok(p),
    }
}

fn box_grid(cfg: &RunConfig, d: usize) -> Result<BoxGrid> {
    let (l, m) = if d == 1 { (12.0, 512) } else { (6.0, 24) };
    BoxGrid::new(d, cfg.box_half_length.unwrap_or(l), cfg.box_modes.unwrap_or(m))
}

/// Half-plane grid: uniform when `nx` and `ny` are given, otherwise adapted to `p`.
fn plane_grid(cfg: &RunConfig, p: &Potential) -> Result<HalfSpaceGrid> {
    let (x, y) = (cfg.plane_x.unwrap_or(8.0), cfg.plane_y.unwrap_or(8.0));
    match (cfg.nx, cfg.ny) {
        (Some(nx), Some(ny)) => HalfSpaceGrid::uniform(x, y, nx, ny),
        _ => HalfSpaceGrid::adapted(p, x, y),
    }
}

/// `x` at 15 significant digits in shortest form, for summary lines.
fn short(x: f64) -> String {
    format!("{x:.14e}").parse::<f64>().map_or_else(|_| x.to_string(), |y| y.to_string())
}

fn extension(cfg: &RunConfig, default: Format) -> (Format, &'static str) {
    match cfg.format.unwrap_or(default) {
        Format::Csv => (Format::Csv, "csv"),
        Format::Json => (Format::Json, "json"),
    }
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Data(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn table<T: Serialize>(format: Format, header: &str, rows: &[T], line: impl Fn(&T) -> String) -> Result<String> {
    match format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut s = String::from(header);
            s.push('\n');
            for r in rows {
                s.push_str(&line(r));
                s.push('\n');
            }
            Ok(s)
        }
    }
}

fn reports(cfg: &RunConfig, stem: &str, rs: Vec<InequalityReport>, summary: Vec<String>) -> Result<Outcome> {
    let (format, ext) = extension(cfg, Format::Json);
    let status = if rs.iter().any(|r| r.verdict == Verdict::Violated) { Status::Violation } else { Status::Ok };
    Ok(Outcome {
        artifact: table(format, REPORT_HEADER, &rs, InequalityReport::to_csv)?,
        file_name: format!("{stem}.{ext}"),
        summary: if summary.is_empty() { rs.iter().map(InequalityReport::summary).collect() } else { summary },
        status,
    })
}

/// Executes a configured run without writing anything.
pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    match &cfg.command {
        Command::Constants => constants(cfg),
        Command::Weyl => weyl(cfg),
        Command::Duality => duality(cfg),
        Command::Check(name) => check(cfg, name),
        Command::BksFuzz => fuzz(cfg),
        Command::Waveguide => waveguide(cfg),
        Command::Sandwich => sandwich(cfg),
    }
}

fn constants(cfg: &RunConfig) -> Result<Outcome> {
    let q = ConstantQuery::new(cfg.gamma.unwrap_or(1.0), cfg.d.unwrap_or(1))?;
    let rows = table_rows(q)?;
    let (format, ext) = extension(cfg, Format::Csv);
    let l_cl = crate::constants::lt_classical(q)?;
    let bound = match surface_bound_table(q) {
        Ok(e) => format!("factor {}, {}", short(e.factor), e.kind),
        Err(Error::NoBound { reason, .. }) => format!("no surface bound ({reason})"),
        Err(e) => return Err(e),
    };
    Ok(Outcome {
        artifact: table(format, TABLE_HEADER, &rows, |r| r.to_csv())?,
        file_name: format!("constants.{ext}"),
        summary: vec![format!("gamma = {}, d = {}: L^cl = {}, {bound}", q.gamma, q.d, short(l_cl))],
        status: Status::Ok,
    })
}

fn weyl(cfg: &RunConfig) -> Result<Outcome> {
    let kind = match cfg.kind.as_deref().unwrap_or("relativistic") {
        "surface" => WeylKind::Surface,
        _ => WeylKind::Relativistic,
    };
    let p = potential(cfg, DEFAULT_POTENTIAL)?;
    let gamma = cfg.gamma.unwrap_or(1.0);
    let default_alphas: &[f64] = match kind {
        WeylKind::Surface => &[2.0, 4.0, 8.0],
        WeylKind::Relativistic => &[2.0, 4.0, 8.0, 16.0, 32.0],
    };
    let alphas = cfg.alphas.clone().unwrap_or_else(|| default_alphas.to_vec());
    if kind == WeylKind::Surface && p.d != 1 {
        return Err(Error::Config("surface scans run with a one-dimensional boundary".into()));
    }
    let norm = p.lp_integral(kind.exponent(gamma, p.d))?;
    // fail on bad (gamma, d) before any assembly
    kind.classical_constant(gamma, p.d)?;
    let g = box_grid(cfg, p.d)?;
    let build = |alpha: f64| -> Result<RieszMean> {
        let pa = p.with_coupling(alpha * p.coupling)?;
        match kind {
            WeylKind::Relativistic => relativistic_riesz_certified(&pa, &g, gamma),
            WeylKind::Surface => surface_riesz_certified(&pa, &plane_grid(cfg, &pa)?, gamma, 0.0),
        }
    };
    let means: Vec<Result<RieszMean>> = alphas.par_iter().map(|&a| build(a)).collect();
    let mut means = means.into_iter();
    let points = weyl_scan(|_| means.next().expect("one mean per coupling"), gamma, p.d, &alphas, norm, kind)?;
    let (format, ext) = extension(cfg, Format::Csv);
    let mut status = Status::Ok;
    if kind == WeylKind::Surface && gamma >= 1.5 && points.iter().any(|w| w.converged && w.ratio > 1.0 + CONVERGENCE_RTOL) {
        status = Status::Violation;
    }
    let summary = points
        .last()
        .map(|w| {
            format!(
                "weyl {kind}: ratio {} at alpha = {} ({})",
                short(w.ratio),
                w.alpha,
                if w.converged { "converged" } else { "unconverged" }
            )
        })
        .into_iter()
        .collect();
    Ok(Outcome { artifact: table(format, SCAN_HEADER, &points, |w| w.to_csv())?, file_name: format!("weyl.{ext}"), summary, status })
}

fn duality(cfg: &RunConfig) -> Result<Outcome> {
    let p = potential(cfg, "gaussian:amp=3,width=1")?;
    let taus = cfg.taus.clone().unwrap_or_else(|| vec![0.01, 0.05, 0.1]);
    let (plane, mut g) = duality_grids(&p)?;
    if cfg.box_half_length.is_some() || cfg.box_modes.is_some() {
        g = box_grid(cfg, 1)?;
    }
    let rows = duality_table(&p, &plane, &g, &taus)?;
    let (format, ext) = extension(cfg, Format::Csv);
    let equal = rows.iter().filter(|r| r.equal()).count();
    let stable = rows.iter().all(|r| r.stable());
    let status = if !stable {
        Status::Unconverged
    } else if equal < rows.len() {
        Status::Violation
    } else {
        Status::Ok
    };
    Ok(Outcome {
        artifact: table(format, DUALITY_HEADER, &rows, |r| r.to_csv())?,
        file_name: format!("duality.{ext}"),
        summary: vec![format!(
            "duality: counts equal at {equal} of {} shifts, {}",
            rows.len(),
            if stable { "stable under refinement" } else { "not stable under refinement" }
        )],
        status,
    })
}

fn check(cfg: &RunConfig, name: &str) -> Result<Outcome> {
    let gamma = cfg.gamma;
    let rs = match name {
        "surface-lt" => {
            let p = potential(cfg, DEFAULT_POTENTIAL)?;
            vec![check_surface_lt(&p, gamma.unwrap_or(1.0), &plane_grid(cfg, &p)?)?]
        }
        "sharp-shifted" => {
            let p = potential(cfg, DEFAULT_POTENTIAL)?;
            vec![check_sharp_shifted(&p, gamma.unwrap_or(1.5), cfg.tau.unwrap_or(0.0), &plane_grid(cfg, &p)?)?]
        }
        "sharp-shifted-halfline" => {
            vec![check_sharp_shifted_halfline(cfg.v.unwrap_or(1.0), gamma.unwrap_or(1.5), cfg.tau.unwrap_or(0.0))?]
        }
        "relativistic-lt" => {
            let p = potential(cfg, DEFAULT_POTENTIAL)?;
            vec![check_relativistic_lt(&p, gamma.unwrap_or(1.0), &box_grid(cfg, p.d)?)?]
        }
        "sandwich" => return sandwich(cfg),
        "massive" => {
            let p = potential(cfg, "gaussian:amp=2,width=1,d=2")?;
            vec![check_massive(&p, cfg.m.unwrap_or(1.0), &box_grid(cfg, p.d)?)?]
        }
        "bks-chain" => {
            let p = potential(cfg, DEFAULT_POTENTIAL)?;
            vec![check_bks_schroedinger_chain(&p, gamma.unwrap_or(1.0), &box_grid(cfg, p.d)?)?]
        }
        "waveguide" => return waveguide(cfg),
        "sobolev-lower" => {
            let d = cfg.d.unwrap_or(2);
            let trial = potential(cfg, &format!("gaussian:amp=1,width=1,d={d}"))?;
            let m = cfg.box_modes.unwrap_or(if d == 2 { 512 } else { 64 });
            let g = BoxGrid::for_transform(d, cfg.box_half_length.unwrap_or(if d == 2 { 40.0 } else { 10.0 }), m)?;
            vec![lower_bound_certificate(d, &g, &trial)?]
        }
        other => return Err(Error::Config(format!("unknown checker '{other}'; known: {}", CHECKERS.join(", ")))),
    };
    reports(cfg, &format!("check-{name}"), rs, vec![])
}

fn fuzz(cfg: &RunConfig) -> Result<Outcome> {
    let fc = FuzzConfig { trials: cfg.trials.unwrap_or(1000), seed: cfg.seed.unwrap_or(0), ..Default::default() };
    let rs = bks_fuzz(&fc)?;
    let bad = rs.iter().filter(|r| r.verdict == Verdict::Violated).count();
    let line = format!("bks-fuzz: {} trials from seed {}, {bad} violations", fc.trials, fc.seed);
    reports(cfg, "bks-fuzz", rs, vec![line])
}

fn waveguide(cfg: &RunConfig) -> Result<Outcome> {
    let length = cfg.length.unwrap_or(std::f64::consts::PI);
    let gamma = cfg.gamma.unwrap_or(1.0);
    let v0s = cfg.v0s.clone().unwrap_or_else(|| vec![2.0, 50.0]);
    let rs = v0s.iter().map(|&v0| check_waveguide(length, v0, gamma)).collect::<Result<Vec<_>>>()?;
    reports(cfg, "waveguide", rs, vec![])
}

fn sandwich(cfg: &RunConfig) -> Result<Outcome> {
    let p = potential(cfg, DEFAULT_POTENTIAL)?;
    let g = box_grid(cfg, p.d)?;
    let rs = check_duality_sandwich(&p, cfg.gamma.unwrap_or(1.0), cfg.rho, &g)?;
    reports(cfg, "sandwich", rs.to_vec(), vec![])
}
