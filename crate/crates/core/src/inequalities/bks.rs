use super::{InequalityReport, ReportInputs, Verdict};
use crate::error::{Error, Result};
use crate::numerics::{eigh_dense, SymmetricMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Relative slack of the fuzzer.
pub const BKS_SLACK: f64 = 1e-9;

/// One random instance: symmetric positive semidefinite `a`, `b` (row-major
/// `n x n`), exponents `s ∈ (0, 1)`, `γ >= 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BksTrial {
    pub n: usize,
    pub s: f64,
    pub gamma: f64,
    pub seed: u64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

/// Both sides of the trace inequality and the smallest eigenvalue of
/// `(B + (A-B)_+)^s - A^s`, which must be `>= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BksOutcome {
    pub lhs: f64,
    pub rhs: f64,
    pub operator_margin: f64,
    /// `max(‖A‖, ‖B‖)`, the scale of the slack.
    pub scale: f64,
}

impl BksOutcome {
    pub fn trace_ok(&self, s: f64, gamma: f64) -> bool {
        let tol = BKS_SLACK * (self.rhs.abs() + self.scale.powf(s * gamma));
        self.lhs <= self.rhs + tol
    }

    pub fn operator_ok(&self, s: f64) -> bool {
        self.operator_margin >= -BKS_SLACK * self.scale.powf(s).max(f64::MIN_POSITIVE)
    }
}

/// Searches for violations of the trace inequality
/// `tr(A^s - B^s)_+^γ <= tr(A - B)_+^{sγ}` and of the operator inequality
/// `A^s <= (B + (A - B)_+)^s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FuzzConfig {
    pub trials: usize,
    pub n_range: (usize, usize),
    pub s_range: (f64, f64),
    pub gamma_range: (f64, f64),
    pub seed: u64,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        Self { trials: 1000, n_range: (1, 12), s_range: (0.05, 0.95), gamma_range: (1.0, 4.0), seed: 0 }
    }
}

impl FuzzConfig {
    fn validate(&self) -> Result<()> {
        let (n0, n1) = self.n_range;
        let (s0, s1) = self.s_range;
        let (g0, g1) = self.gamma_range;
        if n0 == 0 || n0 > n1 {
            return Err(Error::Config(format!("matrix sizes need 1 <= min <= max, got {n0}..{n1}")));
        }
        if !(0.0 < s0 && s0 <= s1 && s1 < 1.0) {
            return Err(Error::Config(format!("s range must lie in (0, 1), got ({s0}, {s1})")));
        }
        if !(1.0 <= g0 && g0 <= g1 && g1.is_finite()) {
            return Err(Error::Config(format!("gamma range must lie in [1, inf), got [{g0}, {g1}]")));
        }
        Ok(())
    }
}

fn full(n: usize, a: &[f64]) -> Result<SymmetricMatrix> {
    SymmetricMatrix::from_full(n, a)
}

/// `f(A)` by spectral decomposition, row-major.
fn apply(n: usize, a: &[f64], f: impl Fn(f64) -> f64) -> Result<Vec<f64>> {
    let e = eigh_dense(&full(n, a)?)?;
    let mut out = vec![0.0; n * n];
    for k in 0..n {
        let fk = f(e.values[k]);
        if fk == 0.0 {
            continue;
        }
        let v = e.vector(k);
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] += fk * v[i] * v[j];
            }
        }
    }
    Ok(out)
}

fn eigenvalues(n: usize, a: &[f64]) -> Result<Vec<f64>> {
    Ok(eigh_dense(&full(n, a)?)?.values)
}

fn norm(n: usize, a: &[f64]) -> Result<f64> {
    Ok(eigenvalues(n, a)?.iter().fold(0.0f64, |m, x| m.max(x.abs())))
}

/// `M^s` for semidefinite `M`; eigenvalues below the roundoff level
/// `n eps |M|` count as zero, since `x^s` amplifies them for small `s`.
fn psd_power(n: usize, m: &[f64], s: f64) -> Result<Vec<f64>> {
    let floor = n as f64 * f64::EPSILON * norm(n, m)?;
    apply(n, m, |x| if x > floor { x.powf(s) } else { 0.0 })
}

/// Evaluates both inequalities for one pair.
pub fn bks_evaluate(n: usize, a: &[f64], b: &[f64], s: f64, gamma: f64) -> Result<BksOutcome> {
    if a.len() != n * n || b.len() != n * n {
        return Err(Error::Data(format!("matrices must be {n} x {n}")));
    }
    let scale = norm(n, a)?.max(norm(n, b)?);
    let (as_, bs) = (psd_power(n, a, s)?, psd_power(n, b, s)?);
    let diff_s: Vec<f64> = as_.iter().zip(&bs).map(|(x, y)| x - y).collect();
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let lhs: f64 = eigenvalues(n, &diff_s)?.iter().filter(|&&x| x > 0.0).map(|x| x.powf(gamma)).sum();
    let rhs: f64 = eigenvalues(n, &diff)?.iter().filter(|&&x| x > 0.0).map(|x| x.powf(s * gamma)).sum();
    let pos = apply(n, &diff, |x| x.max(0.0))?;
    let c: Vec<f64> = b.iter().zip(&pos).map(|(x, y)| x + y).collect();
    let cs = psd_power(n, &c, s)?;
    let gap: Vec<f64> = cs.iter().zip(&as_).map(|(x, y)| x - y).collect();
    let operator_margin = eigenvalues(n, &gap)?.first().copied().unwrap_or(0.0);
    Ok(BksOutcome { lhs, rhs, operator_margin, scale })
}

/// `Q diag(λ) Q^T` with `Q` Haar-like orthogonal and `λ >= 0`, about a fifth
/// of the eigenvalues zero; tiny eigenvalues are clamped to zero.
fn random_psd(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Result<Vec<f64>> {
    let g: Vec<f64> = (0..n * n).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
    let sym: Vec<f64> = (0..n * n).map(|k| g[k] + g[(k % n) * n + k / n]).collect();
    let q = eigh_dense(&full(n, &sym)?)?;
    let lambda: Vec<f64> = (0..n).map(|_| if rng.gen::<f64>() < 0.2 { 0.0 } else { scale * rng.gen::<f64>().powi(2) }).collect();
    let top = lambda.iter().cloned().fold(0.0, f64::max);
    let mut out = vec![0.0; n * n];
    for k in 0..n {
        let l = if lambda[k] <= 1e-12 * top { 0.0 } else { lambda[k] };
        let v = q.vector(k);
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] += l * v[i] * v[j];
            }
        }
    }
    // exact symmetry
    for i in 0..n {
        for j in 0..i {
            let m = 0.5 * (out[i * n + j] + out[j * n + i]);
            out[i * n + j] = m;
            out[j * n + i] = m;
        }
    }
    Ok(out)
}

fn make_trial(cfg: &FuzzConfig, index: usize) -> Result<BksTrial> {
    let seed = cfg.seed.wrapping_add(index as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(cfg.n_range.0..=cfg.n_range.1);
    let s = cfg.s_range.0 + (cfg.s_range.1 - cfg.s_range.0) * rng.gen::<f64>();
    let gamma = cfg.gamma_range.0 + (cfg.gamma_range.1 - cfg.gamma_range.0) * rng.gen::<f64>();
    let scale = 10f64.powf(rng.gen_range(-2.0..2.0));
    let a = random_psd(&mut rng, n, scale)?;
    // B sometimes close to A so that A - B has mixed sign and small entries
    let b = if rng.gen::<f64>() < 0.3 {
        let e = random_psd(&mut rng, n, 0.1 * scale)?;
        a.iter().zip(&e).map(|(x, y)| x + y).collect::<Vec<_>>()
    } else {
        random_psd(&mut rng, n, scale)?
    };
    Ok(BksTrial { n, s, gamma, seed, a, b })
}

fn violates(t: &BksTrial) -> bool {
    match bks_evaluate(t.n, &t.a, &t.b, t.s, t.gamma) {
        Ok(o) => !(o.trace_ok(t.s, t.gamma) && o.operator_ok(t.s)),
        Err(_) => false,
    }
}

fn principal(t: &BksTrial, drop: usize) -> BksTrial {
    let keep: Vec<usize> = (0..t.n).filter(|&i| i != drop).collect();
    let m = keep.len();
    let pick = |x: &[f64]| -> Vec<f64> { keep.iter().flat_map(|&i| keep.iter().map(move |&j| x[i * t.n + j])).collect() };
    BksTrial { n: m, a: pick(&t.a), b: pick(&t.b), ..t.clone() }
}

fn rounded(t: &BksTrial, digits: i32) -> BksTrial {
    let f = 10f64.powi(digits);
    let r = |x: &[f64]| x.iter().map(|v| (v * f).round() / f).collect::<Vec<_>>();
    BksTrial { a: r(&t.a), b: r(&t.b), ..t.clone() }
}

/// Shrinks a violating trial by deleting rows and columns (principal
/// submatrices stay semidefinite) and rounding entries while it still fails.
pub fn minimize(mut t: BksTrial) -> BksTrial {
    let mut progress = true;
    while progress && t.n > 1 {
        progress = false;
        for k in 0..t.n {
            let c = principal(&t, k);
            if violates(&c) {
                t = c;
                progress = true;
                break;
            }
        }
    }
    for digits in 1..=8 {
        let c = rounded(&t, digits);
        if violates(&c) {
            return c;
        }
    }
    t
}

/// Runs `cfg.trials` independent trials, trial `i` seeded with `seed + i`.
///
/// Each report carries the trace inequality as `lhs <= rhs` and the
/// operator inequality margin as a certificate; a violation of either makes
/// the verdict `violated`, and the minimized counterexample is attached as
/// JSON.
pub fn bks_fuzz(cfg: &FuzzConfig) -> Result<Vec<InequalityReport>> {
    cfg.validate()?;
    (0..cfg.trials).into_par_iter().map(|i| trial_report(cfg, i)).collect()
}

fn trial_report(cfg: &FuzzConfig, i: usize) -> Result<InequalityReport> {
    let t = make_trial(cfg, i)?;
    let o = bks_evaluate(t.n, &t.a, &t.b, t.s, t.gamma)?;
    let trace_ok = o.trace_ok(t.s, t.gamma);
    let op_ok = o.operator_ok(t.s);
    let mut r = InequalityReport::new(
        "bks",
        "tr(A^s - B^s)_+^gamma <= tr(A - B)_+^{s gamma} and A^s - B^s <= (B + (A - B)_+)^s - B^s",
        o.lhs,
        o.rhs,
        1.0,
        BKS_SLACK * (o.rhs.abs() + o.scale.powf(t.s * t.gamma)),
        true,
        ReportInputs {
            potential: format!("random psd pair, seed {}", t.seed),
            gamma: Some(t.gamma),
            d: 0,
            tau: None,
            grid: format!("n={},s={}", t.n, t.s),
        },
    )
    .with_certificate(format!("operator margin {:.6e} (scale {:.6e})", o.operator_margin, o.scale));
    if !op_ok {
        r.verdict = Verdict::Violated;
        r = r.with_certificate("operator inequality violated");
    }
    if !(trace_ok && op_ok) {
        let m = minimize(t);
        let dump = serde_json::to_string(&m).map_err(|e| Error::Data(e.to_string()))?;
        r = r.with_certificate(format!("counterexample candidate: {dump}"));
    }
    Ok(r)
}
