//! One checker per inequality, each producing an [`InequalityReport`], and
//! a randomized search for violations of the matrix trace inequality
//! `tr(A^s - B^s)_+^γ <= tr(A - B)_+^{sγ}`.

mod bks;
mod checks;
mod sobolev;

pub use bks::{bks_evaluate, bks_fuzz, BksOutcome, BksTrial, FuzzConfig, BKS_SLACK};
pub use checks::{
    check_bks_schroedinger_chain, check_duality_sandwich, check_massive, check_relativistic_lt, check_sharp_shifted,
    check_sharp_shifted_halfline, check_surface_lt, check_waveguide,
};
pub use sobolev::{lower_bound_certificate, sobolev_quotient};

use crate::error::Result;
use serde::Serialize;
use std::fmt;

/// Outcome of a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Violated,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Relative floating-point slack always granted to `lhs <= rhs`.
pub const ROUNDING_SLACK: f64 = 1e-12;

/// Verdict for `lhs <= rhs` given the certified absolute error `err` of the
/// computed side and whether the computation converged.
///
/// Holds when `lhs <= rhs + err`; violated when `lhs > rhs + err` at
/// convergence; an unconverged computation is inconclusive unless even
/// `lhs + err` stays below `rhs`.
pub fn decide(lhs: f64, rhs: f64, err: f64, converged: bool) -> Verdict {
    let slack = ROUNDING_SLACK * lhs.abs().max(rhs.abs()) + f64::MIN_POSITIVE;
    if !lhs.is_finite() || !rhs.is_finite() {
        return Verdict::Inconclusive;
    }
    if converged {
        if lhs <= rhs + err + slack {
            Verdict::Holds
        } else {
            Verdict::Violated
        }
    } else if lhs + err <= rhs + slack {
        Verdict::Holds
    } else {
        Verdict::Inconclusive
    }
}

/// Inputs recorded in a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportInputs {
    pub potential: String,
    pub gamma: Option<f64>,
    pub d: usize,
    pub tau: Option<f64>,
    pub grid: String,
}

pub const REPORT_HEADER: &str = "name,lhs,rhs,factor,ratio,verdict";

/// Result of one inequality check `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub name: String,
    /// The inequality being checked, in words.
    #[serde(rename = "paper_ref")]
    pub reference: String,
    pub lhs: f64,
    pub rhs: f64,
    /// Constant factor applied to the semiclassical constant on the right.
    pub factor: f64,
    pub ratio: f64,
    pub verdict: Verdict,
    pub certificates: Vec<String>,
    pub inputs: ReportInputs,
}

impl InequalityReport {
    /// Builds a report, computing the ratio and the verdict.
    #[allow(clippy::too_many_arguments)]
    pub fn new(name: &str, reference: &str, lhs: f64, rhs: f64, factor: f64, err: f64, converged: bool, inputs: ReportInputs) -> Self {
        let ratio = if rhs != 0.0 {
            lhs / rhs
        } else if lhs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        Self {
            name: name.to_string(),
            reference: reference.to_string(),
            lhs,
            rhs,
            factor,
            ratio,
            verdict: decide(lhs, rhs, err, converged),
            certificates: vec![],
            inputs,
        }
    }

    pub fn with_certificate(mut self, note: impl Into<String>) -> Self {
        self.certificates.push(note.into());
        self
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| crate::error::Error::Data(e.to_string()))
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{}",
            self.name, self.lhs, self.rhs, self.factor, self.ratio, self.verdict
        )
    }

    /// One-line summary for terminals.
    pub fn summary(&self) -> String {
        format!("{}: {:.6e} <= {:.6e} (ratio {:.6}) {}", self.name, self.lhs, self.rhs, self.ratio, self.verdict)
    }
}
