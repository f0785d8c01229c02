use super::{InequalityReport, ReportInputs};
use crate::constants::{
    lt_classical, optimal_rho, rel_classical, relativistic_bound_table, relativistic_improved_factors, surface_bound_table,
    ConstantQuery,
};
use crate::error::{Error, Result};
use crate::numerics::eig_dense;
use crate::operators::fourier::{count_birman_schwinger, count_negatives_samples, multiplier_minus_potential, sample};
use crate::operators::{robin_halfline_ground_state, waveguide_riesz_exact, BoxGrid, HalfSpaceGrid, Potential};
use crate::spectral::{
    relativistic_riesz, riesz_mean, riesz_via_counting, surface_riesz_certified, RieszMean, TruncationCertificate,
    CONVERGENCE_RTOL,
};
use crate::specfun::gauss_legendre;

const NO_GAMMA_ZERO_LINE: &str =
    "gamma = 0 with a one-dimensional boundary: no finite constant exists, since every nontrivial v >= 0 produces a bound state";

fn box_name(g: &BoxGrid) -> String {
    format!("box(d={},L={},M={})", g.d, g.half_length, g.modes_per_axis)
}

fn inputs(p: &Potential, gamma: Option<f64>, tau: Option<f64>, grid: String) -> ReportInputs {
    ReportInputs { potential: p.to_string(), gamma, d: p.d, tau, grid }
}

fn require_line(p: &Potential) -> Result<()> {
    if p.d != 1 {
        return Err(Error::Config(format!("this check needs a one-dimensional potential, got d = {}", p.d)));
    }
    Ok(())
}

/// The box used for the convergence comparison: the refinement of `g`, or,
/// when that exceeds capacity, `g` itself paired with a coarsening.
fn resolution_pair(g: &BoxGrid) -> Result<(BoxGrid, BoxGrid)> {
    match g.refined() {
        Ok(fine) => Ok((*g, fine)),
        Err(Error::Capacity { .. }) => {
            let m = (g.modes_per_axis / 2).max(2);
            let m = m + m % 2;
            Ok((BoxGrid::new(g.d, g.half_length / 1.5, m)?, *g))
        }
        Err(e) => Err(e),
    }
}

/// Relativistic Riesz mean at the finer box of a resolution pair, certified
/// by the coarser.
fn relativistic_certified(p: &Potential, g: &BoxGrid, gamma: f64) -> Result<RieszMean> {
    let (coarse_g, fine_g) = resolution_pair(g)?;
    let coarse = relativistic_riesz(p, &coarse_g, 0.0, gamma)?;
    let fine = relativistic_riesz(p, &fine_g, 0.0, gamma)?;
    Ok(fine.clone().with_certificate(TruncationCertificate::from_pair(coarse.value, fine.value, CONVERGENCE_RTOL)))
}

/// `tr[H(v)]_-^γ <= S_{γ,1} ∫ v^{2γ+1}` for the Robin half-plane.
pub fn check_surface_lt(p: &Potential, gamma: f64, g: &HalfSpaceGrid) -> Result<InequalityReport> {
    require_line(p)?;
    if gamma == 0.0 {
        return Err(Error::Refused(NO_GAMMA_ZERO_LINE.into()));
    }
    let q = ConstantQuery::new(gamma, 1)?;
    let entry = surface_bound_table(q)?;
    let rhs = entry.factor * lt_classical(q)? * p.lp_integral(2.0 * gamma + 1.0)?;
    let lhs = if p.is_zero() { RieszMean { gamma, value: 0.0, eigencount: 0, certificate: TruncationCertificate::exact() } } else { surface_riesz_certified(p, g, gamma, 0.0)? };
    let c = &lhs.certificate;
    Ok(InequalityReport::new(
        "surface-lt",
        "tr[H(v)]_-^gamma <= S_{gamma,d} int v^{2 gamma + d} for the Robin half-space operator",
        lhs.value,
        rhs,
        entry.factor,
        c.error(),
        c.converged,
        inputs(p, Some(gamma), None, g.describe()),
    )
    .with_certificate(format!("constant: {} x L^cl ({}, {})", entry.factor, entry.kind, entry.source))
    .with_certificate(format!("{} negative eigenvalues; {}", lhs.eigencount, c.note()))
    .with_certificate("Dirichlet truncation: the computed trace is a lower bound for the half-space value"))
}

/// `tr[H(v) + τ]_-^γ <= L^cl_{γ,1} ∫ (v² - τ)_+^{γ+1/2}` for `γ >= 3/2`.
pub fn check_sharp_shifted(p: &Potential, gamma: f64, tau: f64, g: &HalfSpaceGrid) -> Result<InequalityReport> {
    require_line(p)?;
    if !(gamma >= 1.5) {
        return Err(Error::Domain(format!("the shifted sharp inequality needs gamma >= 3/2, got {gamma}")));
    }
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::Domain(format!("tau must be >= 0, got {tau}")));
    }
    let l = lt_classical(ConstantQuery::new(gamma, 1)?)?;
    let rhs = l * p.shifted_integral(tau, gamma + 0.5)?;
    let trivial = p.is_zero() || p.max_value().powi(2) <= tau;
    let lhs = if trivial {
        RieszMean { gamma, value: 0.0, eigencount: 0, certificate: TruncationCertificate::exact() }
    } else {
        surface_riesz_certified(p, g, gamma, tau)?
    };
    let c = &lhs.certificate;
    let mut r = InequalityReport::new(
        "sharp-shifted",
        "tr[H(v) + tau]_-^gamma <= L^cl_{gamma,d} int (v^2 - tau)_+^{gamma + d/2}, gamma >= 3/2",
        lhs.value,
        rhs,
        1.0,
        c.error(),
        c.converged,
        inputs(p, Some(gamma), Some(tau), g.describe()),
    )
    .with_certificate(c.note());
    if trivial {
        r = r.with_certificate("tau >= (max v)^2: the shifted operator has no negative spectrum");
    }
    Ok(r)
}

/// Half-line analogue: `tr[H_0(v) + τ]_-^γ = (v² - τ)_+^γ` with `H_0(v)`
/// the Robin half-line operator; `lhs` from the extrapolated finite
/// difference ground state at depth 20 with 400 points.
pub fn check_sharp_shifted_halfline(v: f64, gamma: f64, tau: f64) -> Result<InequalityReport> {
    if !(gamma >= 0.0) || !(tau >= 0.0) || !(v > 0.0) {
        return Err(Error::Domain(format!("half-line check needs v > 0, gamma >= 0, tau >= 0; got {v}, {gamma}, {tau}")));
    }
    let (depth, n) = (20.0f64.max(20.0 / v), 400);
    let e = robin_halfline_ground_state(v, depth, n)?;
    let mean = |lambda: f64| {
        let x = (-lambda - tau).max(0.0);
        if gamma == 0.0 {
            if x > 0.0 {
                1.0
            } else {
                0.0
            }
        } else {
            x.powf(gamma)
        }
    };
    let lhs = mean(e.value);
    let err = (lhs - mean(e.fine)).abs();
    let rhs = mean(-v * v);
    Ok(InequalityReport::new(
        "sharp-shifted-halfline",
        "tr[H_0(v) + tau]_-^gamma = (v^2 - tau)_+^gamma on the half-line",
        lhs,
        rhs,
        1.0,
        err,
        true,
        ReportInputs { potential: format!("constant:v={v}"), gamma: Some(gamma), d: 0, tau: Some(tau), grid: format!("halfline(Y={depth},n={n})") },
    )
    .with_certificate(format!("ground state {:.12} (extrapolated from {:.12}, {:.12})", e.value, e.coarse, e.fine)))
}

/// `tr[√(-Δ) - v]_-^γ <= D_{γ,d} ∫ v^{γ+d}` with the best tabulated factor.
pub fn check_relativistic_lt(p: &Potential, gamma: f64, g: &BoxGrid) -> Result<InequalityReport> {
    if p.d == 1 && gamma == 0.0 {
        return Err(Error::Refused(NO_GAMMA_ZERO_LINE.into()));
    }
    let q = ConstantQuery::new(gamma, p.d)?;
    let entry = relativistic_bound_table(q)?;
    let rhs = entry.factor * rel_classical(q)? * p.lp_integral(gamma + p.d as f64)?;
    let lhs = if p.is_zero() { RieszMean { gamma, value: 0.0, eigencount: 0, certificate: TruncationCertificate::exact() } } else { relativistic_certified(p, g, gamma)? };
    let c = &lhs.certificate;
    let mut r = InequalityReport::new(
        "relativistic-lt",
        "tr[sqrt(-Delta) - v]_-^gamma <= D_{gamma,d} int v^{gamma + d}",
        lhs.value,
        rhs,
        entry.factor,
        c.error(),
        c.converged,
        inputs(p, Some(gamma), None, box_name(g)),
    )
    .with_certificate(format!("constant: {} x D^cl ({})", entry.factor, entry.source))
    .with_certificate(format!("{} negative eigenvalues; {}", lhs.eigencount, c.note()));
    for imp in relativistic_improved_factors(q) {
        r = r.with_certificate(format!("improved factor {} applies ({})", imp.factor, imp.window));
    }
    Ok(r)
}

/// The two comparisons
/// `tr[√(-Δ) - v]_-^γ <= tr[H(v)]_-^{γ/2} <= (ρ/√(1-ρ²))^γ tr[√(-Δ) - v/ρ]_-^γ`,
/// the middle term from the Birman-Schwinger counting function on the box.
///
/// `rho = None` uses the optimal `ρ = √(d/(γ+d))`.
pub fn check_duality_sandwich(p: &Potential, gamma: f64, rho: Option<f64>, g: &BoxGrid) -> Result<[InequalityReport; 2]> {
    require_line(p)?;
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!("the sandwich needs gamma > 0, got {gamma}")));
    }
    let rho = match rho {
        Some(r) => r,
        None => optimal_rho(gamma, 1)?.0,
    };
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::Domain(format!("rho must lie in (0, 1), got {rho}")));
    }
    let grid = box_name(g);
    let inp = || inputs(p, Some(gamma), None, grid.clone());
    let factor = (rho / (1.0 - rho * rho).sqrt()).powf(gamma);
    if p.is_zero() {
        let zero = |name: &str, reference: &str| InequalityReport::new(name, reference, 0.0, 0.0, 1.0, 0.0, true, inp());
        return Ok([zero("sandwich-left", LEFT), zero("sandwich-right", RIGHT).with_certificate(format!("factor {factor}"))]);
    }
    let left = relativistic_certified(p, g, gamma)?;
    let middle = surface_via_birman_schwinger(p, g, gamma / 2.0)?;
    let scaled = p.with_coupling(p.coupling / rho)?;
    let right_mean = relativistic_certified(&scaled, g, gamma)?;
    let (lc, mc, rc) = (&left.certificate, &middle.certificate, &right_mean.certificate);
    let first = InequalityReport::new(
        "sandwich-left",
        LEFT,
        left.value,
        middle.value,
        1.0,
        lc.error() + mc.error(),
        lc.converged && mc.converged,
        inp(),
    )
    .with_certificate(format!("relativistic mean: {}", lc.note()))
    .with_certificate(format!("surface mean via Birman-Schwinger counts: {}", mc.note()));
    let right_value = factor * right_mean.value;
    let mut second = if factor.is_finite() {
        InequalityReport::new(
            "sandwich-right",
            RIGHT,
            middle.value,
            right_value,
            factor,
            mc.error() + factor * rc.error(),
            mc.converged && rc.converged,
            inp(),
        )
    } else {
        InequalityReport::new("sandwich-right", RIGHT, middle.value, f64::INFINITY, factor, 0.0, true, inp())
            .with_certificate("rho -> 1: the right factor is infinite and the inequality holds trivially")
    };
    second = second
        .with_certificate(format!("rho = {rho}, factor (rho/sqrt(1-rho^2))^gamma = {factor}"))
        .with_certificate(format!("relativistic mean at coupling 1/rho: {}", rc.note()));
    Ok([first, second])
}

const LEFT: &str = "tr[sqrt(-Delta) - v]_-^gamma <= tr[H(v)]_-^{gamma/2}";
const RIGHT: &str = "tr[H(v)]_-^{gamma/2} <= (rho/sqrt(1-rho^2))^gamma tr[sqrt(-Delta) - v/rho]_-^gamma";

/// `tr[H(v)]_-^κ = κ ∫ N(-τ) τ^{κ-1} dτ` with `N(-τ)` the number of
/// Birman-Schwinger eigenvalues above 1 on the box.
fn surface_via_birman_schwinger_at(p: &Potential, g: &BoxGrid, kappa: f64) -> Result<RieszMean> {
    let samples = sample(p, g);
    let vmax = samples.iter().cloned().fold(0.0, f64::max);
    let tau_max = 1.1 * vmax * vmax + 1e-3;
    let rule = gauss_legendre(8)?;
    riesz_via_counting(|t| count_birman_schwinger(&samples, g, t), kappa, &rule, tau_max)
}

/// Same, at the box and its refinement.
pub fn surface_via_birman_schwinger(p: &Potential, g: &BoxGrid, kappa: f64) -> Result<RieszMean> {
    let (coarse_g, fine_g) = resolution_pair(g)?;
    let coarse = surface_via_birman_schwinger_at(p, &coarse_g, kappa)?;
    let fine = surface_via_birman_schwinger_at(p, &fine_g, kappa)?;
    Ok(fine.clone().with_certificate(TruncationCertificate::from_pair(coarse.value, fine.value, CONVERGENCE_RTOL)))
}

/// `N(√(-Δ+m²) - m - v) <= 6.04 D^cl_{0,2} ∫ ((v+m)² - m²)` in two dimensions.
///
/// The count is also obtained as the number of Birman-Schwinger eigenvalues
/// above 1 at `τ = m²` for the potential `v + m`; disagreement makes the
/// report inconclusive.
pub fn check_massive(p: &Potential, m: f64, g: &BoxGrid) -> Result<InequalityReport> {
    if p.d != 2 || g.d != 2 {
        return Err(Error::Config("the massive check is run in two dimensions".into()));
    }
    if !(m >= 0.0) || !m.is_finite() {
        return Err(Error::Domain(format!("mass must be >= 0, got {m}")));
    }
    let q = ConstantQuery::new(0.0, 2)?;
    let entry = relativistic_bound_table(q)?;
    let integral = p.lp_integral(2.0)? + 2.0 * m * p.lp_integral(1.0)?;
    let rhs = entry.factor * rel_classical(q)? * integral;
    let (coarse_g, fine_g) = resolution_pair(g)?;
    let count = |grid: &BoxGrid| -> Result<usize> { count_negatives_samples(&sample(p, grid), grid, m * m, m) };
    let (coarse, fine) = (count(&coarse_g)?, count(&fine_g)?);
    let mut notes = vec![format!("constant: {} x D^cl_(0,2) ({})", entry.factor, entry.source)];
    let mut converged = coarse == fine;
    notes.push(format!("count {fine} at the fine box, {coarse} at the coarse box"));
    if m > 0.0 {
        let shifted: Vec<f64> = sample(p, &fine_g).iter().map(|v| v + m).collect();
        let via = count_birman_schwinger(&shifted, &fine_g, m * m)?;
        notes.push(format!("Birman-Schwinger count for v + m at tau = m^2: {via}"));
        if via != fine {
            converged = false;
            notes.push("routes disagree".into());
        }
        let resolution = std::f64::consts::PI / fine_g.half_length;
        if m < resolution {
            converged = false;
            notes.push(format!("mass {m} below the box frequency spacing {resolution:.3e}"));
        }
    }
    let mut r = InequalityReport::new(
        "massive",
        "N(sqrt(-Delta+m^2) - m - v) <= C D^cl_{0,d} int ((v+m)^2 - m^2)_+^{d/2}, checked in d = 2",
        fine as f64,
        rhs,
        entry.factor,
        (fine as f64 - coarse as f64).abs(),
        converged,
        inputs(p, Some(0.0), Some(m * m), box_name(g)),
    );
    for n in notes {
        r = r.with_certificate(n);
    }
    Ok(r.with_certificate("consistency exercise: the stated inequality is for d >= 3"))
}

/// `tr(√(-Δ) - v)_-^γ <= tr(-Δ - v²)_-^{γ/2}` on a shared box.
///
/// On the box both operators are functions of the same two matrices
/// (`|D|² = C[|ξ|²]`, `V² = diag(v²)`), so the comparison is the trace
/// inequality with `s = 1/2` applied to them and holds at every resolution.
pub fn check_bks_schroedinger_chain(p: &Potential, gamma: f64, g: &BoxGrid) -> Result<InequalityReport> {
    require_line(p)?;
    if !(gamma >= 1.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!("the chain needs gamma >= 1, got {gamma}")));
    }
    if p.is_zero() {
        return Ok(InequalityReport::new("bks-schroedinger", CHAIN, 0.0, 0.0, 1.0, 0.0, true, inputs(p, Some(gamma), None, box_name(g))));
    }
    let means = |grid: &BoxGrid| -> Result<(RieszMean, RieszMean)> {
        let v = sample(p, grid);
        let v2: Vec<f64> = v.iter().map(|x| x * x).collect();
        let rel = riesz_mean(&eig_dense(&multiplier_minus_potential(grid, f64::sqrt, &v)?)?, gamma)?;
        let sch = riesz_mean(&eig_dense(&multiplier_minus_potential(grid, |s| s, &v2)?)?, gamma / 2.0)?;
        Ok((rel, sch))
    };
    let (coarse_g, fine_g) = resolution_pair(g)?;
    let (rc, sc) = means(&coarse_g)?;
    let (rf, sf) = means(&fine_g)?;
    let rel_cert = TruncationCertificate::from_pair(rc.value, rf.value, CONVERGENCE_RTOL);
    let sch_cert = TruncationCertificate::from_pair(sc.value, sf.value, CONVERGENCE_RTOL);
    let weyl = lt_classical(ConstantQuery::new(gamma / 2.0, 1)?)? * p.lp_integral(gamma + 1.0)?;
    Ok(InequalityReport::new(
        "bks-schroedinger",
        CHAIN,
        rf.value,
        sf.value,
        1.0,
        1e-10 * sf.value.max(1.0),
        rel_cert.converged && sch_cert.converged,
        inputs(p, Some(gamma), None, box_name(g)),
    )
    .with_certificate(format!("relativistic side: {}", rel_cert.note()))
    .with_certificate(format!("Schroedinger side: {}", sch_cert.note()))
    .with_certificate("matched discretization: the matrix trace inequality holds exactly at every resolution")
    .with_certificate(format!("semiclassical term L^cl_(gamma/2,1) int v^(gamma+1) = {weyl:.12e}")))
}

const CHAIN: &str = "tr(sqrt(-Delta) - v)_-^gamma <= tr(-Delta - v^2)_-^{gamma/2}";

/// `tr[-Δ_ω - v0²]_-^γ <= L^cl_{γ,1} |ω| v0^{2γ+1}` for an interval `ω`.
pub fn check_waveguide(length: f64, v0: f64, gamma: f64) -> Result<InequalityReport> {
    let k_max = (v0 * length / std::f64::consts::PI).ceil() as usize + 1;
    let lhs = waveguide_riesz_exact(length, v0, gamma, k_max)?;
    let rhs = lt_classical(ConstantQuery::new(gamma, 1)?)? * length * v0.powf(2.0 * gamma + 1.0);
    Ok(InequalityReport::new(
        "waveguide",
        "tr[H_omega(v)]_-^gamma <= L^cl_{gamma,d} |omega| v_0^{2 gamma + d} for a constant potential on an interval",
        lhs,
        rhs,
        1.0,
        0.0,
        true,
        ReportInputs {
            potential: format!("constant:v0={v0}"),
            gamma: Some(gamma),
            d: 1,
            tau: None,
            grid: format!("interval(L={length},k_max={k_max})"),
        },
    )
    .with_certificate("exact mode sum"))
}
