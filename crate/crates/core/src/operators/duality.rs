use super::fourier::{count_birman_schwinger, sample};
use super::{AxisSpec, BoxGrid, HalfSpaceGrid, PlaneCounter, Potential, Sector};
use crate::error::{Error, Result};
use serde::Serialize;

/// `N(-τ, H(v))` from the Robin discretization next to the number of
/// Birman-Schwinger eigenvalues above 1 at `τ`, each at two resolutions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualityRow {
    pub tau: f64,
    pub robin: usize,
    pub birman_schwinger: usize,
    pub robin_refined: usize,
    pub birman_schwinger_refined: usize,
}

pub const DUALITY_HEADER: &str = "tau,robin,birman_schwinger,robin_refined,birman_schwinger_refined,equal,stable";

impl DualityRow {
    /// Both routes agree at the finer resolution.
    pub fn equal(&self) -> bool {
        self.robin_refined == self.birman_schwinger_refined
    }

    /// Neither count moves under refinement.
    pub fn stable(&self) -> bool {
        self.robin == self.robin_refined && self.birman_schwinger == self.birman_schwinger_refined
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{:.16e},{},{},{},{},{},{}",
            self.tau,
            self.robin,
            self.birman_schwinger,
            self.robin_refined,
            self.birman_schwinger_refined,
            self.equal(),
            self.stable()
        )
    }
}

/// Default grids for the count comparison of a one-dimensional potential:
/// a graded half-plane reaching 60 in both directions and the box
/// `[-60, 60)` with 1024 modes.
pub fn duality_grids(p: &Potential) -> Result<(HalfSpaceGrid, BoxGrid)> {
    if p.d != 1 {
        return Err(Error::Config(format!("the count comparison needs a one-dimensional potential, got d = {}", p.d)));
    }
    let core = (1.5 * p.effective_radius(1e-3)).max(4.0);
    let vmax = p.max_value().max(1e-12);
    let plane = HalfSpaceGrid::graded(
        AxisSpec::Graded { extent: 60.0, core, h0: 0.05, ratio: 1.05, hmax: 0.5 },
        AxisSpec::Graded { extent: 60.0, core: 0.5, h0: (0.1 / vmax).min(0.02), ratio: 1.05, hmax: 0.5 },
    )?;
    Ok((plane, BoxGrid::new(1, 60.0, 1024)?))
}

/// Count table over `taus` (all positive) at `plane`/`boxg` and at their
/// refinements.
pub fn duality_table(p: &Potential, plane: &HalfSpaceGrid, boxg: &BoxGrid, taus: &[f64]) -> Result<Vec<DualityRow>> {
    if p.d != 1 || boxg.d != 1 {
        return Err(Error::Config("the count comparison is one-dimensional".into()));
    }
    if taus.is_empty() || taus.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
        return Err(Error::Domain(format!("taus must be positive, got {taus:?}")));
    }
    let fine_box = boxg.refined()?;
    let fine_plane = plane.refined();
    let robin = PlaneCounter::new(p, plane, Sector::Robin)?;
    let robin_fine = PlaneCounter::new(p, &fine_plane, Sector::Robin)?;
    let (s, s_fine) = (sample(p, boxg), sample(p, &fine_box));
    taus.iter()
        .map(|&tau| {
            Ok(DualityRow {
                tau,
                robin: robin.count(tau)?,
                birman_schwinger: count_birman_schwinger(&s, boxg, tau)?,
                robin_refined: robin_fine.count(tau)?,
                birman_schwinger_refined: count_birman_schwinger(&s_fine, &fine_box, tau)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_input() {
        let p = Potential::gaussian(1, 1.0, 1.0).unwrap();
        let (plane, b) = duality_grids(&p).unwrap();
        assert!(duality_table(&p, &plane, &b, &[0.0]).is_err());
        assert!(duality_table(&p, &plane, &b, &[]).is_err());
        assert!(duality_grids(&p.with_dim(2).unwrap()).is_err());
    }

    #[test]
    fn zero_potential_has_no_bound_states() {
        let p = Potential::zero(1).unwrap();
        let plane = HalfSpaceGrid::uniform(10.0, 10.0, 39, 39).unwrap();
        let b = BoxGrid::new(1, 10.0, 64).unwrap();
        let rows = duality_table(&p, &plane, &b, &[0.1, 1.0]).unwrap();
        assert!(rows.iter().all(|r| r.equal() && r.stable() && r.robin == 0));
    }
}
