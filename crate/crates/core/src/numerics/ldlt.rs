use super::matrix::{SymmetricMatrix, DENSE_LIMIT};
use crate::error::{Error, Result};

/// Bunch-Kaufman pivoting threshold `(1 + √17) / 8`.
const BK_ALPHA: f64 = 0.640_388_203_202_208_4;
/// Pivots below `PIVOT_TOL * ‖A‖` are treated as breakdown.
const PIVOT_TOL: f64 = 1e-13;

/// Signature of a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub negative: usize,
    pub positive: usize,
}

/// Inertia of a full row-major symmetric array by Bunch-Kaufman `LDL^T`,
/// working on the lower triangle in place.
pub fn bunch_kaufman_inertia(a: &mut [f64], n: usize) -> Result<Inertia> {
    let scale = (0..n)
        .flat_map(|i| (0..=i).map(move |j| (i, j)))
        .fold(0.0f64, |m, (i, j)| m.max(a[i * n + j].abs()))
        .max(f64::MIN_POSITIVE);
    let tiny = PIVOT_TOL * scale;
    let at = |i: usize, j: usize| i * n + j;
    let mut neg = 0;
    let mut pos = 0;
    let mut k = 0;
    while k < n {
        let absakk = a[at(k, k)].abs();
        let (mut r, mut colmax) = (k, 0.0f64);
        for i in k + 1..n {
            let v = a[at(i, k)].abs();
            if v > colmax {
                colmax = v;
                r = i;
            }
        }
        if absakk.max(colmax) <= tiny {
            return Err(Error::Pivot { index: k, pivot: a[at(k, k)] });
        }
        let two_by_two = if absakk >= BK_ALPHA * colmax {
            false
        } else {
            let mut rowmax = 0.0f64;
            for j in k..r {
                rowmax = rowmax.max(a[at(r, j)].abs());
            }
            for i in r + 1..n {
                rowmax = rowmax.max(a[at(i, r)].abs());
            }
            if absakk * rowmax >= BK_ALPHA * colmax * colmax {
                false
            } else if a[at(r, r)].abs() >= BK_ALPHA * rowmax {
                symmetric_swap(a, n, k, k, r);
                false
            } else {
                if r != k + 1 {
                    symmetric_swap(a, n, k, k + 1, r);
                }
                true
            }
        };

        if !two_by_two {
            let d = a[at(k, k)];
            if d.abs() <= tiny {
                return Err(Error::Pivot { index: k, pivot: d });
            }
            if d < 0.0 {
                neg += 1;
            } else {
                pos += 1;
            }
            for i in k + 1..n {
                let li = a[at(i, k)] / d;
                if li == 0.0 {
                    continue;
                }
                for j in k + 1..=i {
                    a[at(i, j)] -= li * a[at(j, k)];
                }
            }
            k += 1;
        } else {
            let a11 = a[at(k, k)];
            let a21 = a[at(k + 1, k)];
            let a22 = a[at(k + 1, k + 1)];
            let det = a11 * a22 - a21 * a21;
            if det.abs() <= tiny * (a11.abs() + a22.abs() + a21.abs()) {
                return Err(Error::Pivot { index: k, pivot: det });
            }
            if det < 0.0 {
                neg += 1;
                pos += 1;
            } else if a11 + a22 < 0.0 {
                neg += 2;
            } else {
                pos += 2;
            }
            for i in k + 2..n {
                let c1 = a[at(i, k)];
                let c2 = a[at(i, k + 1)];
                let w1 = (a22 * c1 - a21 * c2) / det;
                let w2 = (a11 * c2 - a21 * c1) / det;
                for j in k + 2..=i {
                    a[at(i, j)] -= w1 * a[at(j, k)] + w2 * a[at(j, k + 1)];
                }
            }
            k += 2;
        }
    }
    Ok(Inertia { negative: neg, positive: pos })
}

/// Swaps rows and columns `p < q` of the active block starting at `k`,
/// in lower-triangle storage.
fn symmetric_swap(a: &mut [f64], n: usize, k: usize, p: usize, q: usize) {
    if p == q {
        return;
    }
    let at = |i: usize, j: usize| i * n + j;
    a.swap(at(p, p), at(q, q));
    for j in k..p {
        a.swap(at(p, j), at(q, j));
    }
    for i in p + 1..q {
        a.swap(at(i, p), at(q, i));
    }
    for i in q + 1..n {
        a.swap(at(i, p), at(i, q));
    }
}

/// `LDL^T` factorization without pivoting of a banded symmetric matrix.
#[derive(Debug, Clone)]
pub struct BandedLdlt {
    n: usize,
    bw: usize,
    /// `l[i * bw + (bw - (i - j))]` holds `L_ij` for `i - bw <= j < i`.
    l: Vec<f64>,
    d: Vec<f64>,
}

impl BandedLdlt {
    /// Factors `A - shift I`.
    pub fn factor(a: &SymmetricMatrix, shift: f64) -> Result<Self> {
        let n = a.n();
        let bw = a.bandwidth();
        let width = bw.max(1);
        let mut l = vec![0.0; n * width];
        let mut d = vec![0.0; n];
        for (i, j, v) in a.lower_entries() {
            if i == j {
                d[i] = v - shift;
            } else {
                l[i * width + width - (i - j)] = v;
            }
        }
        let tiny = PIVOT_TOL * (a.max_abs() + shift.abs()).max(f64::MIN_POSITIVE);
        // l holds A below the diagonal until overwritten row by row
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            for j in lo..i {
                let mut s = l[i * width + width - (i - j)];
                let lo2 = lo.max(j.saturating_sub(bw));
                for m in lo2..j {
                    s -= l[i * width + width - (i - m)] * d[m] * l[j * width + width - (j - m)];
                }
                l[i * width + width - (i - j)] = s / d[j];
            }
            let mut s = d[i];
            for m in lo..i {
                let lim = l[i * width + width - (i - m)];
                s -= lim * lim * d[m];
            }
            if s.abs() <= tiny {
                return Err(Error::Pivot { index: i, pivot: s });
            }
            d[i] = s;
        }
        Ok(Self { n, bw: width, l, d })
    }

    pub fn negative_pivots(&self) -> usize {
        self.d.iter().filter(|&&x| x < 0.0).count()
    }

    /// Solves `(A - shift I) x = b` in place.
    pub fn solve(&self, x: &mut [f64]) {
        let w = self.bw;
        for i in 0..self.n {
            let lo = i.saturating_sub(w);
            let mut s = x[i];
            for j in lo..i {
                s -= self.l[i * w + w - (i - j)] * x[j];
            }
            x[i] = s;
        }
        for i in 0..self.n {
            x[i] /= self.d[i];
        }
        for i in (0..self.n).rev() {
            let hi = (i + w + 1).min(self.n);
            let mut s = x[i];
            for j in i + 1..hi {
                s -= self.l[j * w + w - (j - i)] * x[j];
            }
            x[i] = s;
        }
    }
}

/// Number of eigenvalues of `A` strictly below `shift`, from the inertia of
/// `A - shift I`.
///
/// Sparse matrices with bandwidth at most `n/3` use a banded factorization,
/// everything else the dense Bunch-Kaufman path. A pivot error means `shift`
/// is numerically an eigenvalue and should be perturbed.
pub fn inertia_below(a: &SymmetricMatrix, shift: f64) -> Result<usize> {
    let n = a.n();
    if n == 0 {
        return Ok(0);
    }
    if !shift.is_finite() {
        return Err(Error::Domain(format!("shift must be finite, got {shift}")));
    }
    if !a.is_dense() && a.bandwidth() * 3 <= n {
        match BandedLdlt::factor(a, shift) {
            Ok(f) => return Ok(f.negative_pivots()),
            // an unpivoted leading minor can be singular away from eigenvalues
            Err(Error::Pivot { .. }) if n <= DENSE_LIMIT => {}
            Err(e) => return Err(e),
        }
    }
    let mut full = a.to_dense()?.to_full();
    for i in 0..n {
        full[i * n + i] -= shift;
    }
    Ok(bunch_kaufman_inertia(&mut full, n)?.negative)
}

/// Counts at `shift - delta` and `shift + delta`, with
/// `delta = 1e-9 * max(‖A‖_max, 1)`, to bracket eigenvalues near `shift`.
///
/// Returns `(below, at_or_below)`; the two differ exactly when eigenvalues lie
/// within `delta` of `shift`.
pub fn inertia_bracket(a: &SymmetricMatrix, shift: f64) -> Result<(usize, usize)> {
    let delta = 1e-9 * a.max_abs().max(1.0);
    let lo = retry_count(a, shift - delta, -delta)?;
    let hi = retry_count(a, shift + delta, delta)?;
    Ok((lo, hi))
}

fn retry_count(a: &SymmetricMatrix, mut shift: f64, step: f64) -> Result<usize> {
    let mut last = None;
    for _ in 0..4 {
        match inertia_below(a, shift) {
            Ok(c) => return Ok(c),
            Err(e @ Error::Pivot { .. }) => {
                last = Some(e);
                shift += 0.1 * step;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("loop ran"))
}
