use crate::error::{Error, Result};

/// Eigenvalues in `[lower, upper)` located by bisection on a counting
/// function `count(λ) = #{eigenvalues < λ}`, to absolute accuracy `tol`.
///
/// Returned in ascending order with multiplicity; a cluster narrower than
/// `tol` is reported at its bracket midpoint.
pub fn eigenvalues_by_slicing<F>(mut count: F, lower: f64, upper: f64, tol: f64) -> Result<Vec<f64>>
where
    F: FnMut(f64) -> Result<usize>,
{
    if !(lower < upper) || !(tol > 0.0) {
        return Err(Error::Config(format!("slicing needs lower < upper and tol > 0, got [{lower}, {upper}), {tol}")));
    }
    let n_lo = count(lower)?;
    if n_lo != 0 {
        return Err(Error::Domain(format!("{n_lo} eigenvalues lie below the slicing bound {lower}")));
    }
    let n_hi = count(upper)?;
    let mut out = Vec::with_capacity(n_hi);
    let mut stack = vec![(lower, upper, n_lo, n_hi)];
    while let Some((a, b, na, nb)) = stack.pop() {
        if nb <= na {
            continue;
        }
        if b - a <= tol {
            out.extend(std::iter::repeat_n(0.5 * (a + b), nb - na));
            continue;
        }
        let m = 0.5 * (a + b);
        let nm = count(m)?;
        // upper half first so the lower half pops next
        stack.push((m, b, nm, nb));
        stack.push((a, m, na, nm));
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// The `k` lowest eigenvalues in `[lower, upper)` (fewer if the interval
/// holds fewer).
pub fn lowest_by_slicing<F>(mut count: F, lower: f64, upper: f64, k: usize, tol: f64) -> Result<Vec<f64>>
where
    F: FnMut(f64) -> Result<usize>,
{
    if !(lower < upper) || !(tol > 0.0) {
        return Err(Error::Config(format!("slicing needs lower < upper and tol > 0, got [{lower}, {upper}), {tol}")));
    }
    if count(lower)? != 0 {
        return Err(Error::Domain(format!("eigenvalues lie below the slicing bound {lower}")));
    }
    let total = count(upper)?;
    let mut out = Vec::new();
    for j in 0..k.min(total) {
        // smallest λ with count(λ) > j
        let (mut a, mut b) = (out.last().copied().unwrap_or(lower), upper);
        if j > 0 && count(a + tol)? > j {
            out.push(a);
            continue;
        }
        while b - a > tol {
            let m = 0.5 * (a + b);
            if count(m)? > j {
                b = m;
            } else {
                a = m;
            }
        }
        out.push(0.5 * (a + b));
    }
    Ok(out)
}
