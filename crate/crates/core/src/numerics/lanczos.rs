use super::eigen::tridiagonal_eigh;
use super::ldlt::{inertia_below, BandedLdlt};
use super::matrix::{CsrMatrix, Spectrum, SymmetricMatrix};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MAX_WANTED: usize = 40;
pub const DEFAULT_TOL: f64 = 1e-8;

/// Tuning for [`eig_lanczos_lowest_with`].
#[derive(Debug, Clone)]
pub struct LanczosOptions {
    /// Residual bound `‖Ax - λx‖` required of each reported Ritz pair.
    pub tol: f64,
    /// Krylov dimension cap (clamped to `n`).
    pub max_steps: usize,
    pub seed: u64,
    /// Run on `(A - σ)^{-1}` with `σ` strictly below the spectrum.
    pub shift_invert: Option<f64>,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, max_steps: 1200, seed: 0x5eed, shift_invert: None }
    }
}

/// The `k` smallest eigenvalues by Lanczos with full reorthogonalization.
pub fn eig_lanczos_lowest(a: &SymmetricMatrix, k: usize, tol: f64) -> Result<Spectrum> {
    eig_lanczos_lowest_with(a, k, &LanczosOptions { tol, ..Default::default() })
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

pub fn eig_lanczos_lowest_with(a: &SymmetricMatrix, k: usize, opts: &LanczosOptions) -> Result<Spectrum> {
    let n = a.n();
    if k == 0 || k > MAX_WANTED || k > n {
        return Err(Error::Config(format!("Lanczos wants 1 <= k <= min({MAX_WANTED}, n = {n}), got {k}")));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::Config(format!("Lanczos tolerance must be positive, got {}", opts.tol)));
    }
    let csr = CsrMatrix::from_symmetric(a);
    let factor = match opts.shift_invert {
        Some(sigma) => {
            let f = BandedLdlt::factor(a, sigma)?;
            if f.negative_pivots() != 0 {
                return Err(Error::Domain(format!("shift-invert shift {sigma} is not below the spectrum")));
            }
            Some((sigma, f))
        }
        None => None,
    };
    let apply = |x: &[f64], y: &mut [f64]| match &factor {
        Some((_, f)) => {
            y.copy_from_slice(x);
            f.solve(y);
        }
        None => csr.matvec(x, y),
    };
    // operator eigenvalue θ -> eigenvalue of A
    let to_lambda = |theta: f64| match &factor {
        Some((sigma, _)) => sigma + 1.0 / theta,
        None => theta,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let max_steps = opts.max_steps.min(n).max(k);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(max_steps);
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut q: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let nq = norm(&q);
    q.iter_mut().for_each(|x| *x /= nq);
    let mut w = vec![0.0; n];
    let mut ax = vec![0.0; n];
    let mut best_residuals = Vec::new();

    for step in 0..max_steps {
        basis.push(q.clone());
        apply(&q, &mut w);
        let a_j = dot(&w, &q);
        alpha.push(a_j);
        // two passes of classical Gram-Schmidt against the whole basis
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&w, b);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let mut b_j = norm(&w);
        let scale = alpha.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);
        let breakdown = b_j <= 1e-12 * scale;

        let m = step + 1;
        let check = m >= k && (m % 5 == 0 || m == max_steps || breakdown);
        if check {
            let eh = tridiagonal_eigh(&alpha, &beta)?;
            // wanted: smallest λ, i.e. smallest θ, or largest θ under shift-invert
            let order: Vec<usize> = match factor {
                Some(_) => (0..m).rev().collect(),
                None => (0..m).collect(),
            };
            let chosen: Vec<usize> = order.into_iter().filter(|&i| factor.is_none() || eh.values[i] > 0.0).take(k).collect();
            if chosen.len() == k {
                let mut lambdas = Vec::with_capacity(k);
                let mut residuals = Vec::with_capacity(k);
                for &i in &chosen {
                    let s = eh.vector(i);
                    let lambda = to_lambda(eh.values[i]);
                    let mut x = vec![0.0; n];
                    for (coef, b) in s.iter().zip(&basis) {
                        x.iter_mut().zip(b).for_each(|(xi, bi)| *xi += coef * bi);
                    }
                    let nx = norm(&x);
                    x.iter_mut().for_each(|v| *v /= nx);
                    csr.matvec(&x, &mut ax);
                    let r = ax.iter().zip(&x).map(|(u, v)| (u - lambda * v).powi(2)).sum::<f64>().sqrt();
                    lambdas.push(lambda);
                    residuals.push(r);
                }
                if residuals.iter().all(|&r| r <= opts.tol) {
                    let top = lambdas.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                    let cut = top + opts.tol;
                    let listed = lambdas.iter().filter(|&&l| l < cut).count();
                    let certified = match inertia_below(a, cut) {
                        Ok(c) if c == listed => Some(cut),
                        _ => None,
                    };
                    return Ok(Spectrum::partial(lambdas, certified));
                }
                best_residuals = residuals;
            }
        }
        if m == max_steps {
            break;
        }
        if breakdown {
            // invariant subspace found: restart with a fresh orthogonal direction
            let mut fresh: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(&fresh, b);
                    fresh.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
                }
            }
            let nf = norm(&fresh);
            if nf <= 1e-12 {
                break;
            }
            w = fresh.into_iter().map(|x| x / nf).collect();
            b_j = 0.0;
            beta.push(b_j);
            q.copy_from_slice(&w);
        } else {
            beta.push(b_j);
            q.iter_mut().zip(&w).for_each(|(qi, wi)| *qi = wi / b_j);
        }
    }
    Err(Error::Convergence {
        message: format!("Lanczos did not converge {k} eigenvalues in {max_steps} steps"),
        residuals: best_residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::eig_dense;

    fn dirichlet_laplacian(n: usize, h: f64) -> SymmetricMatrix {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0 / (h * h)));
            if i > 0 {
                t.push((i, i - 1, -1.0 / (h * h)));
            }
        }
        SymmetricMatrix::sparse(n, t).unwrap()
    }

    #[test]
    fn laplacian_lowest_three() {
        let n = 200;
        let h = std::f64::consts::PI / 201.0;
        let a = dirichlet_laplacian(n, h);
        let s = eig_lanczos_lowest(&a, 3, 1e-8).unwrap();
        assert!(!s.complete);
        for j in 1..=3 {
            let exact = 4.0 / (h * h) * (j as f64 * std::f64::consts::PI / (2.0 * (n as f64 + 1.0))).sin().powi(2);
            assert!((s.eigenvalues[j - 1] - exact).abs() < 1e-8, "j = {j}");
        }
        assert!(s.certified_below.is_some());
    }

    #[test]
    fn diagonal_smallest_entries() {
        let d: Vec<f64> = (0..50).map(|i| 5.0 - 0.1 * i as f64).collect();
        let a = SymmetricMatrix::diagonal(&d).unwrap();
        let s = eig_lanczos_lowest(&a, 4, 1e-10).unwrap();
        let mut want = d.clone();
        want.sort_by(f64::total_cmp);
        for (x, y) in s.eigenvalues.iter().zip(&want[..4]) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn shift_invert_matches_dense() {
        let n = 400;
        let a = dirichlet_laplacian(n, 0.05);
        let dense = eig_dense(&a.to_dense().unwrap()).unwrap();
        let opts = LanczosOptions { shift_invert: Some(-1.0), ..Default::default() };
        let s = eig_lanczos_lowest_with(&a, 6, &opts).unwrap();
        for (x, y) in s.eigenvalues.iter().zip(&dense.eigenvalues) {
            assert!((x - y).abs() < 1e-8);
        }
    }

    #[test]
    fn bad_requests() {
        let a = SymmetricMatrix::diagonal(&[1.0, 2.0]).unwrap();
        assert!(eig_lanczos_lowest(&a, 0, 1e-8).is_err());
        assert!(eig_lanczos_lowest(&a, 3, 1e-8).is_err());
        let b = dirichlet_laplacian(100, 0.1);
        let opts = LanczosOptions { shift_invert: Some(1.0), ..Default::default() };
        assert!(eig_lanczos_lowest_with(&b, 2, &opts).is_err());
    }
}
