use ltlab::constants::{
    aizenman_lieb_identity, daubechies_lower_factor, lt_classical, optimal_rho, rel_classical, sandwich_coefficient,
    sobolev_trace_constant, sobolev_trace_constant_log, surface_bound_table, BoundKind, ConstantQuery,
};
use ltlab::numerics::{eig_dense, eig_lanczos_lowest, inertia_below, Spectrum, SymmetricMatrix};
use ltlab::operators::{
    birman_schwinger_matrix, count_negatives_relativistic, relativistic_matrix, robin_halfspace_matrix, waveguide_riesz_exact,
    BoxGrid, HalfSpaceGrid, Potential,
};
use ltlab::specfun::{bessel_k, gamma_fn, gauss_legendre};
use ltlab::spectral::{riesz_mean, riesz_mean_shifted, riesz_via_counting};
use ltlab::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

fn q(gamma: f64, d: usize) -> ConstantQuery {
    ConstantQuery::new(gamma, d).unwrap()
}

/// `K_ν(x) = ∫_0^∞ e^{-x cosh t} cosh(νt) dt` by the trapezoid rule, which
/// converges geometrically for this analytic, rapidly decaying integrand.
fn bessel_k_integral(nu: f64, x: f64) -> f64 {
    let h = 1e-3;
    let mut sum = 0.5 * (-x).exp();
    let mut t: f64 = h;
    loop {
        let f = (-x * t.cosh()).exp() * (nu * t).cosh();
        sum += f;
        if f < 1e-300 || t > 40.0 {
            break;
        }
        t += h;
    }
    sum * h
}

/// Householder reduction of a dense symmetric matrix to tridiagonal form.
fn tridiagonalize(n: usize, mut a: Vec<f64>) -> (Vec<f64>, Vec<f64>) {
    for k in 0..n.saturating_sub(2) {
        let x: Vec<f64> = (k + 1..n).map(|i| a[i * n + k]).collect();
        let alpha = -x[0].signum() * x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut v = x.clone();
        v[0] -= alpha;
        let vn: f64 = v.iter().map(|t| t * t).sum();
        if vn == 0.0 {
            continue;
        }
        // A <- H A H with H = I - 2 v vᵀ / |v|² acting on rows/cols k+1..n
        let m = n - k - 1;
        let idx = |i: usize| k + 1 + i;
        for col in 0..n {
            let dot: f64 = (0..m).map(|i| v[i] * a[idx(i) * n + col]).sum();
            for i in 0..m {
                a[idx(i) * n + col] -= 2.0 * v[i] * dot / vn;
            }
        }
        for row in 0..n {
            let dot: f64 = (0..m).map(|i| v[i] * a[row * n + idx(i)]).sum();
            for i in 0..m {
                a[row * n + idx(i)] -= 2.0 * v[i] * dot / vn;
            }
        }
    }
    let diag = (0..n).map(|i| a[i * n + i]).collect();
    let off = (0..n.saturating_sub(1)).map(|i| a[(i + 1) * n + i]).collect();
    (diag, off)
}

/// Sturm-sequence count of eigenvalues below `x`.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let b2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { 0.0 } else { b2 / q };
        if q == 0.0 {
            q = -1e-300;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn sturm_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let r = diag.iter().map(|d| d.abs()).sum::<f64>() + 2.0 * off.iter().map(|o| o.abs()).sum::<f64>() + 1.0;
    (0..diag.len())
        .map(|k| {
            let (mut lo, mut hi) = (-r, r);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if sturm_count(diag, off, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

#[test]
fn gamma_examples() {
    assert!(close(gamma_fn(1.0).unwrap(), 1.0, 1e-15));
    assert!(close(gamma_fn(0.5).unwrap(), PI.sqrt(), 1e-14));
    assert!(close(gamma_fn(2.5).unwrap(), 0.75 * PI.sqrt(), 1e-14));
}

#[test]
fn bessel_examples() {
    assert!(close(bessel_k(0.5, 1.0).unwrap(), (PI / 2.0).sqrt() * (-1.0f64).exp(), 1e-13));
    for (nu, x, approx) in [(0.0, 1.0, 0.4210244382), (1.0, 2.0, 0.1398658818)] {
        let oracle = bessel_k_integral(nu, x);
        assert!((oracle - approx).abs() < 1e-9, "oracle {oracle}");
        assert!(close(bessel_k(nu, x).unwrap(), oracle, 1e-10));
    }
}

#[test]
fn quadrature_examples() {
    let r1 = gauss_legendre(1).unwrap();
    assert_eq!((r1.nodes[0], r1.weights[0]), (0.0, 2.0));
    let r2 = gauss_legendre(2).unwrap();
    let mut nodes = r2.nodes.clone();
    nodes.sort_by(f64::total_cmp);
    assert!(close(nodes[0], -1.0 / 3f64.sqrt(), 1e-15) && close(nodes[1], 1.0 / 3f64.sqrt(), 1e-15));
    assert!(r2.weights.iter().all(|w| close(*w, 1.0, 1e-15)));
    let r4 = gauss_legendre(4).unwrap();
    assert!((r4.integrate(-1.0, 1.0, |x| x.powi(6)) - 2.0 / 7.0).abs() < 1e-13);
}

#[test]
fn dense_eigenvalue_examples() {
    assert_eq!(eig_dense(&SymmetricMatrix::diagonal(&[3.0, 1.0, 2.0]).unwrap()).unwrap().eigenvalues, vec![1.0, 2.0, 3.0]);
    let swap = SymmetricMatrix::from_full(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
    let e = eig_dense(&swap).unwrap().eigenvalues;
    assert!(close(e[0], -1.0, 1e-15) && close(e[1], 1.0, 1e-15));

    let n = 50;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let x: f64 = rng.gen_range(-1.0..1.0) * if i == j { 2f64.sqrt() } else { 1.0 };
            a[i * n + j] = x;
            a[j * n + i] = x;
        }
    }
    let got = eig_dense(&SymmetricMatrix::from_full(n, &a).unwrap()).unwrap().eigenvalues;
    let (d, o) = tridiagonalize(n, a);
    let oracle = sturm_eigenvalues(&d, &o);
    for (x, y) in got.iter().zip(&oracle) {
        assert!((x - y).abs() < 1e-9, "{x} {y}");
    }
}

#[test]
fn lanczos_examples() {
    let n = 200;
    let h = PI / 201.0;
    let mut t = Vec::new();
    for i in 0..n {
        t.push((i, i, 2.0 / (h * h)));
        if i + 1 < n {
            t.push((i + 1, i, -1.0 / (h * h)));
        }
    }
    let a = SymmetricMatrix::sparse(n, t).unwrap();
    let s = eig_lanczos_lowest(&a, 3, 1e-10).unwrap();
    for (j, ev) in s.eigenvalues.iter().enumerate() {
        let exact = 4.0 / (h * h) * ((j + 1) as f64 * PI / (2.0 * (n as f64 + 1.0))).sin().powi(2);
        assert!(close(*ev, exact, 1e-9), "{ev} {exact}");
    }
    let diag = SymmetricMatrix::sparse(6, (0..6).map(|i| (i, i, 5.0 - i as f64)).collect()).unwrap();
    assert_eq!(eig_lanczos_lowest(&diag, 2, 1e-12).unwrap().eigenvalues.len(), 2);
    let low = eig_lanczos_lowest(&diag, 2, 1e-12).unwrap().eigenvalues;
    assert!(close(low[0], 0.0, 1e-10) && close(low[1], 1.0, 1e-10));
}

#[test]
fn inertia_examples() {
    let d = SymmetricMatrix::diagonal(&[-2.0, -1.0, 3.0]).unwrap();
    assert_eq!(inertia_below(&d, 0.0).unwrap(), 2);
    assert_eq!(inertia_below(&d, -1.5).unwrap(), 1);

    let n = 300;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut t = Vec::new();
    for i in 0..n {
        t.push((i, i, rng.gen_range(-4.0..4.0)));
        for k in [1, 4, 17] {
            if i + k < n {
                t.push((i + k, i, rng.gen_range(-1.0..1.0)));
            }
        }
    }
    let a = SymmetricMatrix::sparse(n, t).unwrap();
    let ev = eig_dense(&a.to_dense().unwrap()).unwrap();
    for shift in [-3.0, -0.77, 0.0, 1.3, 4.1] {
        assert_eq!(inertia_below(&a, shift).unwrap(), ev.count_below(shift));
    }
}

#[test]
fn constant_examples() {
    assert!(close(lt_classical(q(0.0, 1)).unwrap(), 1.0 / PI, 1e-14));
    assert!(close(lt_classical(q(1.5, 1)).unwrap(), 3.0 / 16.0, 1e-14));
    assert!(close(lt_classical(q(0.0, 2)).unwrap(), 1.0 / (4.0 * PI), 1e-14));
    assert!(close(rel_classical(q(0.0, 2)).unwrap(), lt_classical(q(0.0, 2)).unwrap(), 1e-14));
    assert!(close(rel_classical(q(1.0, 1)).unwrap(), 1.0 / (2.0 * PI), 1e-14));
    assert!(close(rel_classical(q(0.0, 3)).unwrap(), lt_classical(q(0.0, 3)).unwrap(), 1e-14));
    assert!(close(sobolev_trace_constant(2).unwrap(), PI.sqrt(), 1e-14));
    assert!(close(sobolev_trace_constant(3).unwrap(), 2f64.powf(1.0 / 3.0) * PI.powf(2.0 / 3.0), 1e-14));
    assert!(close(sobolev_trace_constant(7).unwrap(), sobolev_trace_constant_log(7).unwrap(), 1e-12));
    assert_eq!(daubechies_lower_factor(2).unwrap(), 4.0);
    assert_eq!(daubechies_lower_factor(3).unwrap(), 3.0);
    assert!(daubechies_lower_factor(7).unwrap() > 1.0 && daubechies_lower_factor(8).unwrap() < 1.0);
}

#[test]
fn bound_table_examples() {
    let e = surface_bound_table(q(2.0, 5)).unwrap();
    assert_eq!((e.factor, e.kind), (1.0, BoundKind::Sharp));
    assert_eq!(surface_bound_table(q(0.0, 2)).unwrap().factor, 6.04);
    assert!(matches!(surface_bound_table(q(0.0, 1)), Err(Error::NoBound { .. })));
}

#[test]
fn optimal_rho_examples() {
    let (rho, c) = optimal_rho(1.0, 1).unwrap();
    assert!(close(rho, 0.5f64.sqrt(), 1e-15) && close(c, 0.5, 1e-15));
    let scan = (1..10_000)
        .map(|i| i as f64 * 1e-4)
        .min_by(|a, b| sandwich_coefficient(1.0, 1, *a).total_cmp(&sandwich_coefficient(1.0, 1, *b)))
        .unwrap();
    assert!((scan - rho).abs() <= 1e-4);
    let (c10, c100) = (optimal_rho(10.0, 1).unwrap().1, optimal_rho(100.0, 1).unwrap().1);
    assert!(c100 < c10 && c10 < c);
    for (g, d) in [(1.0, 1), (2.5, 2), (0.4, 3)] {
        let (r, c) = optimal_rho(g, d).unwrap();
        let consistency = c * (r / (1.0 - r * r).sqrt()).powf(g) * r.powf(-g - d as f64);
        assert!(close(consistency, 1.0, 1e-12));
    }
}

#[test]
fn aizenman_lieb_examples() {
    let rule = gauss_legendre(32).unwrap();
    assert!((aizenman_lieb_identity(-1.0, 2.0, 1.0, &rule).unwrap() - 1.0).abs() < 1e-10);
    assert!(close(aizenman_lieb_identity(-3.0, 1.5, 0.5, &rule).unwrap(), 3f64.powf(1.5), 1e-10));
    for eps in [0.5, 0.25, 0.1] {
        assert!((aizenman_lieb_identity(-1.0, 1.0 + eps, 1.0, &rule).unwrap() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn relativistic_examples() {
    let g = BoxGrid::new(1, 10.0, 64).unwrap();
    let zero = Potential::zero(1).unwrap();
    let low = eig_dense(&relativistic_matrix(&zero, &g, 0.3).unwrap().matrix).unwrap().min().unwrap();
    assert!(close(low, 0.3f64.sqrt(), 1e-12));
    let bs = birman_schwinger_matrix(&zero, &g, 0.3).unwrap().matrix;
    assert_eq!(bs.max_abs(), 0.0);
    assert_eq!(count_negatives_relativistic(&zero, &g, 0.5).unwrap().count, 0);

    let sech = Potential::sech2(1.0, 1.0).unwrap();
    let g = BoxGrid::new(1, 16.0, 256).unwrap();
    let mut last = 0;
    for alpha in [1.0, 2.0, 4.0, 8.0] {
        let c = count_negatives_relativistic(&sech.with_coupling(alpha).unwrap(), &g, 0.0).unwrap();
        assert!(c.count >= last && c.count >= 1);
        if let Some(bs) = c.birman_schwinger {
            assert_eq!(bs, c.direct);
        }
        last = c.count;
    }
    assert!(last > 1);
}

#[test]
fn free_robin_operator_is_positive() {
    let g = HalfSpaceGrid::uniform(5.0, 5.0, 19, 19).unwrap();
    let op = robin_halfspace_matrix(&Potential::zero(1).unwrap(), &g).unwrap();
    assert_eq!(inertia_below(&op.matrix, 0.0).unwrap(), 0);
}

#[test]
fn waveguide_examples() {
    assert!(close(waveguide_riesz_exact(PI, 2.0, 1.0, 2).unwrap(), 3.0, 1e-14));
    assert_eq!(waveguide_riesz_exact(PI, 0.9, 1.0, 1).unwrap(), 0.0);
    let bound = lt_classical(q(1.0, 1)).unwrap() * PI * 8.0;
    assert!(close(bound, 16.0 / 3.0, 1e-14));
}

#[test]
fn riesz_examples() {
    let s = Spectrum::complete(vec![-4.0, -1.0, 2.0]);
    assert!(close(riesz_mean(&s, 0.5).unwrap().value, 3.0, 1e-15));
    assert_eq!(riesz_mean(&s, 0.0).unwrap().value, 2.0);
    for (v, tau, gamma) in [(1.5f64, 0.5, 1.3), (2.0, 5.0, 2.0), (0.7, 0.1, 0.0)] {
        let got = riesz_mean_shifted(&Spectrum::complete(vec![-v * v]), gamma, tau).unwrap().value;
        let want = if v * v > tau { (v * v - tau).powf(gamma) } else { 0.0 };
        assert!(close(got, want, 1e-14));
    }
    let rule = gauss_legendre(8).unwrap();
    let one = riesz_via_counting(|t| Ok(usize::from(t < 1.0)), 1.0, &rule, 2.0).unwrap();
    assert!((one.value - 1.0).abs() < 1e-8);
    let two = riesz_via_counting(|t| Ok(usize::from(t < 4.0) + usize::from(t < 1.0)), 2.0, &rule, 5.0).unwrap();
    assert!((two.value - 17.0).abs() < 1e-8);
}
