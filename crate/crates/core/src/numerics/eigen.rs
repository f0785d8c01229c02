use super::matrix::{Spectrum, SymmetricMatrix, DENSE_LIMIT};
use crate::error::{Error, Result};

/// Eigenvalues and orthonormal eigenvectors of a symmetric matrix.
///
/// `vectors` is column-major: eigenvector `k` occupies
/// `vectors[k * n..(k + 1) * n]` and belongs to `values[k]`.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: Vec<f64>,
    pub n: usize,
}

impl Eigh {
    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k * self.n..(k + 1) * self.n]
    }
}

fn check_capacity(n: usize) -> Result<()> {
    if n > DENSE_LIMIT {
        return Err(Error::Capacity { what: "dense eigensolver", n, limit: DENSE_LIMIT });
    }
    Ok(())
}

/// Implicit QL on a symmetric tridiagonal matrix.
///
/// `d` is the diagonal, `e[i]` couples `i` and `i + 1` (`e[n-1]` is ignored).
/// If `z` is given (column-major `n x n`), the rotations are applied to its
/// columns. Results are left unsorted.
fn tql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let mut f = 0.0;
    // deflation threshold from the whole matrix, so leading zero rows with
    // subnormal couplings deflate instead of overflowing the shift
    let tst1 = d.iter().zip(e.iter()).map(|(a, b)| a.abs() + b.abs()).fold(0.0f64, f64::max);
    if tst1 == 0.0 {
        return Ok(());
    }
    for l in 0..n {
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 60 {
                    return Err(Error::Convergence {
                        message: format!("tridiagonal QL did not converge at index {l}"),
                        residuals: vec![e[l].abs()],
                    });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = z.as_deref_mut() {
                        let (left, right) = z.split_at_mut((i + 1) * n);
                        let zi = &mut left[i * n..];
                        let zi1 = &mut right[..n];
                        for k in 0..n {
                            let h = zi1[k];
                            zi1[k] = s * zi[k] + c * h;
                            zi[k] = c * zi[k] - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Eigenvalues of a symmetric tridiagonal matrix, ascending.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n > 0 && off.len() + 1 != n {
        return Err(Error::Data(format!("tridiagonal: {} diagonal and {} off-diagonal entries", n, off.len())));
    }
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    tql(&mut d, &mut e, None)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Eigenpairs of a symmetric tridiagonal matrix, ascending.
pub fn tridiagonal_eigh(diag: &[f64], off: &[f64]) -> Result<Eigh> {
    let n = diag.len();
    if n > 0 && off.len() + 1 != n {
        return Err(Error::Data(format!("tridiagonal: {} diagonal and {} off-diagonal entries", n, off.len())));
    }
    check_capacity(n)?;
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tql(&mut d, &mut e, Some(&mut z))?;
    Ok(sorted_pairs(d, z, n))
}

fn sorted_pairs(d: Vec<f64>, z: Vec<f64>, n: usize) -> Eigh {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&k| d[k]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for &k in &order {
        vectors.extend_from_slice(&z[k * n..(k + 1) * n]);
    }
    Eigh { values, vectors, n }
}

/// Householder reduction of a full row-major symmetric array to tridiagonal
/// form, using and overwriting the lower triangle.
fn householder_tridiagonal(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        d[k] = a[k * n + k];
        let m = n - k - 1;
        let off = k + 1;
        // reflector built from the column scaled to unit max entry, so
        // tiny or subnormal columns do not underflow when squared
        let scale = (0..m).map(|i| a[(off + i) * n + k].abs()).fold(0.0f64, f64::max);
        if scale == 0.0 {
            e[k] = 0.0;
            continue;
        }
        let mut norm2 = 0.0;
        for i in 0..m {
            let x = a[(off + i) * n + k] / scale;
            v[i] = x;
            norm2 += x * x;
        }
        let norm = norm2.sqrt();
        let alpha = if v[0] >= 0.0 { -norm } else { norm };
        v[0] -= alpha;
        let vtv: f64 = v[..m].iter().map(|x| x * x).sum();
        e[k] = alpha * scale;
        let beta = 2.0 / vtv;
        // p = beta A22 v, using the lower triangle of A22
        p[..m].iter_mut().for_each(|x| *x = 0.0);
        for i in 0..m {
            let row = (off + i) * n + off;
            let vi = v[i];
            let mut acc = 0.0;
            for j in 0..i {
                let aij = a[row + j];
                acc += aij * v[j];
                p[j] += aij * vi;
            }
            p[i] += acc + a[row + i] * vi;
        }
        let mut ptv = 0.0;
        for i in 0..m {
            p[i] *= beta;
            ptv += p[i] * v[i];
        }
        let kk = 0.5 * beta * ptv;
        for i in 0..m {
            p[i] -= kk * v[i];
        }
        for i in 0..m {
            let row = (off + i) * n + off;
            let (vi, wi) = (v[i], p[i]);
            for j in 0..=i {
                a[row + j] -= vi * p[j] + wi * v[j];
            }
        }
    }
    if n >= 2 {
        d[n - 2] = a[(n - 2) * n + n - 2];
        e[n - 2] = a[(n - 1) * n + n - 2];
    }
    if n >= 1 {
        d[n - 1] = a[(n - 1) * n + n - 1];
    }
    (d, e)
}

/// All eigenvalues of a symmetric matrix, as a complete spectrum.
pub fn eig_dense(a: &SymmetricMatrix) -> Result<Spectrum> {
    let n = a.n();
    check_capacity(n)?;
    let mut full = a.to_full();
    let (mut d, mut e) = householder_tridiagonal(&mut full, n);
    tql(&mut d, &mut e, None)?;
    Ok(Spectrum::complete(d))
}

/// Eigenvalues and eigenvectors of a symmetric matrix.
pub fn eigh_dense(a: &SymmetricMatrix) -> Result<Eigh> {
    let n = a.n();
    check_capacity(n)?;
    let mut v = a.to_full();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut v, &mut d, &mut e, n);
    // tred2 leaves e[i] coupling i-1 and i
    for i in 1..n {
        e[i - 1] = e[i];
    }
    if n > 0 {
        e[n - 1] = 0.0;
    }
    // to column-major: eigenvector k is column k of v
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            z[k * n + i] = v[i * n + k];
        }
    }
    tql(&mut d, &mut e, Some(&mut z))?;
    Ok(sorted_pairs(d, z, n))
}

/// Householder tridiagonalization with accumulated transformations
/// (row-major `v`, initially the matrix, finally the orthogonal factor).
fn tred2(v: &mut [f64], d: &mut [f64], e: &mut [f64], n: usize) {
    if n == 0 {
        return;
    }
    let at = |i: usize, j: usize| i * n + j;
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for k in 0..i {
            scale += d[k].abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
                v[at(j, i)] = 0.0;
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[at(j, i)] = f;
                g = e[j] + v[at(j, j)] * f;
                for k in j + 1..i {
                    g += v[at(k, j)] * d[k];
                    e[k] += v[at(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[at(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }
    for i in 0..n - 1 {
        v[at(n - 1, i)] = v[at(i, i)];
        v[at(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[at(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[at(k, i + 1)] * v[at(k, j)];
                }
                for k in 0..=i {
                    v[at(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[at(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
        v[at(n - 1, j)] = 0.0;
    }
    v[at(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// Number of eigenvalues of a tridiagonal matrix strictly below `x`,
/// by the Sturm sequence of `LDL^T` pivots.
pub fn tridiagonal_count_below(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let b2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { 0.0 } else { b2 / q };
        if q == 0.0 {
            q = -f64::EPSILON * (diag[i].abs() + x.abs() + 1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}
