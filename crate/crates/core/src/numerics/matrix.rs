use crate::error::{Error, Result};

/// Largest dimension handled by the dense path.
pub const DENSE_LIMIT: usize = 6000;

#[derive(Debug, Clone, PartialEq)]
enum Storage {
    /// Packed lower triangle, row by row: entry `(i, j)`, `j <= i`, at `i(i+1)/2 + j`.
    Dense(Vec<f64>),
    /// Sorted, duplicate-free `(row, col, value)` with `row >= col`.
    Sparse(Vec<(usize, usize, f64)>),
}

/// Real symmetric matrix; only the lower triangle is stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    storage: Storage,
}

#[inline]
fn packed(i: usize, j: usize) -> usize {
    i * (i + 1) / 2 + j
}

impl SymmetricMatrix {
    /// Dense matrix from `f(i, j)` evaluated on the lower triangle.
    pub fn dense_from_fn<F: FnMut(usize, usize) -> f64>(n: usize, mut f: F) -> Result<Self> {
        if n > DENSE_LIMIT {
            return Err(Error::Capacity { what: "dense symmetric matrix", n, limit: DENSE_LIMIT });
        }
        let mut data = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in 0..=i {
                let v = f(i, j);
                if !v.is_finite() {
                    return Err(Error::Data(format!("non-finite entry at ({i}, {j})")));
                }
                data.push(v);
            }
        }
        Ok(Self { n, storage: Storage::Dense(data) })
    }

    /// Dense matrix from a full row-major array; the lower triangle is used.
    pub fn from_full(n: usize, a: &[f64]) -> Result<Self> {
        if a.len() != n * n {
            return Err(Error::Data(format!("expected {} entries, got {}", n * n, a.len())));
        }
        Self::dense_from_fn(n, |i, j| a[i * n + j])
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        Self::sparse(values.len(), values.iter().enumerate().map(|(i, &v)| (i, i, v)).collect())
    }

    /// Sparse matrix from lower-triangle triplets; duplicates are summed.
    pub fn sparse(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Result<Self> {
        for &(r, c, v) in &triplets {
            if r >= n || c > r {
                return Err(Error::Data(format!("triplet ({r}, {c}) is not in the lower triangle of a {n}x{n} matrix")));
            }
            if !v.is_finite() {
                return Err(Error::Data(format!("non-finite entry at ({r}, {c})")));
            }
        }
        triplets.sort_by_key(|a| (a.0, a.1));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(triplets.len());
        for t in triplets {
            match merged.last_mut() {
                Some(last) if last.0 == t.0 && last.1 == t.1 => last.2 += t.2,
                _ => merged.push(t),
            }
        }
        Ok(Self { n, storage: Storage::Sparse(merged) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.storage, Storage::Dense(_))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        match &self.storage {
            Storage::Dense(d) => d[packed(i, j)],
            Storage::Sparse(t) => t
                .binary_search_by(|e| (e.0, e.1).cmp(&(i, j)))
                .map(|k| t[k].2)
                .unwrap_or(0.0),
        }
    }

    /// Iterates over stored lower-triangle entries `(i, j, a_ij)`.
    pub fn lower_entries(&self) -> Box<dyn Iterator<Item = (usize, usize, f64)> + '_> {
        match &self.storage {
            Storage::Dense(d) => Box::new((0..self.n).flat_map(move |i| (0..=i).map(move |j| (i, j, d[packed(i, j)])))),
            Storage::Sparse(t) => Box::new(t.iter().copied()),
        }
    }

    /// Full row-major copy.
    pub fn to_full(&self) -> Vec<f64> {
        let n = self.n;
        let mut a = vec![0.0; n * n];
        for (i, j, v) in self.lower_entries() {
            a[i * n + j] = v;
            a[j * n + i] = v;
        }
        a
    }

    pub fn to_dense(&self) -> Result<Self> {
        match &self.storage {
            Storage::Dense(_) => Ok(self.clone()),
            Storage::Sparse(_) => {
                if self.n > DENSE_LIMIT {
                    return Err(Error::Capacity { what: "dense symmetric matrix", n: self.n, limit: DENSE_LIMIT });
                }
                let mut data = vec![0.0; self.n * (self.n + 1) / 2];
                for (i, j, v) in self.lower_entries() {
                    data[packed(i, j)] = v;
                }
                Ok(Self { n: self.n, storage: Storage::Dense(data) })
            }
        }
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for (i, j, a) in self.lower_entries() {
            y[i] += a * x[j];
            if i != j {
                y[j] += a * x[i];
            }
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.lower_entries().fold(0.0, |m, (_, _, v)| m.max(v.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.lower_entries()
            .map(|(i, j, v)| if i == j { v * v } else { 2.0 * v * v })
            .sum::<f64>()
            .sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Largest `i - j` over stored nonzeros.
    pub fn bandwidth(&self) -> usize {
        self.lower_entries().filter(|e| e.2 != 0.0).map(|(i, j, _)| i - j).max().unwrap_or(0)
    }

    /// Gershgorin enclosure `[lo, hi]` of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let mut radius = vec![0.0; self.n];
        let mut diag = vec![0.0; self.n];
        for (i, j, v) in self.lower_entries() {
            if i == j {
                diag[i] = v;
            } else {
                radius[i] += v.abs();
                radius[j] += v.abs();
            }
        }
        let lo = diag.iter().zip(&radius).map(|(d, r)| d - r).fold(f64::INFINITY, f64::min);
        let hi = diag.iter().zip(&radius).map(|(d, r)| d + r).fold(f64::NEG_INFINITY, f64::max);
        if self.n == 0 {
            (0.0, 0.0)
        } else {
            (lo, hi)
        }
    }
}

/// Compressed sparse rows of the full symmetric pattern, for repeated products.
#[derive(Debug, Clone)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl CsrMatrix {
    pub fn from_symmetric(a: &SymmetricMatrix) -> Self {
        let n = a.n();
        let mut counts = vec![0usize; n];
        for (i, j, _) in a.lower_entries() {
            counts[i] += 1;
            if i != j {
                counts[j] += 1;
            }
        }
        let mut row_ptr = vec![0usize; n + 1];
        for i in 0..n {
            row_ptr[i + 1] = row_ptr[i] + counts[i];
        }
        let nnz = row_ptr[n];
        let mut cols = vec![0usize; nnz];
        let mut vals = vec![0.0; nnz];
        let mut fill = row_ptr.clone();
        for (i, j, v) in a.lower_entries() {
            cols[fill[i]] = j;
            vals[fill[i]] = v;
            fill[i] += 1;
            if i != j {
                cols[fill[j]] = i;
                vals[fill[j]] = v;
                fill[j] += 1;
            }
        }
        Self { n, row_ptr, cols, vals }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.vals[k] * x[self.cols[k]];
            }
            y[i] = s;
        }
    }
}

/// Sorted eigenvalue list.
///
/// `complete` means every eigenvalue of the matrix is present. A partial
/// spectrum may still certify that it contains every eigenvalue strictly
/// below `certified_below`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub complete: bool,
    pub certified_below: Option<f64>,
}

impl Spectrum {
    pub fn complete(mut eigenvalues: Vec<f64>) -> Self {
        eigenvalues.sort_by(f64::total_cmp);
        Self { eigenvalues, complete: true, certified_below: None }
    }

    pub fn partial(mut eigenvalues: Vec<f64>, certified_below: Option<f64>) -> Self {
        eigenvalues.sort_by(f64::total_cmp);
        Self { eigenvalues, complete: false, certified_below }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Whether every eigenvalue below `x` is present.
    pub fn covers_below(&self, x: f64) -> bool {
        self.complete || self.certified_below.is_some_and(|c| c >= x)
    }

    /// Number of listed eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        self.eigenvalues.partition_point(|&e| e < x)
    }

    pub fn min(&self) -> Option<f64> {
        self.eigenvalues.first().copied()
    }

    pub fn max(&self) -> Option<f64> {
        self.eigenvalues.last().copied()
    }
}
