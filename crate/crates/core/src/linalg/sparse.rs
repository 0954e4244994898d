use super::{Acts, Scalar};

/// Accumulates `(row, col, value)` entries; duplicates are summed on build.
#[derive(Debug, Clone)]
pub struct TripletBuilder<S: Scalar = f64> {
    n_rows: usize,
    n_cols: usize,
    entries: Vec<(usize, usize, S)>,
}

impl<S: Scalar> TripletBuilder<S> {
    pub fn new(n_rows: usize, n_cols: usize) -> Self {
        TripletBuilder { n_rows, n_cols, entries: Vec::new() }
    }

    pub fn with_capacity(n_rows: usize, n_cols: usize, cap: usize) -> Self {
        TripletBuilder { n_rows, n_cols, entries: Vec::with_capacity(cap) }
    }

    pub fn push(&mut self, r: usize, c: usize, v: S) {
        debug_assert!(r < self.n_rows && c < self.n_cols);
        self.entries.push((r, c, v));
    }

    /// Entries are summed in insertion order per `(row, col)`, so the result
    /// is bitwise reproducible for a fixed insertion sequence.
    pub fn build(mut self) -> CsrMatrix<S> {
        self.entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut indptr = vec![0usize; self.n_rows + 1];
        let mut indices = Vec::with_capacity(self.entries.len());
        let mut values: Vec<S> = Vec::with_capacity(self.entries.len());
        let mut last: Option<(usize, usize)> = None;
        for &(r, c, v) in &self.entries {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                indices.push(c);
                values.push(v);
                indptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..self.n_rows {
            indptr[i + 1] += indptr[i];
        }
        CsrMatrix { n_rows: self.n_rows, n_cols: self.n_cols, indptr, indices, values }
    }
}

/// Compressed sparse row matrix with sorted column indices.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix<S: Scalar = f64> {
    pub n_rows: usize,
    pub n_cols: usize,
    pub indptr: Vec<usize>,
    pub indices: Vec<usize>,
    pub values: Vec<S>,
}

impl<S: Scalar> CsrMatrix<S> {
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> (&[usize], &[S]) {
        let (s, e) = (self.indptr[i], self.indptr[i + 1]);
        (&self.indices[s..e], &self.values[s..e])
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(k) => vals[k],
            Err(_) => S::zero(),
        }
    }

    pub fn mul_vec<T: Acts<S>>(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.n_cols);
        (0..self.n_rows)
            .map(|i| {
                let (cols, vals) = self.row(i);
                let mut acc = T::zero();
                for (&c, &v) in cols.iter().zip(vals) {
                    acc += x[c] * v;
                }
                acc
            })
            .collect()
    }

    /// `self^T x` (no conjugation).
    pub fn tr_mul_vec<T: Acts<S>>(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.n_rows);
        let mut y = vec![T::zero(); self.n_cols];
        for i in 0..self.n_rows {
            let (cols, vals) = self.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                y[c] += x[i] * v;
            }
        }
        y
    }

    pub fn transpose(&self) -> CsrMatrix<S> {
        let mut b = TripletBuilder::with_capacity(self.n_cols, self.n_rows, self.nnz());
        for i in 0..self.n_rows {
            let (cols, vals) = self.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                b.push(c, i, v);
            }
        }
        b.build()
    }

    pub fn conj_transpose(&self) -> CsrMatrix<S> {
        let mut t = self.transpose();
        for v in t.values.iter_mut() {
            *v = v.conj();
        }
        t
    }

    /// Submatrix with the given rows and columns (in the given orders).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> CsrMatrix<S> {
        let mut col_map = vec![usize::MAX; self.n_cols];
        for (k, &c) in cols.iter().enumerate() {
            col_map[c] = k;
        }
        let mut b = TripletBuilder::new(rows.len(), cols.len());
        for (ri, &r) in rows.iter().enumerate() {
            let (cs, vs) = self.row(r);
            for (&c, &v) in cs.iter().zip(vs) {
                let k = col_map[c];
                if k != usize::MAX {
                    b.push(ri, k, v);
                }
            }
        }
        b.build()
    }

    /// `self * diag(w) * self^H`.
    pub fn gram_weighted(&self, w: &[f64]) -> CsrMatrix<S> {
        assert_eq!(w.len(), self.n_cols);
        let t = self.conj_transpose();
        let mut acc = vec![S::zero(); self.n_rows];
        let mut mark = vec![usize::MAX; self.n_rows];
        let mut touched: Vec<usize> = Vec::new();
        let mut indptr = vec![0usize; self.n_rows + 1];
        let mut indices = Vec::new();
        let mut values = Vec::new();
        for a in 0..self.n_rows {
            touched.clear();
            let (cols, vals) = self.row(a);
            for (&k, &pak) in cols.iter().zip(vals) {
                let s = pak * S::from_real(w[k]);
                let (rows_b, vals_b) = t.row(k);
                for (&b, &pbk) in rows_b.iter().zip(vals_b) {
                    if mark[b] != a {
                        mark[b] = a;
                        acc[b] = S::zero();
                        touched.push(b);
                    }
                    acc[b] += s * pbk;
                }
            }
            touched.sort_unstable();
            for &b in &touched {
                indices.push(b);
                values.push(acc[b]);
            }
            indptr[a + 1] = indices.len();
        }
        CsrMatrix { n_rows: self.n_rows, n_cols: self.n_rows, indptr, indices, values }
    }

    /// Replaces each stored value `a_ij` by `f(i, j, a_ij)`.
    pub fn map_entries<R: Scalar>(&self, f: impl Fn(usize, usize, S) -> R) -> CsrMatrix<R> {
        let mut values = Vec::with_capacity(self.nnz());
        for i in 0..self.n_rows {
            for k in self.indptr[i]..self.indptr[i + 1] {
                values.push(f(i, self.indices[k], self.values[k]));
            }
        }
        CsrMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            indptr: self.indptr.clone(),
            indices: self.indices.clone(),
            values,
        }
    }

    pub fn add(&self, other: &CsrMatrix<S>, alpha: S) -> CsrMatrix<S> {
        assert_eq!((self.n_rows, self.n_cols), (other.n_rows, other.n_cols));
        let mut b = TripletBuilder::with_capacity(self.n_rows, self.n_cols, self.nnz() + other.nnz());
        for i in 0..self.n_rows {
            let (c1, v1) = self.row(i);
            for (&c, &v) in c1.iter().zip(v1) {
                b.push(i, c, v);
            }
            let (c2, v2) = other.row(i);
            for (&c, &v) in c2.iter().zip(v2) {
                b.push(i, c, alpha * v);
            }
        }
        b.build()
    }

    pub fn row_sums(&self) -> Vec<S> {
        (0..self.n_rows)
            .map(|i| self.row(i).1.iter().fold(S::zero(), |a, &b| a + b))
            .collect()
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.n_rows {
            let (cols, vals) = self.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                m = m.max((v - self.get(c, i).conj()).abs_sq().sqrt());
            }
        }
        m
    }

    pub fn to_dense(&self) -> Vec<Vec<S>> {
        let mut d = vec![vec![S::zero(); self.n_cols]; self.n_rows];
        for i in 0..self.n_rows {
            let (cols, vals) = self.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                d[i][c] = v;
            }
        }
        d
    }
}
