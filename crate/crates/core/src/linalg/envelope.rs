use super::{reverse_cuthill_mckee, Acts, CsrMatrix, Scalar};
use crate::{Error, Result};

/// `P A P^T = L D L^H` in envelope (skyline) storage under a reverse
/// Cuthill-McKee ordering. No pivoting: intended for symmetric or Hermitian
/// matrices whose leading minors stay away from singular, which covers the
/// SPD and mildly indefinite Schrödinger blocks assembled here.
#[derive(Debug, Clone)]
pub struct EnvelopeLdl<S: Scalar = f64> {
    n: usize,
    perm: Vec<usize>,
    first: Vec<usize>,
    start: Vec<usize>,
    lower: Vec<S>,
    diag: Vec<f64>,
}

impl<S: Scalar> EnvelopeLdl<S> {
    /// Factor the Hermitian matrix `a` (only the lower triangle is read).
    /// Fails with [`Error::DirichletEigenvalue`] when a pivot collapses
    /// relative to the diagonal scale.
    pub fn factor(a: &CsrMatrix<S>) -> Result<Self> {
        if a.n_rows != a.n_cols {
            return Err(Error::InvalidInput("factor: matrix not square".into()));
        }
        let n = a.n_rows;
        let perm = reverse_cuthill_mckee(a);
        let mut inv = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut first: Vec<usize> = (0..n).collect();
        for old in 0..n {
            let i = inv[old];
            for &c in a.row(old).0 {
                let j = inv[c];
                if j < i {
                    first[i] = first[i].min(j);
                } else if i < j {
                    first[j] = first[j].min(i);
                }
            }
        }
        let mut start = vec![0usize; n + 1];
        for i in 0..n {
            start[i + 1] = start[i] + (i - first[i]);
        }
        let mut lower = vec![S::zero(); start[n]];
        let mut diag = vec![0.0f64; n];
        let mut scale: f64 = 0.0;
        for old in 0..n {
            let i = inv[old];
            let (cols, vals) = a.row(old);
            for (&c, &v) in cols.iter().zip(vals) {
                let j = inv[c];
                if j < i {
                    lower[start[i] + j - first[i]] = v;
                } else if j == i {
                    diag[i] = v.re();
                    scale = scale.max(v.re().abs());
                }
            }
        }
        let tol = scale * 1e-13;
        for i in 0..n {
            let fi = first[i];
            let (head, row_i) = lower.split_at_mut(start[i]);
            let row_i = &mut row_i[..i - fi];
            for j in fi..i {
                let fj = first[j];
                let k0 = fi.max(fj);
                let row_j = &head[start[j]..start[j] + (j - fj)];
                let mut s = S::zero();
                for k in k0..j {
                    s += row_i[k - fi] * row_j[k - fj].conj();
                }
                row_i[j - fi] -= s;
            }
            let mut d = diag[i];
            for j in fi..i {
                let u = row_i[j - fi];
                let l = u * (1.0 / diag[j]);
                d -= (u * l.conj()).re();
                row_i[j - fi] = l;
            }
            if !d.is_finite() || d.abs() <= tol {
                return Err(Error::DirichletEigenvalue(format!(
                    "pivot {d:.3e} at row {i} (scale {scale:.3e})"
                )));
            }
            diag[i] = d;
        }
        Ok(EnvelopeLdl { n, perm, first, start, lower, diag })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of negative pivots, i.e. negative eigenvalues of the matrix.
    pub fn negative_pivots(&self) -> usize {
        self.diag.iter().filter(|&&d| d < 0.0).count()
    }

    pub fn min_abs_pivot(&self) -> f64 {
        self.diag.iter().fold(f64::INFINITY, |m, d| m.min(d.abs()))
    }

    pub fn envelope_size(&self) -> usize {
        self.lower.len()
    }

    pub fn solve<T: Acts<S>>(&self, b: &[T]) -> Vec<T> {
        assert_eq!(b.len(), self.n);
        let mut x: Vec<T> = self.perm.iter().map(|&old| b[old]).collect();
        for i in 0..self.n {
            let fi = self.first[i];
            let row = &self.lower[self.start[i]..self.start[i + 1]];
            let mut acc = x[i];
            for (k, &l) in row.iter().enumerate() {
                acc -= x[fi + k] * l;
            }
            x[i] = acc;
        }
        for i in 0..self.n {
            x[i] = x[i] * (1.0 / self.diag[i]);
        }
        for i in (0..self.n).rev() {
            let fi = self.first[i];
            let xi = x[i];
            let row = &self.lower[self.start[i]..self.start[i + 1]];
            for (k, &l) in row.iter().enumerate() {
                x[fi + k] -= xi * l.conj();
            }
        }
        let mut out = vec![T::zero(); self.n];
        for (new, &old) in self.perm.iter().enumerate() {
            out[old] = x[new];
        }
        out
    }

    /// Solve followed by `steps` rounds of iterative refinement against `a`.
    pub fn solve_refined<T: Acts<S>>(&self, a: &CsrMatrix<S>, b: &[T], steps: usize) -> Vec<T> {
        let mut x = self.solve(b);
        for _ in 0..steps {
            let ax = a.mul_vec(&x);
            let r: Vec<T> = b.iter().zip(&ax).map(|(&bi, &ai)| bi - ai).collect();
            let dx = self.solve(&r);
            for (xi, d) in x.iter_mut().zip(dx) {
                *xi += d;
            }
        }
        x
    }
}
