use super::assemble::DiscreteOperator;
use crate::linalg::{Acts, Field};
use crate::par::{map_range, ExecPolicy};
use crate::{Error, Result};
use std::fmt::Write as _;
use std::ops::Range;

/// Solve `(Δ_g + V) u = rhs` weakly with `u = bdata` on the boundary.
pub fn dirichlet_solve<T: Acts<f64>>(op: &DiscreteOperator, rhs: Option<&[T]>, bdata: &[T]) -> Result<Vec<T>> {
    let n = op.n_nodes();
    let nb = op.n_boundary;
    if bdata.len() != nb {
        return Err(Error::InvalidInput(format!("boundary data has {} entries, expected {nb}", bdata.len())));
    }
    let f = op.interior_factor()?;
    let mut load = match rhs {
        Some(r) => {
            if r.len() != n {
                return Err(Error::InvalidInput(format!("rhs has {} entries, expected {n}", r.len())));
            }
            op.mass.mul_vec(r)[nb..].to_vec()
        }
        None => vec![T::zero(); n - nb],
    };
    let lift = op.k_ib.mul_vec(bdata);
    for (l, k) in load.iter_mut().zip(lift) {
        *l -= k;
    }
    let ui = f.solve_refined(&op.k_ii, &load, 1);
    let mut u = bdata.to_vec();
    u.extend(ui);
    Ok(u)
}

/// Smallest eigenvalue of the interior pencil `(K_ii, M_ii)` by inverse iteration.
pub fn first_dirichlet_eigenvalue(op: &DiscreteOperator) -> Result<f64> {
    let f = op.interior_factor()?;
    let m = op.mass_ii();
    let n = op.n_interior();
    let mut x = vec![1.0; n];
    let mut mu = f64::INFINITY;
    for _ in 0..500 {
        let mx = m.mul_vec(&x);
        let y = f.solve(&mx);
        let ky = op.k_ii.mul_vec(&y);
        let my = m.mul_vec(&y);
        let num: f64 = y.iter().zip(&ky).map(|(a, b)| a * b).sum();
        let den: f64 = y.iter().zip(&my).map(|(a, b)| a * b).sum();
        let next = num / den;
        let norm = den.sqrt();
        x = y.iter().map(|v| v / norm).collect();
        if (next - mu).abs() <= 1e-13 * next.abs() {
            return Ok(next);
        }
        mu = next;
    }
    Err(Error::Solver("eigenvalue inverse iteration did not converge".into()))
}

/// Dense Dirichlet-to-Neumann matrix on boundary nodes.
#[derive(Debug, Clone)]
pub struct DtnMap {
    pub n: usize,
    /// Row-major `n x n`.
    pub s: Vec<f64>,
    pub components: Vec<Range<usize>>,
}

/// Schur complement `S = K_bb - K_bi K_ii^{-1} K_ib`. The pairing `f₂ᵀ S f₁`
/// is the discrete `∫ (∂_ν u₁) f₂ ds` with the outward normal.
pub fn dtn(op: &DiscreteOperator, components: &[Range<usize>], policy: ExecPolicy) -> Result<DtnMap> {
    let nb = op.n_boundary;
    let f = op.interior_factor()?;
    let kib_t = op.k_ib.transpose();
    let columns: Vec<Vec<f64>> = map_range(policy, nb, |j| {
        let mut col = vec![0.0; op.n_interior()];
        let (rows, vals) = kib_t.row(j);
        for (&r, &v) in rows.iter().zip(vals) {
            col[r] = v;
        }
        let x = f.solve(&col);
        let y = op.k_bi.mul_vec(&x);
        (0..nb).map(|i| op.k_bb.get(i, j) - y[i]).collect()
    });
    let mut s = vec![0.0; nb * nb];
    for (j, col) in columns.iter().enumerate() {
        for i in 0..nb {
            s[i * nb + j] = col[i];
        }
    }
    Ok(DtnMap { n: nb, s, components: components.to_vec() })
}

impl DtnMap {
    pub fn apply<T: Field>(&self, f: &[T]) -> Vec<T> {
        (0..self.n)
            .map(|i| {
                let row = &self.s[i * self.n..(i + 1) * self.n];
                let mut acc = T::zero();
                for (&x, &a) in f.iter().zip(row) {
                    acc += x * a;
                }
                acc
            })
            .collect()
    }

    /// `gᵀ S f` (bilinear, no conjugation).
    pub fn pairing(&self, f: &[f64], g: &[f64]) -> f64 {
        self.apply(f).iter().zip(g).map(|(a, b)| a * b).sum()
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..i {
                m = m.max((self.s[i * self.n + j] - self.s[j * self.n + i]).abs());
            }
        }
        m
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# dtn n={} comp={}", self.n, self.components.len()).unwrap();
        for i in 0..self.n {
            let row: Vec<String> = self.s[i * self.n..(i + 1) * self.n].iter().map(|v| format!("{v:.17e}")).collect();
            writeln!(out, "{}", row.join(",")).unwrap();
        }
        out
    }
}
