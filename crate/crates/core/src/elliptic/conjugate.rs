use super::assemble::DiscreteOperator;
use crate::geometry::TriangleMesh;
use crate::linalg::{Acts, CsrMatrix};
use crate::{Error, Result};

/// Largest exponent range `(max φ - min φ) / h` accepted before the
/// conjugation weights risk overflow.
pub const MAX_EXPONENT: f64 = 700.0;

pub fn conjugation_guard(phi: &[f64], h: f64) -> Result<()> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidInput(format!("semiclassical parameter must be positive, got {h}")));
    }
    let (lo, hi) = phi.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let range = hi - lo;
    if !range.is_finite() || range / h > MAX_EXPONENT {
        return Err(Error::Guard(format!(
            "weight range {range:.3e} over h = {h:.3e} overflows; use h >= {:.3e}",
            range / MAX_EXPONENT
        )));
    }
    Ok(())
}

/// Entries `K_ij e^{(φ_j - φ_i)/h}`, i.e. `D₋ K D₊` with `D± = e^{±(φ - max φ)/h}`.
pub fn conjugated_matrix(k: &CsrMatrix, phi: &[f64], h: f64) -> CsrMatrix {
    k.map_entries(|i, j, v| v * ((phi[j] - phi[i]) / h).exp())
}

/// `D₋ K D₊ u` as weak-form values on interior test functions, for `u`
/// given on interior nodes (zero on the boundary).
pub fn conjugated_apply<T: Acts<f64>>(op: &DiscreteOperator, phi: &[f64], h: f64, u: &[T]) -> Result<Vec<T>> {
    conjugation_guard(phi, h)?;
    let nb = op.n_boundary;
    if u.len() != op.n_interior() || phi.len() != op.n_nodes() {
        return Err(Error::InvalidInput("conjugated_apply: field length mismatch".into()));
    }
    let m = phi.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let up: Vec<T> = (0..u.len()).map(|k| u[k] * ((phi[nb + k] - m) / h).exp()).collect();
    let ku = op.k_ii.mul_vec(&up);
    Ok(ku.into_iter().enumerate().map(|(k, v)| v * (-(phi[nb + k] - m) / h).exp()).collect())
}

/// `φ_ε = φ - (h / 2ε) Σ_j φ_j²`, the sum running over `φ` itself and the
/// auxiliary weights.
pub fn convexify(mesh: &TriangleMesh, phi: &[f64], phis: &[Vec<f64>], h: f64, eps: f64) -> Result<Vec<f64>> {
    if !(eps > 0.0) || h < 0.0 {
        return Err(Error::InvalidInput("convexify needs eps > 0 and h >= 0".into()));
    }
    for t in 0..mesh.n_triangles() {
        let g = mesh.basis_gradients(t);
        let tri = mesh.triangles[t];
        let mut s = 0.0;
        for f in std::iter::once(phi).chain(phis.iter().map(|v| v.as_slice())) {
            let gx: f64 = (0..3).map(|k| f[tri[k]] * g[k][0]).sum();
            let gy: f64 = (0..3).map(|k| f[tri[k]] * g[k][1]).sum();
            s += gx * gx + gy * gy;
        }
        if s < 1e-6 {
            return Err(Error::Guard(format!(
                "auxiliary weights do not cover critical points (Σ|dφ_j|² = {s:.2e} on triangle {t})"
            )));
        }
    }
    Ok((0..phi.len())
        .map(|i| {
            let sq: f64 = phi[i] * phi[i] + phis.iter().map(|f| f[i] * f[i]).sum::<f64>();
            phi[i] - h / (2.0 * eps) * sq
        })
        .collect())
}
