use crate::elliptic::{conjugated_matrix, conjugation_guard, DiscreteOperator};
use crate::geometry::{triangle_points, TriangleMesh};
use crate::holomorphic::{cz, HolomorphicPhase};
use crate::linalg::{CsrMatrix, EnvelopeLdl, TripletBuilder};
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// How the correction `r₂` is discretized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum R2Route {
    /// Galerkin form of `e^{-Φ/h}(Δ_g + V)e^{Φ/h}` acting on amplitudes:
    /// `∫∇w·∇v - (4/h)∫Φ'∂̄w v + ∫e^{2λ}V w v`.
    Amplitude,
    /// Nodal conjugation of the stiffness matrix, `D₋ K D₊`. The assembled
    /// `u` is then an exact discrete solution, as the boundary identity needs.
    #[default]
    Nodal,
}

/// `h`-independent pieces of the amplitude-space operator for one phase.
pub struct AmplitudeOperator {
    base: CsrMatrix<Complex64>,
    drift: CsrMatrix<Complex64>,
}

impl AmplitudeOperator {
    pub fn new(mesh: &TriangleMesh, op: &DiscreteOperator, phase: &HolomorphicPhase) -> Self {
        let base = op.system.map_entries(|_, _, v| Complex64::new(v, 0.0));
        let mut c = TripletBuilder::<Complex64>::with_capacity(mesh.n_nodes(), mesh.n_nodes(), 9 * mesh.n_triangles());
        for t in 0..mesh.n_triangles() {
            let tri = mesh.triangles[t];
            let g = mesh.basis_gradients(t);
            let mut load = [Complex64::new(0.0, 0.0); 3];
            for (x, l, w) in triangle_points(mesh, t) {
                let d = phase.d1(cz(x)) * w;
                for i in 0..3 {
                    load[i] += d * l[i];
                }
            }
            for j in 0..3 {
                let dbar = Complex64::new(g[j][0], g[j][1]) * 0.5;
                for i in 0..3 {
                    c.push(tri[i], tri[j], load[i] * dbar);
                }
            }
        }
        AmplitudeOperator { base, drift: c.build() }
    }

    pub fn matrix(&self, h: f64) -> CsrMatrix<Complex64> {
        self.base.add(&self.drift, Complex64::new(-4.0 / h, 0.0))
    }
}

fn interior_rows<S: crate::linalg::Scalar>(a: &CsrMatrix<S>, nb: usize) -> CsrMatrix<S> {
    let rows: Vec<usize> = (nb..a.n_rows).collect();
    let cols: Vec<usize> = (0..a.n_cols).collect();
    a.submatrix(&rows, &cols)
}

/// Dual norm `(Σ |ρ_i|² / m_i)^{1/2}` of weak residuals on interior rows.
pub fn dual_norm(rho: &[Complex64], lumped_interior: &[f64]) -> f64 {
    rho.iter().zip(lumped_interior).map(|(r, m)| r.norm_sqr() / m).sum::<f64>().sqrt()
}

/// Weak residual of `e^{-Φ/h}(Δ_g+V)e^{Φ/h} w` on interior rows, amplitude form.
pub fn amplitude_residual(amp: &AmplitudeOperator, nb: usize, h: f64, w: &[Complex64]) -> Vec<Complex64> {
    let p = amp.matrix(h);
    p.mul_vec(w)[nb..].to_vec()
}

/// Solves `B r = g` for the `r` of least lumped `M_g`-norm, where `B` has full
/// row rank, via the normal equations `B L⁻¹ Bᴴ y = g`.
struct MinNorm<S: crate::linalg::Scalar> {
    b: CsrMatrix<S>,
    bh: CsrMatrix<S>,
    inv_mass: Vec<f64>,
    normal: CsrMatrix<S>,
    factor: EnvelopeLdl<S>,
}

impl<S: crate::linalg::Scalar> MinNorm<S> {
    fn new(b: CsrMatrix<S>, lumped: &[f64]) -> Result<Self> {
        let inv_mass: Vec<f64> = lumped.iter().map(|m| 1.0 / m).collect();
        let normal = b.gram_weighted(&inv_mass);
        let factor = EnvelopeLdl::factor(&normal).map_err(|e| Error::Solver(format!("minimum-norm system: {e}")))?;
        let bh = b.conj_transpose();
        Ok(MinNorm { b, bh, inv_mass, normal, factor })
    }

    fn solve(&self, g: &[Complex64], steps: usize) -> Vec<Complex64>
    where
        Complex64: crate::linalg::Acts<S>,
    {
        let lift = |y: &[Complex64]| -> Vec<Complex64> {
            self.bh.mul_vec(y).into_iter().zip(&self.inv_mass).map(|(v, w)| v * *w).collect()
        };
        let mut y = self.factor.solve_refined(&self.normal, g, 1);
        let mut x = lift(&y);
        for _ in 0..steps {
            let bx = self.b.mul_vec(&x);
            let res: Vec<Complex64> = g.iter().zip(&bx).map(|(a, b)| a - b).collect();
            let dy = self.factor.solve(&res);
            for (a, d) in y.iter_mut().zip(&dy) {
                *a += d;
            }
            x = lift(&y);
        }
        x
    }
}

/// Outcome of an `r₂` solve.
pub struct R2Solve {
    pub r2: Vec<Complex64>,
    /// Dual norm of the residual before and after the correction.
    pub before: f64,
    pub after: f64,
}

/// Least-norm `r₂` in the amplitude form.
pub fn solve_r2_amplitude(amp: &AmplitudeOperator, op: &DiscreteOperator, h: f64, base: &[Complex64], steps: usize) -> Result<R2Solve> {
    let nb = op.n_boundary;
    let b = interior_rows(&amp.matrix(h), nb);
    let g: Vec<Complex64> = b.mul_vec(base).into_iter().map(|v| -v).collect();
    let li = &op.lumped[nb..];
    let before = dual_norm(&g, li);
    let mn = MinNorm::new(b, &op.lumped)?;
    let r2 = mn.solve(&g, steps);
    let total: Vec<Complex64> = base.iter().zip(&r2).map(|(a, b)| a + b).collect();
    let after = dual_norm(&mn.b.mul_vec(&total), li);
    Ok(R2Solve { r2, before, after })
}

/// Least-norm `r₂` for the nodal conjugation `U⁻¹ D₋ K D₊ U` with
/// `U = e^{iψ/h}`. Unitary `U` commutes with the lumped mass, so the problem
/// reduces to the real matrix `D₋ K D₊`.
pub fn solve_r2_nodal(op: &DiscreteOperator, phi: &[f64], psi: &[f64], h: f64, base: &[Complex64], steps: usize) -> Result<R2Solve> {
    conjugation_guard(phi, h)?;
    let nb = op.n_boundary;
    let p = interior_rows(&conjugated_matrix(&op.system, phi, h), nb);
    let u: Vec<Complex64> = psi.iter().map(|s| Complex64::from_polar(1.0, s / h)).collect();
    let s0: Vec<Complex64> = base.iter().zip(&u).map(|(a, u)| a * u).collect();
    let g: Vec<Complex64> = p.mul_vec(&s0).into_iter().map(|v| -v).collect();
    let li = &op.lumped[nb..];
    let before = dual_norm(&g, li);
    let mn = MinNorm::new(p, &op.lumped)?;
    let s = mn.solve(&g, steps);
    let total: Vec<Complex64> = s0.iter().zip(&s).map(|(a, b)| a + b).collect();
    let after = dual_norm(&mn.b.mul_vec(&total), li);
    let r2 = s.iter().zip(&u).map(|(s, u)| s / u).collect();
    Ok(R2Solve { r2, before, after })
}
