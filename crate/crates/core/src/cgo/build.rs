use super::cauchy::CauchyIntegrator;
use super::cutoff::CutoffPair;
use crate::elliptic::{dirichlet_solve, DiscreteOperator, PotentialField};
use crate::geometry::{GradientRecovery, Locator, TriangleMesh};
use crate::holomorphic::{cz, omega_correction, HolomorphicOneForm, HolomorphicPhase, Poly};
use crate::par::ExecPolicy;
use crate::{Error, Result};
use num_complex::Complex64;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// `b = -∂G(aV) + ω` on the nodes, where `G` inverts `Δ_g` with zero
/// Dirichlet data (`op0` must carry no potential) and `ω` cancels `∂G(aV)` at
/// the critical points. `b(p') = 0` holds exactly for the P1 interpolant.
pub fn build_rhs_oneform(
    op0: &DiscreteOperator,
    mesh: &TriangleMesh,
    recovery: &GradientRecovery,
    locator: &Locator,
    a: &[Complex64],
    v: &PotentialField,
    phase: &HolomorphicPhase,
) -> Result<(Vec<Complex64>, HolomorphicOneForm)> {
    let n = mesh.n_nodes();
    let crit = &phase.critical_points;
    if v.is_zero() {
        return Ok((vec![ZERO; n], HolomorphicOneForm { w: Poly::new(vec![]) }));
    }
    let av: Vec<Complex64> = a.iter().zip(&v.values).map(|(a, v)| a * v).collect();
    let w = dirichlet_solve(op0, Some(&av), &vec![ZERO; mesh.n_boundary])?;
    let grad = recovery.gradient(&w);
    let dw: Vec<Complex64> = grad.iter().map(|g| (g[0] - Complex64::i() * g[1]) * 0.5).collect();
    let at = |f: &[Complex64], p: Complex64| {
        locator.interpolate(mesh, f, [p.re, p.im]).ok_or_else(|| {
            Error::Guard(format!("gradient recovery near critical point {p} left the mesh; refine the mesh or move the point"))
        })
    };
    let targets = crit.iter().map(|&p| Ok((p, at(&dw, p)?))).collect::<Result<Vec<_>>>()?;
    let omega = omega_correction(&targets);
    let mut b: Vec<Complex64> = (0..n).map(|i| omega.eval(cz(mesh.vertices[i])) - dw[i]).collect();
    // remove the interpolation residual at each critical point with a
    // Lagrange combination so that the interpolant vanishes there exactly
    let basis: Vec<Vec<Complex64>> = (0..crit.len())
        .map(|j| {
            let pts: Vec<(Complex64, Complex64)> = crit
                .iter()
                .enumerate()
                .map(|(k, &c)| (c, if k == j { Complex64::new(1.0, 0.0) } else { ZERO }))
                .collect();
            let l = Poly::interpolate(&pts);
            mesh.nodal(|p| l.eval(cz(p)))
        })
        .collect();
    let m = crit.len();
    let mut mat = vec![vec![ZERO; m]; m];
    let mut rhs = vec![ZERO; m];
    for k in 0..m {
        rhs[k] = at(&b, crit[k])?;
        for j in 0..m {
            mat[k][j] = at(&basis[j], crit[k])?;
        }
    }
    let c = dense_solve(mat, rhs)?;
    for (j, cj) in c.iter().enumerate() {
        for i in 0..n {
            b[i] -= cj * basis[j][i];
        }
    }
    Ok((b, omega))
}

/// Gaussian elimination with partial pivoting for tiny complex systems.
pub(crate) fn dense_solve(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Result<Vec<Complex64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm())).unwrap();
        if a[piv][col].norm() < 1e-300 {
            return Err(Error::Solver("singular interpolation system".into()));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                let v = a[col][c];
                a[r][c] -= f * v;
            }
            let v = b[col];
            b[r] -= f * v;
        }
    }
    let mut x = vec![ZERO; n];
    for r in (0..n).rev() {
        let s: Complex64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Ok(x)
}

/// `e^{-2iψ/h} T(e^{2iψ/h} χ₁ b)` at the nodes inside `supp χ`, with `T` the
/// inverse of `∂`. Nodes outside are left at zero.
fn localized_transform(
    mesh: &TriangleMesh,
    cauchy: &CauchyIntegrator,
    b: &[Complex64],
    psi: &[f64],
    h: f64,
    cut: &CutoffPair,
    policy: ExecPolicy,
) -> Vec<Complex64> {
    let n = mesh.n_nodes();
    let osc = |i: usize, s: f64| Complex64::from_polar(1.0, s * 2.0 * psi[i] / h);
    let f: Vec<Complex64> = (0..n)
        .map(|i| {
            let c1 = cut.chi1(cz(mesh.vertices[i]));
            if c1 == 0.0 {
                ZERO
            } else {
                osc(i, 1.0) * b[i] * c1
            }
        })
        .collect();
    let nodes: Vec<usize> = (0..n).filter(|&i| cut.chi(cz(mesh.vertices[i])) > 0.0).collect();
    let pts: Vec<[f64; 2]> = nodes.iter().map(|&i| mesh.vertices[i]).collect();
    let tf = cauchy.d_inverse(&f, &pts, policy);
    let mut out = vec![ZERO; n];
    for (k, &i) in nodes.iter().enumerate() {
        out[i] = osc(i, -1.0) * tf[k];
    }
    out
}

/// `r₁,₁ = Σ χ e^{-2iψ/h} T(e^{2iψ/h} χ₁ b)` over the cutoff pairs, and
/// `η`, the same transform times `∂χ`.
#[allow(clippy::too_many_arguments)]
pub fn build_r11_eta(
    mesh: &TriangleMesh,
    cauchy: &CauchyIntegrator,
    b: &[Complex64],
    phase: &HolomorphicPhase,
    h: f64,
    cuts: &[CutoffPair],
    policy: ExecPolicy,
) -> (Vec<Complex64>, Vec<Complex64>) {
    let n = mesh.n_nodes();
    let psi = phase.nodal_psi(mesh);
    let mut r11 = vec![ZERO; n];
    let mut eta = vec![ZERO; n];
    if b.iter().all(|v| *v == ZERO) {
        return (r11, eta);
    }
    for cut in cuts {
        let t = localized_transform(mesh, cauchy, b, &psi, h, cut, policy);
        for i in 0..n {
            if t[i] != ZERO {
                let z = cz(mesh.vertices[i]);
                r11[i] += t[i] * cut.chi(z);
                eta[i] += t[i] * cut.dchi(z);
            }
        }
    }
    (r11, eta)
}

/// `r₁,₂ = h(-η + (1 - Σχ₁) b) / Φ'`.
pub fn build_r12(
    mesh: &TriangleMesh,
    eta: &[Complex64],
    b: &[Complex64],
    phase: &HolomorphicPhase,
    h: f64,
    cuts: &[CutoffPair],
) -> Result<Vec<Complex64>> {
    (0..mesh.n_nodes())
        .map(|i| {
            let z = cz(mesh.vertices[i]);
            let chi1: f64 = cuts.iter().map(|c| c.chi1(z)).sum();
            let rhs = -eta[i] + b[i] * (1.0 - chi1);
            if rhs == ZERO {
                return Ok(ZERO);
            }
            let d = phase.d1(z);
            if d.norm() < 1e-8 {
                return Err(Error::Guard(format!("|Φ'| = {:.2e} at node {i} where the r12 source is nonzero; cutoffs misconfigured", d.norm())));
            }
            Ok(rhs * h / d)
        })
        .collect()
}
