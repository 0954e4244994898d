use crate::cgo::CgoSolution;
use crate::elliptic::DtnMap;
use crate::geometry::{triangle_points, ConformalFactor, TriangleMesh};
use crate::holomorphic::cz;
use crate::{Error, Result};
use num_complex::Complex64;

/// Boundary side `f̄₂ᵀ(S₁ - S₂)f₁` of the Green identity.
pub fn alessandrini_pairing(dtn1: &DtnMap, dtn2: &DtnMap, u1: &CgoSolution, u2: &CgoSolution) -> Result<Complex64> {
    let n = dtn1.n;
    if dtn2.n != n || u1.trace.len() != n || u2.trace.len() != n {
        return Err(Error::InvalidInput(format!(
            "trace length mismatch: DtN sizes {} and {}, traces {} and {}",
            n,
            dtn2.n,
            u1.trace.len(),
            u2.trace.len()
        )));
    }
    let f1 = &u1.trace;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let row1 = &dtn1.s[i * n..(i + 1) * n];
        let row2 = &dtn2.s[i * n..(i + 1) * n];
        let mut s = Complex64::new(0.0, 0.0);
        for j in 0..n {
            s += f1[j] * (row1[j] - row2[j]);
        }
        acc += u2.trace[i].conj() * s;
    }
    Ok(acc)
}

/// `∫ e^{2iψ/h} w dv_g` style quadrature of `u₁ dV ū₂` with the exponentials
/// evaluated exactly and the amplitudes taken as P1 interpolants.
fn volume_quadrature(
    mesh: &TriangleMesh,
    lambda: &ConformalFactor,
    u1: &CgoSolution,
    u2: &CgoSolution,
    w1: &[Complex64],
    w2: &[Complex64],
    dv: &[f64],
) -> Complex64 {
    let h = u1.h;
    let mut acc = Complex64::new(0.0, 0.0);
    for t in 0..mesh.n_triangles() {
        let tri = mesh.triangles[t];
        if tri.iter().all(|&v| dv[v] == 0.0) {
            continue;
        }
        for (x, l, w) in triangle_points(mesh, t) {
            let z = cz(x);
            let lerp = |f: &[Complex64]| f[tri[0]] * l[0] + f[tri[1]] * l[1] + f[tri[2]] * l[2];
            let d = l[0] * dv[tri[0]] + l[1] * dv[tri[1]] + l[2] * dv[tri[2]];
            let e = ((u1.phase.value(z) + u2.phase.value(z).conj()) / h).exp();
            acc += lerp(w1) * lerp(w2).conj() * e * (w * (2.0 * lambda.at(mesh, t, l)).exp() * d);
        }
    }
    acc
}

/// Volume side `∫ u₁ (V₁ - V₂) ū₂ dv_g` for the potential difference `dv`.
pub fn volume_pairing(mesh: &TriangleMesh, lambda: &ConformalFactor, u1: &CgoSolution, u2: &CgoSolution, dv: &[f64]) -> Complex64 {
    volume_quadrature(mesh, lambda, u1, u2, &u1.total_amplitude(), &u2.total_amplitude(), dv)
}

/// `∫ e^{2iψ/h}(ā r₁¹ + a r̄₁²)(V₁ - V₂) dv_g`, the first-order correction
/// that must be `o(h)`.
pub fn correction_term(mesh: &TriangleMesh, lambda: &ConformalFactor, u1: &CgoSolution, u2: &CgoSolution, dv: &[f64]) -> Complex64 {
    let r1 = |u: &CgoSolution| -> Vec<Complex64> { (0..u.r11.len()).map(|i| u.r11[i] + u.r12[i]).collect() };
    let (r1a, r1b) = (r1(u1), r1(u2));
    let first = volume_quadrature(mesh, lambda, u1, u2, &r1a, &u2.amplitude, dv);
    let second = volume_quadrature(mesh, lambda, u1, u2, &u1.amplitude, &r1b, dv);
    first + second
}
