use crate::geometry::{triangle_points, Point, TriangleMesh};
use crate::holomorphic::cz;
use crate::par::{map_slice, ExecPolicy};
use num_complex::Complex64;

/// Triangles within this many `h_mesh` of the evaluation point are
/// integrated exactly against the P1 interpolant.
pub const NEAR_FIELD: f64 = 2.5;

/// `∫_T f(ξ) / (z - ξ) dA(ξ)` for `f` linear on `T`, in closed form.
pub fn triangle_kernel_exact(corners: [Point; 3], vals: [Complex64; 3], grad: [[f64; 2]; 3], z: Complex64) -> Complex64 {
    let fx: Complex64 = (0..3).map(|k| vals[k] * grad[k][0]).sum();
    let fy: Complex64 = (0..3).map(|k| vals[k] * grad[k][1]).sum();
    let beta = (fx - Complex64::i() * fy) * 0.5;
    let gamma = (fx + Complex64::i() * fy) * 0.5;
    let a0 = corners[0];
    let fz = vals[0] + fx * (z.re - a0[0]) + fy * (z.im - a0[1]);
    let mut s1 = Complex64::new(0.0, 0.0);
    let mut s2 = Complex64::new(0.0, 0.0);
    for k in 0..3 {
        let wa = cz(corners[k]) - z;
        let wb = cz(corners[(k + 1) % 3]) - z;
        let d = wb - wa;
        // on the edge, conj(w) = a + b w
        let b = d.conj() / d;
        let a = wa.conj() - b * wa;
        let log = if a.norm() > 1e-14 * d.norm() && wa.norm() > 0.0 && wb.norm() > 0.0 {
            (wb / wa).ln()
        } else {
            Complex64::new(0.0, 0.0)
        };
        s1 += a * log + b * d;
        s2 += a * a * 0.5 * log + a * b * d + b * b * 0.25 * (wb * wb - wa * wa);
    }
    let half_i = Complex64::new(0.0, 2.0);
    let int_inv_w = s1 / half_i;
    let int_conj_ratio = s2 / half_i;
    let area = 0.5 * ((corners[1][0] - a0[0]) * (corners[2][1] - a0[1]) - (corners[1][1] - a0[1]) * (corners[2][0] - a0[0]));
    -fz * int_inv_w - beta * area - gamma * int_conj_ratio
}

/// Precomputed geometry for repeated Cauchy-type integrals over a mesh.
pub struct CauchyIntegrator<'a> {
    mesh: &'a TriangleMesh,
    quad: Vec<[(Complex64, f64); 6]>,
    grads: Vec<[[f64; 2]; 3]>,
    centroids: Vec<Complex64>,
}

impl<'a> CauchyIntegrator<'a> {
    pub fn new(mesh: &'a TriangleMesh) -> Self {
        let quad = (0..mesh.n_triangles())
            .map(|t| {
                let q = triangle_points(mesh, t);
                std::array::from_fn(|k| (cz(q[k].0), q[k].2))
            })
            .collect();
        let grads = (0..mesh.n_triangles()).map(|t| mesh.basis_gradients(t)).collect();
        let centroids = (0..mesh.n_triangles()).map(|t| cz(mesh.centroid(t))).collect();
        CauchyIntegrator { mesh, quad, grads, centroids }
    }

    /// `∫ f(ξ) / (z - ξ) dA(ξ)` at each point for a nodal P1 field `f`.
    pub fn area_kernel(&self, f: &[Complex64], points: &[Point], policy: ExecPolicy) -> Vec<Complex64> {
        let mesh = self.mesh;
        let active: Vec<usize> = (0..mesh.n_triangles())
            .filter(|&t| mesh.triangles[t].iter().any(|&v| f[v] != Complex64::new(0.0, 0.0)))
            .collect();
        let near = NEAR_FIELD * mesh.h_mesh;
        // quadrature-point values of f
        let fq: Vec<[Complex64; 6]> = active
            .iter()
            .map(|&t| {
                let tri = mesh.triangles[t];
                let q = triangle_points(mesh, t);
                std::array::from_fn(|k| {
                    let l = q[k].1;
                    f[tri[0]] * l[0] + f[tri[1]] * l[1] + f[tri[2]] * l[2]
                })
            })
            .collect();
        map_slice(policy, points, |&p| {
            let z = cz(p);
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &t) in active.iter().enumerate() {
                if (self.centroids[t] - z).norm() < near {
                    let tri = mesh.triangles[t];
                    acc += triangle_kernel_exact(mesh.corners(t), [f[tri[0]], f[tri[1]], f[tri[2]]], self.grads[t], z);
                } else {
                    for (q, &(xi, w)) in self.quad[t].iter().enumerate() {
                        acc += fq[k][q] * w / (z - xi);
                    }
                }
            }
            acc
        })
    }

    /// Cauchy transform `R f(z) = ∫ f(ξ)/(z-ξ) dξ∧dξ̄`, with `dξ∧dξ̄ = -2i dA`.
    /// Satisfies `∂̄(R f) = -2πi f`.
    pub fn cauchy_transform(&self, f: &[Complex64], points: &[Point], policy: ExecPolicy) -> Vec<Complex64> {
        self.area_kernel(f, points, policy).into_iter().map(|v| v * Complex64::new(0.0, -2.0)).collect()
    }

    /// `T f(z) = (1/π) ∫ f(ξ)/(z̄-ξ̄) dA(ξ)`, a right inverse of `∂ = ∂/∂z`.
    pub fn d_inverse(&self, f: &[Complex64], points: &[Point], policy: ExecPolicy) -> Vec<Complex64> {
        let fc: Vec<Complex64> = f.iter().map(|v| v.conj()).collect();
        self.area_kernel(&fc, points, policy)
            .into_iter()
            .map(|v| v.conj() / std::f64::consts::PI)
            .collect()
    }
}
