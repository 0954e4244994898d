use crate::geometry::{triangle_points, ConformalFactor, PlanarDomain, Point, TriangleMesh};
use crate::linalg::{CsrMatrix, EnvelopeLdl, TripletBuilder};
use crate::{Error, Result};
use std::sync::{Arc, OnceLock};

/// Quintic step: 0 for `t <= 0`, 1 for `t >= 1`, C² in between.
pub fn smoothstep5(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)
}

/// Derivative of [`smoothstep5`].
pub fn smoothstep5_prime(t: f64) -> f64 {
    if !(0.0..=1.0).contains(&t) {
        return 0.0;
    }
    30.0 * t * t * (1.0 - t) * (1.0 - t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub center: Point,
    pub amplitude: f64,
    pub width: f64,
}

/// Nodal potential.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialField {
    pub values: Vec<f64>,
    pub support_margin: f64,
}

impl PotentialField {
    pub fn zero(mesh: &TriangleMesh) -> Self {
        PotentialField { values: vec![0.0; mesh.n_nodes()], support_margin: 0.0 }
    }

    pub fn constant(mesh: &TriangleMesh, c: f64) -> Self {
        PotentialField { values: vec![c; mesh.n_nodes()], support_margin: 0.0 }
    }

    pub fn from_fn(mesh: &TriangleMesh, f: impl Fn(Point) -> f64) -> Self {
        PotentialField { values: mesh.nodal(f), support_margin: 0.0 }
    }

    pub fn from_values(values: Vec<f64>) -> Self {
        PotentialField { values, support_margin: 0.0 }
    }

    /// Sum of Gaussian bumps times a collar cutoff that vanishes within
    /// `margin` of the boundary and is one beyond `2 margin`.
    pub fn bumps(mesh: &TriangleMesh, domain: &PlanarDomain, bumps: &[Bump], margin: f64) -> Self {
        let values = mesh.nodal(|p| bump_value(domain, bumps, margin, p));
        PotentialField { values, support_margin: margin }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }
}

/// Pointwise value of [`PotentialField::bumps`].
pub fn bump_value(domain: &PlanarDomain, bumps: &[Bump], margin: f64, p: Point) -> f64 {
    let raw: f64 = bumps
        .iter()
        .map(|b| {
            let r2 = (p[0] - b.center[0]).powi(2) + (p[1] - b.center[1]).powi(2);
            b.amplitude * (-r2 / (2.0 * b.width * b.width)).exp()
        })
        .sum();
    raw * collar(domain, margin, p)
}

pub fn collar(domain: &PlanarDomain, margin: f64, p: Point) -> f64 {
    if margin <= 0.0 {
        return 1.0;
    }
    smoothstep5((domain.distance_to_boundary(p) - margin) / margin)
}

/// `K = A + M_gV` with its node partition and a cached interior factorization.
#[derive(Debug)]
pub struct DiscreteOperator {
    pub stiffness: CsrMatrix,
    pub mass: CsrMatrix,
    pub potential_mass: CsrMatrix,
    pub system: CsrMatrix,
    /// Row sums of `M_g`.
    pub lumped: Vec<f64>,
    pub n_boundary: usize,
    pub k_ii: CsrMatrix,
    pub k_ib: CsrMatrix,
    pub k_bi: CsrMatrix,
    pub k_bb: CsrMatrix,
    factor: OnceLock<std::result::Result<Arc<EnvelopeLdl>, String>>,
}

pub fn assemble(mesh: &TriangleMesh, lambda: &ConformalFactor, v: &PotentialField) -> DiscreteOperator {
    let n = mesh.n_nodes();
    assert_eq!(lambda.values.len(), n, "conformal factor length");
    assert_eq!(v.values.len(), n, "potential length");
    let cap = 9 * mesh.n_triangles();
    let mut a = TripletBuilder::with_capacity(n, n, cap);
    let mut m = TripletBuilder::with_capacity(n, n, cap);
    let mut mv = TripletBuilder::with_capacity(n, n, cap);
    for t in 0..mesh.n_triangles() {
        let tri = mesh.triangles[t];
        let g = mesh.basis_gradients(t);
        let area = mesh.area(t);
        let mut me = [[0.0f64; 3]; 3];
        let mut mve = [[0.0f64; 3]; 3];
        for (_, l, w) in triangle_points(mesh, t) {
            let e2l = (2.0 * lambda.at(mesh, t, l)).exp();
            let vq = l[0] * v.values[tri[0]] + l[1] * v.values[tri[1]] + l[2] * v.values[tri[2]];
            for i in 0..3 {
                for j in 0..3 {
                    let b = w * e2l * l[i] * l[j];
                    me[i][j] += b;
                    mve[i][j] += b * vq;
                }
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                a.push(tri[i], tri[j], area * (g[i][0] * g[j][0] + g[i][1] * g[j][1]));
                m.push(tri[i], tri[j], me[i][j]);
                mv.push(tri[i], tri[j], mve[i][j]);
            }
        }
    }
    let stiffness = a.build();
    let mass = m.build();
    let potential_mass = mv.build();
    let system = stiffness.add(&potential_mass, 1.0);
    let lumped = mass.row_sums();
    let nb = mesh.n_boundary;
    let bidx: Vec<usize> = (0..nb).collect();
    let iidx: Vec<usize> = (nb..n).collect();
    DiscreteOperator {
        k_ii: system.submatrix(&iidx, &iidx),
        k_ib: system.submatrix(&iidx, &bidx),
        k_bi: system.submatrix(&bidx, &iidx),
        k_bb: system.submatrix(&bidx, &bidx),
        stiffness,
        mass,
        potential_mass,
        system,
        lumped,
        n_boundary: nb,
        factor: OnceLock::new(),
    }
}

impl DiscreteOperator {
    pub fn n_nodes(&self) -> usize {
        self.system.n_rows
    }

    pub fn n_interior(&self) -> usize {
        self.n_nodes() - self.n_boundary
    }

    /// Factorization of the interior block, computed once. Fails when zero is
    /// (numerically) a Dirichlet eigenvalue.
    pub fn interior_factor(&self) -> Result<Arc<EnvelopeLdl>> {
        self.factor
            .get_or_init(|| {
                let f = EnvelopeLdl::factor(&self.k_ii).map_err(|e| e.to_string())?;
                let mu = smallest_eigen_probe(&self.k_ii, &self.mass_ii(), &f, 8);
                if mu.abs() < 1e-8 {
                    return Err(format!("smallest Dirichlet eigenvalue probe {mu:.3e}"));
                }
                Ok(Arc::new(f))
            })
            .clone()
            .map_err(Error::DirichletEigenvalue)
    }

    pub fn mass_ii(&self) -> CsrMatrix {
        let iidx: Vec<usize> = (self.n_boundary..self.n_nodes()).collect();
        self.mass.submatrix(&iidx, &iidx)
    }
}

/// Inverse iteration for the eigenvalue of `(k, m)` closest to zero.
pub fn smallest_eigen_probe(k: &CsrMatrix, m: &CsrMatrix, f: &EnvelopeLdl, iters: usize) -> f64 {
    let n = k.n_rows;
    if n == 0 {
        return f64::INFINITY;
    }
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64).collect();
    let mut mu = f64::INFINITY;
    for _ in 0..iters {
        let mx = m.mul_vec(&x);
        let y = f.solve(&mx);
        let my = m.mul_vec(&y);
        let ky = k.mul_vec(&y);
        let num: f64 = y.iter().zip(&ky).map(|(a, b)| a * b).sum();
        let den: f64 = y.iter().zip(&my).map(|(a, b)| a * b).sum();
        mu = num / den;
        let norm = den.sqrt();
        x = y.iter().map(|v| v / norm).collect();
    }
    mu
}
