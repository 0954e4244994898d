use super::domain::Point;
use super::mesh::TriangleMesh;
use crate::linalg::Field;

/// Six-point degree-4 rule on the reference triangle; weights sum to one.
pub struct QuadRule {
    pub bary: [[f64; 3]; 6],
    pub weights: [f64; 6],
}

const A1: f64 = 0.445948490915965;
const W1: f64 = 0.223381589678011;
const A2: f64 = 0.091576213509771;
const W2: f64 = 0.109951743655322;

pub const DUNAVANT6: QuadRule = QuadRule {
    bary: [
        [A1, A1, 1.0 - 2.0 * A1],
        [A1, 1.0 - 2.0 * A1, A1],
        [1.0 - 2.0 * A1, A1, A1],
        [A2, A2, 1.0 - 2.0 * A2],
        [A2, 1.0 - 2.0 * A2, A2],
        [1.0 - 2.0 * A2, A2, A2],
    ],
    weights: [W1, W1, W1, W2, W2, W2],
};

/// Conformal factor λ of the metric `e^{2λ}|dz|^2`, stored nodally and
/// evaluated by P1 interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalFactor {
    pub values: Vec<f64>,
}

impl ConformalFactor {
    pub fn flat(mesh: &TriangleMesh) -> Self {
        ConformalFactor { values: vec![0.0; mesh.n_nodes()] }
    }

    pub fn from_fn(mesh: &TriangleMesh, f: impl Fn(Point) -> f64) -> Self {
        ConformalFactor { values: mesh.nodal(f) }
    }

    pub fn at(&self, mesh: &TriangleMesh, t: usize, bary: [f64; 3]) -> f64 {
        let tri = mesh.triangles[t];
        (0..3).map(|k| bary[k] * self.values[tri[k]]).sum()
    }

    pub fn is_flat(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }
}

/// Quadrature points of triangle `t`: `(point, barycentric, weight * area)`.
pub fn triangle_points(mesh: &TriangleMesh, t: usize) -> [(Point, [f64; 3], f64); 6] {
    let c = mesh.corners(t);
    let area = mesh.area(t);
    std::array::from_fn(|q| {
        let l = DUNAVANT6.bary[q];
        let p = [
            l[0] * c[0][0] + l[1] * c[1][0] + l[2] * c[2][0],
            l[0] * c[0][1] + l[1] * c[1][1] + l[2] * c[2][1],
        ];
        (p, l, DUNAVANT6.weights[q] * area)
    })
}

/// `∫ f e^{2λ} dx dy` over the mesh.
pub fn integrate_fn<T: Field>(mesh: &TriangleMesh, lambda: &ConformalFactor, f: impl Fn(Point) -> T) -> T {
    let mut acc = T::zero();
    for t in 0..mesh.n_triangles() {
        for (p, l, w) in triangle_points(mesh, t) {
            let g = (2.0 * lambda.at(mesh, t, l)).exp();
            acc += f(p) * (w * g);
        }
    }
    acc
}

/// `∫ u e^{2λ} dx dy` for a nodal P1 field `u`.
pub fn integrate_nodal<T: Field>(mesh: &TriangleMesh, lambda: &ConformalFactor, u: &[T]) -> T {
    let mut acc = T::zero();
    for t in 0..mesh.n_triangles() {
        let tri = mesh.triangles[t];
        for (_, l, w) in triangle_points(mesh, t) {
            let g = (2.0 * lambda.at(mesh, t, l)).exp();
            let v = u[tri[0]] * l[0] + u[tri[1]] * l[1] + u[tri[2]] * l[2];
            acc += v * (w * g);
        }
    }
    acc
}
