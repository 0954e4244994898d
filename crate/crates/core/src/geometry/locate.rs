use super::domain::Point;
use super::mesh::TriangleMesh;

/// Uniform bucket grid over triangle bounding boxes for point location.
#[derive(Debug, Clone)]
pub struct Locator {
    origin: Point,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<usize>>,
}

impl Locator {
    pub fn new(mesh: &TriangleMesh) -> Self {
        let mut bb = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
        for p in &mesh.vertices {
            bb = [bb[0].min(p[0]), bb[1].min(p[1]), bb[2].max(p[0]), bb[3].max(p[1])];
        }
        let cell = mesh.h_mesh.max(1e-12);
        let nx = (((bb[2] - bb[0]) / cell).ceil() as usize).max(1);
        let ny = (((bb[3] - bb[1]) / cell).ceil() as usize).max(1);
        let mut loc = Locator { origin: [bb[0], bb[1]], cell, nx, ny, buckets: vec![Vec::new(); nx * ny] };
        for t in 0..mesh.n_triangles() {
            let c = mesh.corners(t);
            let (x0, x1) = (c[0][0].min(c[1][0]).min(c[2][0]), c[0][0].max(c[1][0]).max(c[2][0]));
            let (y0, y1) = (c[0][1].min(c[1][1]).min(c[2][1]), c[0][1].max(c[1][1]).max(c[2][1]));
            let (i0, j0) = loc.cell_of([x0, y0]);
            let (i1, j1) = loc.cell_of([x1, y1]);
            for j in j0..=j1 {
                for i in i0..=i1 {
                    loc.buckets[j * nx + i].push(t);
                }
            }
        }
        loc
    }

    fn cell_of(&self, p: Point) -> (usize, usize) {
        let i = ((p[0] - self.origin[0]) / self.cell).floor().clamp(0.0, (self.nx - 1) as f64) as usize;
        let j = ((p[1] - self.origin[1]) / self.cell).floor().clamp(0.0, (self.ny - 1) as f64) as usize;
        (i, j)
    }

    /// Triangle containing `p` and its barycentric coordinates.
    pub fn locate(&self, mesh: &TriangleMesh, p: Point) -> Option<(usize, [f64; 3])> {
        let (i, j) = self.cell_of(p);
        let mut best: Option<(usize, [f64; 3], f64)> = None;
        for &t in &self.buckets[j * self.nx + i] {
            let l = barycentric(mesh, t, p);
            let worst = l.iter().fold(f64::INFINITY, |m, &v| m.min(v));
            if worst >= -1e-12 {
                return Some((t, l));
            }
            if best.map_or(true, |b| worst > b.2) {
                best = Some((t, l, worst));
            }
        }
        match best {
            Some((t, l, w)) if w >= -1e-9 => Some((t, l)),
            _ => None,
        }
    }

    /// P1 interpolation of a nodal field at `p`.
    pub fn interpolate<T: crate::linalg::Field>(&self, mesh: &TriangleMesh, u: &[T], p: Point) -> Option<T> {
        let (t, l) = self.locate(mesh, p)?;
        let tri = mesh.triangles[t];
        Some(u[tri[0]] * l[0] + u[tri[1]] * l[1] + u[tri[2]] * l[2])
    }
}

pub fn barycentric(mesh: &TriangleMesh, t: usize, p: Point) -> [f64; 3] {
    let [a, b, c] = mesh.corners(t);
    let det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    let l1 = ((p[0] - a[0]) * (c[1] - a[1]) - (p[1] - a[1]) * (c[0] - a[0])) / det;
    let l2 = ((b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])) / det;
    [1.0 - l1 - l2, l1, l2]
}
