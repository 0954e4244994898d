use super::domain::{PlanarDomain, Point};
use crate::{Error, Result};
use spade::{ConstrainedDelaunayTriangulation, Point2, Triangulation};
use std::collections::HashMap;
use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub nodes: [usize; 2],
    pub component: usize,
}

/// Conforming P1 triangulation. Nodes `0..n_boundary` lie on the boundary,
/// grouped by component in arclength order (outer curve counter-clockwise,
/// holes clockwise, so the domain is always on the left of a boundary edge).
#[derive(Debug, Clone)]
pub struct TriangleMesh {
    pub vertices: Vec<Point>,
    /// Counter-clockwise vertex triples.
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<BoundaryEdge>,
    pub components: Vec<Range<usize>>,
    pub n_boundary: usize,
    pub h_mesh: f64,
    pub target_h: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct MeshOptions {
    /// Boundary sample spacing as a fraction of `target_h`.
    pub boundary_spacing: f64,
    /// Lattice points closer than this multiple of `target_h` to the boundary are dropped.
    pub lattice_trim: f64,
    /// Smoothing is applied to nodes within this multiple of `target_h` of the boundary.
    pub smoothing_band: f64,
    pub smoothing_rounds: usize,
    pub min_angle_deg: f64,
}

impl Default for MeshOptions {
    fn default() -> Self {
        MeshOptions {
            boundary_spacing: 0.8,
            lattice_trim: 0.6,
            smoothing_band: 2.5,
            smoothing_rounds: 3,
            min_angle_deg: 20.0,
        }
    }
}

pub fn generate_mesh(domain: &PlanarDomain, target_h: f64) -> Result<TriangleMesh> {
    generate_mesh_with(domain, target_h, &MeshOptions::default())
}

pub fn generate_mesh_with(domain: &PlanarDomain, target_h: f64, opts: &MeshOptions) -> Result<TriangleMesh> {
    if !(target_h.is_finite() && target_h > 0.0) {
        return Err(Error::InvalidInput(format!("target_h must be positive, got {target_h}")));
    }
    domain.validate()?;
    let feature = domain.feature_size();
    if target_h > feature / 3.0 {
        return Err(Error::InvalidInput(format!(
            "target_h {target_h} too coarse for the narrowest feature {feature:.4}"
        )));
    }

    let mut points: Vec<Point> = Vec::new();
    let mut components = Vec::new();
    let mut edges: Vec<[usize; 2]> = Vec::new();
    for (c, curve) in domain.curves().enumerate() {
        let mut s = curve.sample(opts.boundary_spacing * target_h);
        if c > 0 {
            s.reverse();
        }
        let start = points.len();
        let m = s.len();
        points.extend(s);
        for k in 0..m {
            edges.push([start + k, start + (k + 1) % m]);
        }
        components.push(start..start + m);
    }
    let n_boundary = points.len();

    let b = domain.bbox();
    let dy = target_h * 3f64.sqrt() / 2.0;
    let j0 = (b[1] / dy).floor() as i64 - 1;
    let j1 = (b[3] / dy).ceil() as i64 + 1;
    let i0 = (b[0] / target_h).floor() as i64 - 1;
    let i1 = (b[2] / target_h).ceil() as i64 + 1;
    for j in j0..=j1 {
        let shift = if j.rem_euclid(2) == 1 { 0.5 * target_h } else { 0.0 };
        for i in i0..=i1 {
            let p = [i as f64 * target_h + shift, j as f64 * dy];
            if domain.contains(p) && domain.distance_to_boundary(p) >= opts.lattice_trim * target_h {
                points.push(p);
            }
        }
    }

    let near: Vec<bool> = points
        .iter()
        .enumerate()
        .map(|(k, &p)| k >= n_boundary && domain.distance_to_boundary(p) < opts.smoothing_band * target_h)
        .collect();

    let mut triangles = triangulate(domain, &points, &edges)?;
    for _ in 0..opts.smoothing_rounds {
        smooth(&mut points, &triangles, &near);
        triangles = triangulate(domain, &points, &edges)?;
    }

    let mut used = vec![false; points.len()];
    for t in &triangles {
        for &v in t {
            used[v] = true;
        }
    }
    if used.iter().any(|u| !u) {
        return Err(Error::MeshQuality("triangulation left isolated vertices".into()));
    }

    let mut boundary_edges = Vec::with_capacity(edges.len());
    for (c, r) in components.iter().enumerate() {
        for k in r.clone() {
            let next = if k + 1 == r.end { r.start } else { k + 1 };
            boundary_edges.push(BoundaryEdge { nodes: [k, next], component: c });
        }
    }

    let mut mesh = TriangleMesh {
        vertices: points,
        triangles,
        boundary_edges,
        components,
        n_boundary,
        h_mesh: 0.0,
        target_h,
    };
    mesh.h_mesh = mesh.max_edge_length();
    mesh.check_quality(opts.min_angle_deg)?;
    if mesh.h_mesh > 1.5 * target_h {
        return Err(Error::MeshQuality(format!("h_mesh {} exceeds 1.5 target_h", mesh.h_mesh)));
    }
    Ok(mesh)
}

fn triangulate(domain: &PlanarDomain, points: &[Point], edges: &[[usize; 2]]) -> Result<Vec<[usize; 3]>> {
    let verts: Vec<Point2<f64>> = points.iter().map(|p| Point2::new(p[0], p[1])).collect();
    let cdt = ConstrainedDelaunayTriangulation::<Point2<f64>>::bulk_load_cdt(verts, edges.to_vec())
        .map_err(|e| Error::DegenerateDomain(format!("triangulation failed: {e:?}")))?;
    if cdt.num_vertices() != points.len() {
        return Err(Error::DegenerateDomain("duplicate mesh vertices".into()));
    }
    let lookup: HashMap<(u64, u64), usize> =
        points.iter().enumerate().map(|(i, p)| ((p[0].to_bits(), p[1].to_bits()), i)).collect();
    let mut tris = Vec::with_capacity(cdt.num_inner_faces());
    for face in cdt.inner_faces() {
        let vs = face.vertices();
        let mut idx = [0usize; 3];
        for (k, v) in vs.iter().enumerate() {
            let p = v.position();
            idx[k] = lookup[&(p.x.to_bits(), p.y.to_bits())];
        }
        let (a, b, c) = (points[idx[0]], points[idx[1]], points[idx[2]]);
        let centroid = [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0];
        if !domain.contains(centroid) {
            continue;
        }
        if signed_area(a, b, c) < 0.0 {
            idx.swap(1, 2);
        }
        tris.push(idx);
    }
    tris.sort_unstable();
    Ok(tris)
}

fn smooth(points: &mut [Point], triangles: &[[usize; 3]], movable: &[bool]) {
    let n = points.len();
    let mut sum = vec![[0.0f64; 2]; n];
    let mut cnt = vec![0usize; n];
    for t in triangles {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            for (u, v) in [(a, b), (b, a)] {
                sum[u][0] += points[v][0];
                sum[u][1] += points[v][1];
                cnt[u] += 1;
            }
        }
    }
    let old = points.to_vec();
    for i in 0..n {
        if movable[i] && cnt[i] > 0 {
            points[i] = [sum[i][0] / cnt[i] as f64, sum[i][1] / cnt[i] as f64];
        }
    }
    let inverted = triangles.iter().any(|t| signed_area(points[t[0]], points[t[1]], points[t[2]]) <= 0.0);
    if inverted {
        points.copy_from_slice(&old);
    }
}

pub(crate) fn signed_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
}

impl TriangleMesh {
    pub fn n_nodes(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn boundary_idx(&self) -> Vec<usize> {
        (0..self.n_boundary).collect()
    }

    pub fn interior_idx(&self) -> Vec<usize> {
        (self.n_boundary..self.n_nodes()).collect()
    }

    pub fn is_boundary(&self, i: usize) -> bool {
        i < self.n_boundary
    }

    pub fn component_of(&self, i: usize) -> Option<usize> {
        self.components.iter().position(|r| r.contains(&i))
    }

    pub fn corners(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn area(&self, t: usize) -> f64 {
        let [a, b, c] = self.corners(t);
        signed_area(a, b, c)
    }

    pub fn centroid(&self, t: usize) -> Point {
        let [a, b, c] = self.corners(t);
        [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0]
    }

    pub fn total_area(&self) -> f64 {
        (0..self.n_triangles()).map(|t| self.area(t)).sum()
    }

    /// Gradients of the three barycentric coordinates on triangle `t`.
    pub fn basis_gradients(&self, t: usize) -> [[f64; 2]; 3] {
        let [a, b, c] = self.corners(t);
        let two_a = 2.0 * signed_area(a, b, c);
        [
            [(b[1] - c[1]) / two_a, (c[0] - b[0]) / two_a],
            [(c[1] - a[1]) / two_a, (a[0] - c[0]) / two_a],
            [(a[1] - b[1]) / two_a, (b[0] - a[0]) / two_a],
        ]
    }

    pub fn max_edge_length(&self) -> f64 {
        let mut h: f64 = 0.0;
        for t in 0..self.n_triangles() {
            let p = self.corners(t);
            for k in 0..3 {
                let (u, v) = (p[k], p[(k + 1) % 3]);
                h = h.max((u[0] - v[0]).hypot(u[1] - v[1]));
            }
        }
        h
    }

    pub fn min_angle_deg(&self) -> f64 {
        let mut m = f64::INFINITY;
        for t in 0..self.n_triangles() {
            let p = self.corners(t);
            for k in 0..3 {
                let (a, b, c) = (p[k], p[(k + 1) % 3], p[(k + 2) % 3]);
                let u = [b[0] - a[0], b[1] - a[1]];
                let v = [c[0] - a[0], c[1] - a[1]];
                let cos = (u[0] * v[0] + u[1] * v[1]) / (u[0].hypot(u[1]) * v[0].hypot(v[1]));
                m = m.min(cos.clamp(-1.0, 1.0).acos().to_degrees());
            }
        }
        m
    }

    fn check_quality(&self, min_angle: f64) -> Result<()> {
        for t in 0..self.n_triangles() {
            if self.area(t) <= 0.0 {
                return Err(Error::MeshQuality(format!("triangle {t} has non-positive area")));
            }
        }
        let a = self.min_angle_deg();
        if a < min_angle {
            return Err(Error::MeshQuality(format!("minimum angle {a:.2} deg below {min_angle}")));
        }
        Ok(())
    }

    /// Sorted neighbor lists (excluding the node itself).
    pub fn node_neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n_nodes()];
        for t in &self.triangles {
            for k in 0..3 {
                adj[t[k]].push(t[(k + 1) % 3]);
                adj[t[k]].push(t[(k + 2) % 3]);
            }
        }
        for l in adj.iter_mut() {
            l.sort_unstable();
            l.dedup();
        }
        adj
    }

    pub fn node_triangles(&self) -> Vec<Vec<usize>> {
        let mut nt = vec![Vec::new(); self.n_nodes()];
        for (t, tri) in self.triangles.iter().enumerate() {
            for &v in tri {
                nt[v].push(t);
            }
        }
        nt
    }

    /// Graph distance from the boundary: 0 on boundary nodes, 1 on their
    /// interior neighbours, and so on.
    pub fn boundary_layers(&self) -> Vec<usize> {
        let adj = self.node_neighbors();
        let mut layer = vec![usize::MAX; self.n_nodes()];
        let mut frontier: Vec<usize> = self.boundary_idx();
        for &b in &frontier {
            layer[b] = 0;
        }
        let mut depth = 0;
        while !frontier.is_empty() {
            depth += 1;
            let mut next = Vec::new();
            for &v in &frontier {
                for &w in &adj[v] {
                    if layer[w] == usize::MAX {
                        layer[w] = depth;
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        layer
    }

    /// Interpolate a nodal field to all nodes from a pointwise function.
    pub fn nodal<T>(&self, f: impl Fn(Point) -> T) -> Vec<T> {
        self.vertices.iter().map(|&p| f(p)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Curve;

    #[test]
    fn disk_mesh_invariants() {
        let d = PlanarDomain::unit_disk();
        let m = generate_mesh(&d, 0.1).unwrap();
        assert!(m.n_triangles() >= 400 && m.n_triangles() <= 800, "{}", m.n_triangles());
        assert!(m.min_angle_deg() >= 20.0);
        assert!(m.h_mesh <= 0.15);
        assert_eq!(m.components.len(), 1);
        for e in &m.boundary_edges {
            assert!(e.nodes.iter().all(|&v| v < m.n_boundary));
        }
    }

    #[test]
    fn annulus_has_two_components() {
        let d = PlanarDomain::annulus(0.3, 1.0).unwrap();
        let m = generate_mesh(&d, 0.1).unwrap();
        assert_eq!(m.components.len(), 2);
        let comps: std::collections::BTreeSet<usize> = m.boundary_edges.iter().map(|e| e.component).collect();
        assert_eq!(comps.len(), 2);
        assert!(m.min_angle_deg() >= 20.0);
    }

    #[test]
    fn coarse_target_rejected() {
        assert!(matches!(generate_mesh(&PlanarDomain::unit_disk(), 10.0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn polygon_with_hole() {
        let outer = Curve::polygon(vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]]);
        let hole = Curve::polygon(vec![[-0.3, -0.2], [0.3, -0.2], [0.0, 0.3]]);
        let d = PlanarDomain::new(outer, vec![hole]).unwrap();
        let m = generate_mesh(&d, 0.08).unwrap();
        assert!((m.total_area() - d.area()).abs() < 1e-12);
        assert!(m.min_angle_deg() >= 20.0);
    }
}
