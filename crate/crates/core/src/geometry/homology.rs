use super::domain::{Curve, PlanarDomain, Point};
use super::locate::Locator;
use super::mesh::TriangleMesh;
use crate::{Error, Result};

/// Closed polyline inside the domain encircling exactly one hole,
/// positively oriented.
#[derive(Debug, Clone, PartialEq)]
pub struct HomologyLoop {
    pub hole: usize,
    pub points: Vec<Point>,
}

impl HomologyLoop {
    pub fn winding_number(&self, p: Point) -> i64 {
        winding_number(&self.points, p)
    }
}

pub fn winding_number(poly: &[Point], p: Point) -> i64 {
    let n = poly.len();
    let mut total = 0.0;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let ta = (a[1] - p[1]).atan2(a[0] - p[0]);
        let tb = (b[1] - p[1]).atan2(b[0] - p[0]);
        let mut d = tb - ta;
        while d > std::f64::consts::PI {
            d -= 2.0 * std::f64::consts::PI;
        }
        while d < -std::f64::consts::PI {
            d += 2.0 * std::f64::consts::PI;
        }
        total += d;
    }
    (total / (2.0 * std::f64::consts::PI)).round() as i64
}

/// A point strictly inside the region bounded by `curve`.
pub fn interior_point(curve: &Curve) -> Point {
    match curve {
        Curve::Circle { center, .. } => *center,
        Curve::Polygon { points } => {
            let n = points.len() as f64;
            let c = [points.iter().map(|p| p[0]).sum::<f64>() / n, points.iter().map(|p| p[1]).sum::<f64>() / n];
            if curve.contains(c) {
                return c;
            }
            let b = curve.bbox();
            let mut best = c;
            let mut best_d = -1.0;
            for i in 1..32 {
                for j in 1..32 {
                    let p = [b[0] + (b[2] - b[0]) * i as f64 / 32.0, b[1] + (b[3] - b[1]) * j as f64 / 32.0];
                    if curve.contains(p) && curve.distance(p) > best_d {
                        best_d = curve.distance(p);
                        best = p;
                    }
                }
            }
            best
        }
    }
}

/// One loop per hole, offset from the hole into the domain by a fraction of
/// the gap to the other boundary curves.
pub fn homology_basis(domain: &PlanarDomain, mesh: &TriangleMesh) -> Result<Vec<HomologyLoop>> {
    let locator = Locator::new(mesh);
    let spacing = 0.5 * mesh.h_mesh;
    let mut loops = Vec::with_capacity(domain.holes.len());
    for (k, hole) in domain.holes.iter().enumerate() {
        let samples = hole.sample(spacing);
        let others: Vec<&Curve> =
            domain.curves().enumerate().filter(|(j, _)| *j != k + 1).map(|(_, c)| c).collect();
        let gap = samples
            .iter()
            .map(|&p| others.iter().map(|c| c.distance(p)).fold(f64::INFINITY, f64::min))
            .fold(f64::INFINITY, f64::min);
        let delta = 0.4 * gap;
        let points: Vec<Point> = match hole {
            Curve::Circle { center, radius } => Curve::circle(*center, radius + delta).sample(spacing),
            Curve::Polygon { .. } => {
                let n = samples.len();
                (0..n)
                    .map(|i| {
                        let (a, b) = (samples[(i + n - 1) % n], samples[(i + 1) % n]);
                        let (tx, ty) = (b[0] - a[0], b[1] - a[1]);
                        let l = tx.hypot(ty);
                        // counter-clockwise samples: outward normal of the hole is (ty, -tx)
                        [samples[i][0] + delta * ty / l, samples[i][1] - delta * tx / l]
                    })
                    .collect()
            }
        };
        for &p in &points {
            if !domain.contains(p) || locator.locate(mesh, p).is_none() {
                return Err(Error::Guard(format!("homology loop {k} leaves the domain at {p:?}")));
            }
        }
        loops.push(HomologyLoop { hole: k, points });
    }
    Ok(loops)
}

/// `W[i][j]` = winding number of loop `i` about hole `j`.
pub fn winding_matrix(domain: &PlanarDomain, loops: &[HomologyLoop]) -> Vec<Vec<i64>> {
    loops
        .iter()
        .map(|l| domain.holes.iter().map(|h| l.winding_number(interior_point(h))).collect())
        .collect()
}
