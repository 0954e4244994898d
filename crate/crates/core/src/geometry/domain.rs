use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub type Point = [f64; 2];

/// A closed boundary curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Curve {
    Circle { center: Point, radius: f64 },
    /// Closed polygon; the closing edge is implicit.
    Polygon { points: Vec<Point> },
}

fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn seg_dist(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let l2 = dx * dx + dy * dy;
    let t = if l2 > 0.0 { (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / l2).clamp(0.0, 1.0) } else { 0.0 };
    dist(p, [a[0] + t * dx, a[1] + t * dy])
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}

impl Curve {
    pub fn circle(center: Point, radius: f64) -> Self {
        Curve::Circle { center, radius }
    }

    pub fn polygon(points: Vec<Point>) -> Self {
        Curve::Polygon { points }
    }

    fn signed_area(points: &[Point]) -> f64 {
        let n = points.len();
        (0..n)
            .map(|i| {
                let (a, b) = (points[i], points[(i + 1) % n]);
                a[0] * b[1] - b[0] * a[1]
            })
            .sum::<f64>()
            / 2.0
    }

    pub fn length(&self) -> f64 {
        match self {
            Curve::Circle { radius, .. } => 2.0 * PI * radius,
            Curve::Polygon { points } => {
                let n = points.len();
                (0..n).map(|i| dist(points[i], points[(i + 1) % n])).sum()
            }
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            Curve::Circle { radius, .. } => PI * radius * radius,
            Curve::Polygon { points } => Self::signed_area(points).abs(),
        }
    }

    /// Points along the curve, counter-clockwise, spacing at most `spacing`.
    pub fn sample(&self, spacing: f64) -> Vec<Point> {
        match self {
            Curve::Circle { center, radius } => {
                let n = ((2.0 * PI * radius / spacing).ceil() as usize).max(8);
                (0..n)
                    .map(|k| {
                        let t = 2.0 * PI * k as f64 / n as f64;
                        [center[0] + radius * t.cos(), center[1] + radius * t.sin()]
                    })
                    .collect()
            }
            Curve::Polygon { points } => {
                let mut pts: Vec<Point> = points.clone();
                if Self::signed_area(&pts) < 0.0 {
                    pts.reverse();
                }
                let n = pts.len();
                let mut out = Vec::new();
                for i in 0..n {
                    let (a, b) = (pts[i], pts[(i + 1) % n]);
                    let m = ((dist(a, b) / spacing).ceil() as usize).max(1);
                    for k in 0..m {
                        let t = k as f64 / m as f64;
                        out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
                    }
                }
                out
            }
        }
    }

    /// Strict interior test.
    pub fn contains(&self, p: Point) -> bool {
        match self {
            Curve::Circle { center, radius } => dist(p, *center) < *radius,
            Curve::Polygon { points } => {
                let n = points.len();
                let mut inside = false;
                for i in 0..n {
                    let (a, b) = (points[i], points[(i + 1) % n]);
                    if (a[1] > p[1]) != (b[1] > p[1]) {
                        let x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
                        if p[0] < x {
                            inside = !inside;
                        }
                    }
                }
                inside
            }
        }
    }

    pub fn distance(&self, p: Point) -> f64 {
        match self {
            Curve::Circle { center, radius } => (dist(p, *center) - radius).abs(),
            Curve::Polygon { points } => {
                let n = points.len();
                (0..n).map(|i| seg_dist(p, points[i], points[(i + 1) % n])).fold(f64::INFINITY, f64::min)
            }
        }
    }

    pub fn bbox(&self) -> [f64; 4] {
        match self {
            Curve::Circle { center, radius } => {
                [center[0] - radius, center[1] - radius, center[0] + radius, center[1] + radius]
            }
            Curve::Polygon { points } => points.iter().fold(
                [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY],
                |b, p| [b[0].min(p[0]), b[1].min(p[1]), b[2].max(p[0]), b[3].max(p[1])],
            ),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Curve::Circle { radius, center } => {
                if !(radius.is_finite() && *radius > 0.0 && center.iter().all(|c| c.is_finite())) {
                    return Err(Error::DegenerateDomain(format!("circle radius {radius}")));
                }
            }
            Curve::Polygon { points } => {
                let n = points.len();
                if n < 3 || Self::signed_area(points).abs() < 1e-14 {
                    return Err(Error::DegenerateDomain("polygon needs three non-collinear vertices".into()));
                }
                for i in 0..n {
                    for j in i + 1..n {
                        let (a, b) = (points[i], points[(i + 1) % n]);
                        let (c, d) = (points[j], points[(j + 1) % n]);
                        if segments_cross(a, b, c, d) {
                            return Err(Error::DegenerateDomain(format!(
                                "polygon edges {i} and {j} intersect"
                            )));
                        }
                    }
                    if dist(points[i], points[(i + 1) % n]) == 0.0 {
                        return Err(Error::DegenerateDomain(format!("repeated polygon vertex {i}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Rough width of the region bounded by the curve.
    fn width(&self) -> f64 {
        match self {
            Curve::Circle { radius, .. } => 2.0 * radius,
            Curve::Polygon { .. } => 4.0 * self.area() / self.length(),
        }
    }
}

/// Bounded planar region: outer curve minus the closures of the holes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarDomain {
    pub outer: Curve,
    #[serde(default)]
    pub holes: Vec<Curve>,
    /// Point outside the closed domain used as the pole of meromorphic data.
    #[serde(default)]
    pub exterior: Option<Point>,
}

impl PlanarDomain {
    pub fn new(outer: Curve, holes: Vec<Curve>) -> Result<Self> {
        let d = PlanarDomain { outer, holes, exterior: None };
        d.validate()?;
        Ok(d)
    }

    pub fn unit_disk() -> Self {
        PlanarDomain { outer: Curve::circle([0.0, 0.0], 1.0), holes: vec![], exterior: None }
    }

    pub fn annulus(inner: f64, outer: f64) -> Result<Self> {
        Self::new(Curve::circle([0.0, 0.0], outer), vec![Curve::circle([0.0, 0.0], inner)])
    }

    pub fn validate(&self) -> Result<()> {
        self.outer.validate()?;
        let probe_spacing = self.feature_size() / 16.0;
        for (k, h) in self.holes.iter().enumerate() {
            h.validate()?;
            for p in h.sample(probe_spacing) {
                if !self.outer.contains(p) || self.outer.distance(p) < 1e-9 {
                    return Err(Error::DegenerateDomain(format!("hole {k} is not strictly inside the outer curve")));
                }
                for (j, g) in self.holes.iter().enumerate() {
                    if j != k && (g.contains(p) || g.distance(p) < 1e-9) {
                        return Err(Error::DegenerateDomain(format!("holes {j} and {k} overlap")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn curves(&self) -> impl Iterator<Item = &Curve> {
        std::iter::once(&self.outer).chain(self.holes.iter())
    }

    pub fn contains(&self, p: Point) -> bool {
        self.outer.contains(p) && !self.holes.iter().any(|h| h.contains(p) || h.distance(p) == 0.0)
    }

    pub fn distance_to_boundary(&self, p: Point) -> f64 {
        self.curves().map(|c| c.distance(p)).fold(f64::INFINITY, f64::min)
    }

    pub fn bbox(&self) -> [f64; 4] {
        self.outer.bbox()
    }

    pub fn diameter(&self) -> f64 {
        let b = self.bbox();
        (b[2] - b[0]).hypot(b[3] - b[1])
    }

    pub fn area(&self) -> f64 {
        self.outer.area() - self.holes.iter().map(Curve::area).sum::<f64>()
    }

    /// Narrowest feature: smallest curve width or gap between curves.
    pub fn feature_size(&self) -> f64 {
        let mut f = self.outer.width();
        for h in &self.holes {
            f = f.min(h.width());
        }
        let curves: Vec<&Curve> = self.curves().collect();
        for i in 0..curves.len() {
            let samples = curves[i].sample(f / 64.0);
            for (j, other) in curves.iter().enumerate() {
                if j != i {
                    let g = samples.iter().map(|&p| other.distance(p)).fold(f64::INFINITY, f64::min);
                    f = f.min(g);
                }
            }
        }
        f
    }

    /// The configured exterior point, or one at distance 1 from the bounding box.
    pub fn exterior_point(&self) -> Point {
        self.exterior.unwrap_or_else(|| {
            let b = self.bbox();
            [b[2] + 1.0, 0.5 * (b[1] + b[3])]
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polygon_orientation_and_containment() {
        let sq = Curve::polygon(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]]);
        let s = sq.sample(0.25);
        assert_eq!(s.len(), 16);
        assert!(Curve::signed_area(&s) > 0.0);
        assert!(sq.contains([0.5, 0.5]));
        assert!(!sq.contains([1.5, 0.5]));
        assert!((sq.distance([0.5, 0.2]) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn self_intersecting_polygon_rejected() {
        let bow = Curve::polygon(vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]]);
        assert!(PlanarDomain::new(bow, vec![]).is_err());
    }

    #[test]
    fn annulus_feature_size() {
        let d = PlanarDomain::annulus(0.3, 1.0).unwrap();
        assert!((d.feature_size() - 0.6).abs() < 1e-9);
        assert!(d.contains([0.5, 0.0]));
        assert!(!d.contains([0.1, 0.0]));
        assert!((d.area() - PI * 0.91).abs() < 1e-12);
        assert!(PlanarDomain::annulus(1.2, 1.0).is_err());
    }
}
