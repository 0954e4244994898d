use super::point::GridReport;
use std::fmt::Write as _;

/// CSV `px,py,estimate,truth,rel_err,flag`.
pub fn reconstruction_csv(report: &GridReport) -> String {
    let mut s = String::from("px,py,estimate,truth,rel_err,flag\n");
    for p in &report.points {
        let (truth, rel) = match p.truth {
            Some(t) => {
                let rel = if t != 0.0 { (p.estimate - t).abs() / t.abs() } else { (p.estimate - t).abs() };
                (format!("{t:.10e}"), format!("{rel:.6e}"))
            }
            None => (String::new(), String::new()),
        };
        let flag = if p.flagged() { p.flags.join("; ").replace(',', " ") } else { String::new() };
        let _ = writeln!(s, "{:.6},{:.6},{:.10e},{truth},{rel},{flag}", p.p[0], p.p[1], p.estimate);
    }
    s
}

const PALETTE: [&str; 10] = [
    "#30123b", "#4145ab", "#4675ed", "#39a2fc", "#1bcfd4", "#24eca6", "#61fc6c", "#a4fc3b", "#d1e834", "#f3c63a",
];

/// 800×800 SVG with ten filled bands of the field interpolated between grid
/// points by inverse-distance weighting.
pub fn reconstruction_svg(report: &GridReport) -> String {
    const SIZE: usize = 800;
    const CELL: usize = 4;
    let pts: Vec<([f64; 2], f64)> = report.points.iter().map(|p| (p.p, p.estimate)).collect();
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#);
    if pts.is_empty() {
        s.push_str("</svg>\n");
        return s;
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (p, _) in &pts {
        x0 = x0.min(p[0]);
        x1 = x1.max(p[0]);
        y0 = y0.min(p[1]);
        y1 = y1.max(p[1]);
    }
    let pad = 0.05 * (x1 - x0).max(y1 - y0).max(1e-9);
    let (x0, x1, y0, y1) = (x0 - pad, x1 + pad, y0 - pad, y1 + pad);
    let lo = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let hi = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let band = |v: f64| -> usize {
        if hi > lo {
            (((v - lo) / (hi - lo) * 10.0).floor() as usize).min(9)
        } else {
            0
        }
    };
    let field = |x: f64, y: f64| -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for (p, v) in &pts {
            let d2 = (p[0] - x).powi(2) + (p[1] - y).powi(2);
            if d2 < 1e-24 {
                return *v;
            }
            let w = 1.0 / (d2 * d2);
            num += w * v;
            den += w;
        }
        num / den
    };
    let n = SIZE / CELL;
    for j in 0..n {
        let y = y1 - (j as f64 + 0.5) / n as f64 * (y1 - y0);
        let mut i = 0;
        while i < n {
            let b = band(field(x0 + (i as f64 + 0.5) / n as f64 * (x1 - x0), y));
            let start = i;
            while i < n && band(field(x0 + (i as f64 + 0.5) / n as f64 * (x1 - x0), y)) == b {
                i += 1;
            }
            let _ = writeln!(
                s,
                r#"<rect x="{}" y="{}" width="{}" height="{CELL}" fill="{}"/>"#,
                start * CELL,
                j * CELL,
                (i - start) * CELL,
                PALETTE[b]
            );
        }
    }
    for (p, _) in &pts {
        let px = (p[0] - x0) / (x1 - x0) * SIZE as f64;
        let py = (y1 - p[1]) / (y1 - y0) * SIZE as f64;
        let _ = writeln!(s, r##"<circle cx="{px:.1}" cy="{py:.1}" r="3" fill="#ffffff" stroke="#000000"/>"##);
    }
    s.push_str("</svg>\n");
    s
}
