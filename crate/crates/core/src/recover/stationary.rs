use crate::holomorphic::{HolomorphicPhase, RationalFunction};
use crate::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;

/// Leading stationary-phase data at a Morse critical point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StationaryData {
    pub p: [f64; 2],
    pub hessian: [f64; 2],
    pub metric: f64,
    /// `∫ e^{2iψ/h} |a|² w dv_g = C h w(p) + O(h²)`.
    pub constant: f64,
    /// Unimodular factor; 1 because `Im Φ` is harmonic and has signature zero.
    pub signature: [f64; 2],
}

/// `C = π e^{2λ(p)} |a(p)|² / |Φ''(p)|`, with `lambda_p = λ(p)`.
pub fn stationary_constant(phase: &HolomorphicPhase, p: Complex64, lambda_p: f64, a: &RationalFunction) -> Result<StationaryData> {
    let d2 = phase.d2(p);
    if d2.norm() < 1e-8 {
        return Err(Error::InvalidInput(format!("degenerate Hessian at {p}: |Φ''| = {:.2e}", d2.norm())));
    }
    let ap = a.eval(p);
    if ap.norm() == 0.0 {
        return Err(Error::InvalidInput(format!("amplitude vanishes at {p}")));
    }
    let metric = (2.0 * lambda_p).exp();
    Ok(StationaryData {
        p: [p.re, p.im],
        hessian: [d2.re, d2.im],
        metric,
        constant: std::f64::consts::PI * metric * ap.norm_sqr() / d2.norm(),
        signature: [1.0, 0.0],
    })
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // Tricomi initial guess, then Newton on P_n
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            let pm = if n == 0 { 0.0 } else { p0 };
            dp = n as f64 * (x * p - pm) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// `∫ e^{2iψ/h} f dA` over the box `[x0, x1] × [y0, y1]` by composite tensor
/// Gauss–Legendre with `panels` panels of `order` nodes per axis.
pub fn oscillatory_integral(
    phase: &HolomorphicPhase,
    h: f64,
    f: impl Fn([f64; 2]) -> f64,
    bbox: [f64; 4],
    panels: usize,
    order: usize,
) -> Complex64 {
    let gl = gauss_legendre(order);
    let axis = |a: f64, b: f64| -> Vec<(f64, f64)> {
        let w = (b - a) / panels as f64;
        (0..panels)
            .flat_map(|k| {
                let lo = a + w * k as f64;
                gl.iter().map(move |&(x, wt)| (lo + 0.5 * w * (x + 1.0), 0.5 * w * wt))
            })
            .collect()
    };
    let xs = axis(bbox[0], bbox[1]);
    let ys = axis(bbox[2], bbox[3]);
    let mut acc = Complex64::new(0.0, 0.0);
    for &(x, wx) in &xs {
        for &(y, wy) in &ys {
            let v = f([x, y]);
            if v != 0.0 {
                let psi = phase.value(Complex64::new(x, y)).im;
                acc += Complex64::from_polar(v * wx * wy, 2.0 * psi / h);
            }
        }
    }
    acc
}
