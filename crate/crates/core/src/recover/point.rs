use super::pairing::{alessandrini_pairing, correction_term, volume_pairing};
use super::stationary::{stationary_constant, StationaryData};
use crate::cgo::{assemble_cgo, CgoOptions, CgoWorkspace};
use crate::elliptic::{DiscreteOperator, DtnMap, PotentialField};
use crate::geometry::Point;
use crate::holomorphic::{amplitude_build, build_phase, cz, PhaseStyle, RationalFunction};
use crate::par::{map_range, map_slice, ExecPolicy};
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryConfig {
    /// Strictly decreasing.
    pub h_list: Vec<f64>,
    /// Richardson steps; order `k` fits a degree-`k` polynomial in `h` through
    /// the `k + 1` smallest values.
    pub order: usize,
    pub grid: Vec<Point>,
    /// Points closer than this to the boundary are skipped.
    pub margin: f64,
}

impl RecoveryConfig {
    pub fn validate(&self) -> Result<()> {
        if self.h_list.is_empty() || self.h_list.iter().any(|h| !(*h > 0.0 && h.is_finite())) {
            return Err(Error::InvalidInput("h_list must hold positive values".into()));
        }
        if self.h_list.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidInput("h_list must be strictly decreasing".into()));
        }
        if self.order + 1 > self.h_list.len() {
            return Err(Error::InvalidInput(format!(
                "extrapolation order {} needs at least {} values of h",
                self.order,
                self.order + 1
            )));
        }
        Ok(())
    }
}

/// `n × n` points on the square of half-width `half_width` about `center`,
/// row by row from the bottom.
pub fn square_grid(center: Point, half_width: f64, n: usize) -> Vec<Point> {
    let step = if n > 1 { 2.0 * half_width / (n - 1) as f64 } else { 0.0 };
    let mut out = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            let off = |k: usize| if n > 1 { -half_width + step * k as f64 } else { 0.0 };
            out.push([center[0] + off(i), center[1] + off(j)]);
        }
    }
    out
}

/// Everything shared by the point recoveries of one experiment.
pub struct RecoveryContext<'a> {
    pub ws: &'a CgoWorkspace<'a>,
    pub op1: &'a DiscreteOperator,
    pub op2: &'a DiscreteOperator,
    pub v1: &'a PotentialField,
    pub v2: &'a PotentialField,
    pub dtn1: &'a DtnMap,
    pub dtn2: &'a DtnMap,
    /// Known `V₁ - V₂` at the nodes, enabling the volume-side audits.
    pub truth: Option<&'a [f64]>,
    pub cgo: CgoOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HSample {
    pub h: f64,
    pub pairing: [f64; 2],
    /// `I(h) / (C h)`.
    pub raw: [f64; 2],
    pub volume: Option<[f64; 2]>,
    pub correction: Option<[f64; 2]>,
    pub r2_l2: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointEstimate {
    pub p: Point,
    pub estimate: f64,
    pub truth: Option<f64>,
    pub stationary: StationaryData,
    pub samples: Vec<HSample>,
    /// Reasons the extrapolated value is unreliable.
    pub flags: Vec<String>,
    /// Informational notes that do not flag the estimate.
    pub notes: Vec<String>,
}

impl PointEstimate {
    pub fn flagged(&self) -> bool {
        !self.flags.is_empty()
    }
}

/// Value at `h = 0` of the polynomial through `(h_k, y_k)`.
pub fn richardson(h: &[f64], y: &[f64]) -> f64 {
    let n = h.len();
    let mut p = y.to_vec();
    // Neville's scheme at zero
    for k in 1..n {
        for i in 0..n - k {
            p[i] = (h[i + k] * p[i] - h[i] * p[i + 1]) / (h[i + k] - h[i]);
        }
    }
    p[0]
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// Quantitative form of the identification argument at one interior point.
pub fn recover_point(ctx: &RecoveryContext, p: Point, config: &RecoveryConfig, policy: ExecPolicy) -> Result<PointEstimate> {
    config.validate()?;
    let ws = ctx.ws;
    let dist = ws.domain.distance_to_boundary(p);
    if !ws.domain.contains(p) || dist < config.margin {
        return Err(Error::InvalidInput(format!("point {p:?} is within the margin {} of the boundary", config.margin)));
    }
    let zp = cz(p);
    let phase = build_phase(zp, &PhaseStyle::Quadratic, ws.domain)?;
    let a = RationalFunction::polynomial(amplitude_build(&phase, zp)?);
    let lambda_p = ws
        .locator
        .interpolate(ws.mesh, &ws.lambda.values, p)
        .ok_or(Error::OutsideMesh(p))?;
    let stationary = stationary_constant(&phase, zp, lambda_p, &a)?;
    let samples = map_slice(policy, &config.h_list, |&h| -> Result<HSample> {
        let u1 = assemble_cgo(ws, ctx.op1, ctx.v1, &phase, &a, h, 1, &ctx.cgo)?;
        let u2 = assemble_cgo(ws, ctx.op2, ctx.v2, &phase, &a, h, -1, &ctx.cgo)?;
        let pairing = alessandrini_pairing(ctx.dtn1, ctx.dtn2, &u1, &u2)?;
        let (volume, correction) = match ctx.truth {
            Some(dv) => (
                Some(pair(volume_pairing(ws.mesh, ws.lambda, &u1, &u2, dv))),
                Some(pair(correction_term(ws.mesh, ws.lambda, &u1, &u2, dv))),
            ),
            None => (None, None),
        };
        Ok(HSample {
            h,
            pairing: pair(pairing),
            raw: pair(pairing / (stationary.constant * h)),
            volume,
            correction,
            r2_l2: [u1.norms.r2_l2, u2.norms.r2_l2],
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let k = config.order + 1;
    let tail = &samples[samples.len() - k..];
    let hs: Vec<f64> = tail.iter().map(|s| s.h).collect();
    let ys: Vec<f64> = tail.iter().map(|s| s.raw[0]).collect();
    let estimate = richardson(&hs, &ys);

    let mut flags = Vec::new();
    let dev: Vec<f64> = samples.iter().map(|s| (s.raw[0] - estimate).abs()).collect();
    if dev.windows(2).any(|w| w[1] > w[0]) {
        flags.push("non-monotone raw sequence".to_string());
    }
    let mut notes = Vec::new();
    let h_min = config.h_list[config.h_list.len() - 1];
    if h_min < 8.0 * ws.mesh.h_mesh {
        notes.push(format!("h_min {h_min} below 8·h_mesh = {:.3}", 8.0 * ws.mesh.h_mesh));
    }
    let truth = ctx.truth.and_then(|dv| ws.locator.interpolate(ws.mesh, dv, p));
    Ok(PointEstimate { p, estimate, truth, stationary, samples, flags, notes })
}

/// Reconstructed field on a point grid with error summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridReport {
    pub points: Vec<PointEstimate>,
    /// `‖est - truth‖₂ / ‖truth‖₂` over the grid.
    pub rel_l2: Option<f64>,
    /// `max |est - truth| / max |truth|`.
    pub rel_max: Option<f64>,
    pub flagged: usize,
}

pub fn recover_grid(ctx: &RecoveryContext, config: &RecoveryConfig, policy: ExecPolicy) -> Result<GridReport> {
    config.validate()?;
    let points = map_range(policy, config.grid.len(), |i| recover_point(ctx, config.grid[i], config, ExecPolicy::Sequential))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let (rel_l2, rel_max) = if points.iter().all(|p| p.truth.is_some()) && !points.is_empty() {
        let err2: f64 = points.iter().map(|p| (p.estimate - p.truth.unwrap()).powi(2)).sum();
        let tru2: f64 = points.iter().map(|p| p.truth.unwrap().powi(2)).sum();
        let emax = points.iter().map(|p| (p.estimate - p.truth.unwrap()).abs()).fold(0.0, f64::max);
        let tmax = points.iter().map(|p| p.truth.unwrap().abs()).fold(0.0, f64::max);
        let div = |a: f64, b: f64| if b > 0.0 { a / b } else { a };
        (Some(div(err2.sqrt(), tru2.sqrt())), Some(div(emax, tmax)))
    } else {
        (None, None)
    };
    let flagged = points.iter().filter(|p| p.flagged()).count();
    Ok(GridReport { points, rel_l2, rel_max, flagged })
}
