use super::solution::{assemble_cgo, CgoNorms, CgoOptions, CgoWorkspace};
use crate::elliptic::{DiscreteOperator, PotentialField};
use crate::holomorphic::{HolomorphicPhase, RationalFunction};
use crate::par::map_slice;
use crate::Result;
use serde::Serialize;

/// Least-squares slope of `ln v` against `ln h`.
pub fn loglog_slope(h: &[f64], v: &[f64]) -> f64 {
    let n = h.len() as f64;
    let x: Vec<f64> = h.iter().map(|h| h.ln()).collect();
    let y: Vec<f64> = v.iter().map(|v| v.ln()).collect();
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingSlopes {
    pub r11_l2: f64,
    pub r12_inf: f64,
    pub eta_inf: f64,
    pub residual: f64,
    pub r2_l2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingSuite {
    pub norms: Vec<CgoNorms>,
    pub slopes: ScalingSlopes,
}

/// Builds the CGO for every `h` (concurrently under the options' policy) and
/// fits the remainder exponents.
#[allow(clippy::too_many_arguments)]
pub fn scaling_suite(
    ws: &CgoWorkspace,
    op: &DiscreteOperator,
    v: &PotentialField,
    phase: &HolomorphicPhase,
    a: &RationalFunction,
    h_list: &[f64],
    sign: i32,
    opts: &CgoOptions,
) -> Result<ScalingSuite> {
    let norms = map_slice(opts.policy, h_list, |&h| assemble_cgo(ws, op, v, phase, a, h, sign, opts).map(|s| s.norms))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let fit = |f: fn(&CgoNorms) -> f64| loglog_slope(h_list, &norms.iter().map(f).collect::<Vec<_>>());
    let slopes = ScalingSlopes {
        r11_l2: fit(|n| n.r11_l2),
        r12_inf: fit(|n| n.r12_inf),
        eta_inf: fit(|n| n.eta_inf),
        residual: fit(|n| n.residual),
        r2_l2: fit(|n| n.r2_l2),
    };
    Ok(ScalingSuite { norms, slopes })
}
