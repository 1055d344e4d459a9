//! Band estimators of local time on a hypersurface.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{config, Result};
use crate::geometry::{GeometryPoint, ModelPair};

/// How a single step contributes to `(1/2 eps) int 1{|Y| < eps} ds`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum BandRule {
    /// Expected band occupation of a Brownian bridge between the step endpoints.
    #[default]
    BridgeConditional,
    /// `h 1{|Y_s| < eps}` at the left endpoint.
    LeftPoint,
}

/// Scaled complementary error function `e^{x^2} erfc(x)` for `x >= 0`.
fn erfcx(x: f64) -> f64 {
    if x < 25.0 {
        (x * x).exp() * erfc(x)
    } else {
        let w = 1.0 / (x * x);
        (1.0 - 0.5 * w + 0.75 * w * w - 1.875 * w * w * w) / (x * PI.sqrt())
    }
}

// e^{-w^2} (w erfcx(w) - 1/sqrt(pi)), an antiderivative of erfc
fn erfc_antiderivative_scaled(w: f64, shift: f64) -> f64 {
    // returns e^{shift - w^2} (w erfcx(w) - 1/sqrt(pi)) with shift <= w^2
    (shift - w * w).exp() * (w * erfcx(w) - 1.0 / PI.sqrt())
}

/// `(1/2 eps) E[int_0^h 1{|Y_u| < eps} du]` for a Brownian bridge `Y` from `a` to `b` over time `h`.
pub fn bridge_band_occupation(a: f64, b: f64, h: f64, eps: f64) -> f64 {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    // far from the band on one side: negligible
    let reach = eps + 12.0 * h.sqrt();
    if lo > reach || hi < -reach {
        return 0.0;
    }
    let d = hi - lo;
    let s2h = (2.0 * h).sqrt();
    let shift = d * d / (2.0 * h);
    // K = sqrt(2 pi h)/2 e^{d^2/2h}; E[L^y] = K erfc((d + 2 dist(y, [lo, hi])) / sqrt(2h))
    let k0 = (2.0 * PI * h).sqrt() / 2.0;
    let w0 = d / s2h;
    let mut total = 0.0;
    let inside = (hi.min(eps) - lo.max(-eps)).max(0.0);
    if inside > 0.0 {
        total += k0 * inside * erfcx(w0);
    }
    // y above hi
    if eps > hi {
        let y1 = hi.max(-eps);
        let w1 = (d + 2.0 * (y1 - hi)) / s2h;
        let w2 = (d + 2.0 * (eps - hi)) / s2h;
        total += k0 * s2h / 2.0 * (erfc_antiderivative_scaled(w2, shift) - erfc_antiderivative_scaled(w1, shift));
    }
    // y below lo
    if -eps < lo {
        let y1 = lo.min(eps);
        let w1 = (d + 2.0 * (lo - y1)) / s2h;
        let w2 = (d + 2.0 * (lo + eps)) / s2h;
        total += k0 * s2h / 2.0 * (erfc_antiderivative_scaled(w2, shift) - erfc_antiderivative_scaled(w1, shift));
    }
    total.max(0.0) / (2.0 * eps)
}

/// Band increment for one step from signed offset `a` to `b`.
pub fn band_increment(rule: BandRule, a: f64, b: f64, h: f64, eps: f64) -> f64 {
    match rule {
        BandRule::BridgeConditional => bridge_band_occupation(a, b, h, eps),
        BandRule::LeftPoint => {
            if a.abs() < eps {
                h / (2.0 * eps)
            } else {
                0.0
            }
        }
    }
}

/// `(1/2 eps) int_0^t 1{r_N(path_s) < eps} ds` by the trapezoid rule on the path's own grid.
pub fn occupation_local_time(path: &[GeometryPoint], times: &[f64], pair: &ModelPair, eps: f64) -> Result<f64> {
    if pair.codimension() != 1 {
        return Err(config(format!("local time needs a hypersurface, codimension is {}", pair.codimension())));
    }
    if path.len() != times.len() {
        return Err(config("path and time grid lengths differ"));
    }
    if !(eps > 0.0) {
        return Err(config("band width must be positive"));
    }
    let ind: Vec<f64> = path.iter().map(|p| if pair.distance(p.coords()) < eps { 1.0 } else { 0.0 }).collect();
    let integral: f64 = times.windows(2).zip(ind.windows(2)).map(|(t, i)| 0.5 * (t[1] - t[0]) * (i[0] + i[1])).sum();
    Ok(integral / (2.0 * eps))
}
