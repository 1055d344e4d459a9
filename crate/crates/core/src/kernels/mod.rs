//! Closed-form heat kernels, integrated heat kernels and bound functionals.
//!
//! Every kernel is assembled as a logarithm and exponentiated last, so
//! `log_value` stays meaningful far below the `f64` underflow threshold.

mod bessel;
mod bounds;
mod derivatives;

use std::f64::consts::{LN_2, PI, TAU};

use serde::{Deserialize, Serialize};

pub use bessel::{bessel_i0, bessel_i0e, ln_bessel_i0, SERIES_LIMIT};
pub use bounds::{log_lower_bound, lower_bound_value, upper_bound_value, BoundParams};
pub use derivatives::{log_gradient_fd, log_hessian_fd};

use crate::error::{config, domain, Result};
use crate::geometry::{ModelPair, SpaceKind, SubmanifoldModel};

/// A kernel value with its logarithm and a bound on any series truncation error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub value: f64,
    pub log_value: f64,
    pub truncation_error_bound: f64,
}

impl KernelValue {
    pub fn from_log(log_value: f64) -> Self {
        Self { value: log_value.exp(), log_value, truncation_error_bound: 0.0 }
    }
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("time must be positive and finite, got {t}")))
    }
}

fn check_distance(d: f64) -> Result<()> {
    if d >= 0.0 && d.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("distance must be non-negative and finite, got {d}")))
    }
}

/// `ln cosh x` for any real `x`.
pub fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - LN_2
}

/// `ln(s / sinh s)` for `s >= 0`.
pub fn ln_s_over_sinh(s: f64) -> f64 {
    if s < 1e-6 {
        -s * s / 6.0
    } else if s < 20.0 {
        (s / s.sinh()).ln()
    } else {
        (2.0 * s).ln() - s - (-(-2.0 * s).exp()).ln_1p()
    }
}

/// `ln q_t` with `q_t = (2 pi t)^{-k/2} exp(-d^2 / 2t)`, `k = m - n`.
pub fn log_q(t: f64, d: f64, k: usize) -> f64 {
    -0.5 * k as f64 * (TAU * t).ln() - d * d / (2.0 * t)
}

/// Gauss-Weierstrass kernel `(2 pi t)^{-m/2} exp(-d^2 / 2t)`.
pub fn gauss_weierstrass(t: f64, d: f64, m: usize) -> Result<KernelValue> {
    check_time(t)?;
    check_distance(d)?;
    Ok(KernelValue::from_log(log_q(t, d, m)))
}

/// Reference kernel `q_t(x, N) = (2 pi t)^{-(m-n)/2} exp(-d^2 / 2t)`.
pub fn q_kernel(t: f64, d: f64, m: usize, n: usize) -> Result<KernelValue> {
    check_time(t)?;
    check_distance(d)?;
    if n >= m {
        return Err(config(format!("q kernel needs n < m, got n = {n}, m = {m}")));
    }
    Ok(KernelValue::from_log(log_q(t, d, m - n)))
}

/// Integrated kernel of an affine `n`-plane in `R^m`; equal to [`q_kernel`].
pub fn affine_integrated(t: f64, d: f64, m: usize, n: usize) -> Result<KernelValue> {
    q_kernel(t, d, m, n)
}

/// Heat kernel of `H^3_kappa`.
pub fn hyperbolic3_kernel(t: f64, d: f64, kappa: f64) -> Result<KernelValue> {
    check_time(t)?;
    check_distance(d)?;
    if !(kappa < 0.0) {
        return Err(domain(format!("hyperbolic kernel needs kappa < 0, got {kappa}")));
    }
    let c = (-kappa).sqrt();
    Ok(KernelValue::from_log(log_q(t, d, 3) + ln_s_over_sinh(c * d) + kappa * t / 2.0))
}

/// Heat kernel of the unit circle at arc distance `d` in `[0, pi]`.
///
/// The image sum over `k` is truncated symmetrically once both next terms
/// fall below `tol` relative to the partial sum; the remaining tails are
/// bounded by geometric series.
pub fn circle_kernel(t: f64, d: f64, tol: f64) -> Result<KernelValue> {
    check_time(t)?;
    if !(0.0..=PI).contains(&d) {
        return Err(domain(format!("circle distance must lie in [0, pi], got {d}")));
    }
    if !(tol > 0.0) {
        return Err(domain("circle kernel tolerance must be positive"));
    }
    // exponent of the k-th image relative to k = 0
    let expo = |k: f64| -TAU * k * (d + PI * k) / t;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        let plus = expo(k).exp();
        let minus = expo(-k).exp();
        sum += plus + minus;
        let next_plus = expo(k + 1.0).exp();
        let next_minus = expo(-(k + 1.0)).exp();
        if (next_plus.max(next_minus) < tol * sum) || k > 1e7 {
            let ratio_plus = (expo(k + 2.0) - expo(k + 1.0)).exp();
            let ratio_minus = (expo(-(k + 2.0)) - expo(-(k + 1.0))).exp();
            let tail = next_plus / (1.0 - ratio_plus) + next_minus / (1.0 - ratio_minus);
            let prefactor = log_q(t, d, 1);
            return Ok(KernelValue {
                value: (prefactor + sum.ln()).exp(),
                log_value: prefactor + sum.ln(),
                truncation_error_bound: prefactor.exp() * tail,
            });
        }
        k += 1.0;
    }
}

/// Integrated kernel of the circle of radius `radius` centred at the origin of `R^2`,
/// at a point with `|x| = x_norm`.
pub fn circle_in_plane_integrated(t: f64, x_norm: f64, radius: f64) -> Result<KernelValue> {
    check_time(t)?;
    check_distance(x_norm)?;
    if !(radius > 0.0) {
        return Err(domain("circle radius must be positive"));
    }
    let z = radius * x_norm / t;
    let log = radius.ln() - t.ln() - (radius - x_norm).powi(2) / (2.0 * t) + bessel_i0e(z).ln();
    Ok(KernelValue::from_log(log))
}

/// Integrated kernel of the centred sphere `S^2(radius)` in `R^3` at `|x| = x_norm`.
pub fn sphere_in_space_integrated(t: f64, x_norm: f64, radius: f64) -> Result<KernelValue> {
    check_time(t)?;
    check_distance(x_norm)?;
    if !(radius > 0.0) {
        return Err(domain("sphere radius must be positive"));
    }
    // radius^2 (2 pi t)^{-3/2} 4 pi exp(-(R^2 + rho^2)/2t) sinh(z)/z, z = R rho / t
    let z = radius * x_norm / t;
    let ln_sinhc = -ln_s_over_sinh(z);
    let log = 2.0 * radius.ln() + (4.0 * PI).ln() + log_q(t, 0.0, 3) - (x_norm * x_norm + radius * radius) / (2.0 * t)
        + ln_sinhc;
    Ok(KernelValue::from_log(log))
}

/// Integrated kernel of `H^2 in H^3` with `kappa = -1`.
pub fn h2_in_h3_integrated(t: f64, d: f64) -> Result<KernelValue> {
    h2_in_h3_integrated_kappa(t, d, -1.0)
}

/// Integrated kernel of a totally geodesic `H^2_kappa` in `H^3_kappa`:
/// `q_t(d) e^{kappa t / 2} / cosh(sqrt(-kappa) d)`.
pub fn h2_in_h3_integrated_kappa(t: f64, d: f64, kappa: f64) -> Result<KernelValue> {
    check_time(t)?;
    check_distance(d)?;
    if !(kappa < 0.0) {
        return Err(domain(format!("hyperbolic kernel needs kappa < 0, got {kappa}")));
    }
    let c = (-kappa).sqrt();
    Ok(KernelValue::from_log(log_q(t, d, 1) + kappa * t / 2.0 - ln_cosh(c * d)))
}

/// Closed-form integrated kernel `p_t(x, N)` for the pairs that have one.
pub fn integrated_kernel(pair: &ModelPair, t: f64, x: &[f64]) -> Result<KernelValue> {
    let d = pair.distance(x);
    let m = pair.m();
    let space = pair.space();
    match (pair.submanifold(), space.kind()) {
        (SubmanifoldModel::AffineSubspace { n }, _) => affine_integrated(t, d, m, *n),
        (SubmanifoldModel::Point { .. }, SpaceKind::Euclidean) => gauss_weierstrass(t, d, m),
        (SubmanifoldModel::Point { .. }, SpaceKind::Hyperbolic) if m == 3 => hyperbolic3_kernel(t, d, space.kappa()),
        (SubmanifoldModel::CenteredSphere { radius }, _) if m == 2 => {
            circle_in_plane_integrated(t, crate::geometry::norm_of(x), *radius)
        }
        (SubmanifoldModel::CenteredSphere { radius }, _) if m == 3 => {
            sphere_in_space_integrated(t, crate::geometry::norm_of(x), *radius)
        }
        (SubmanifoldModel::TotallyGeodesic { n: 2 }, _) if m == 3 => h2_in_h3_integrated_kappa(t, d, space.kappa()),
        (SubmanifoldModel::CirclePoint { .. }, _) => circle_kernel(t, d, 1e-16),
        _ => Err(config(format!("no closed-form integrated kernel for {:?} in dimension {m}", pair.submanifold()))),
    }
}

/// `F_{x,t}(N) = (2 pi t)^{1/2} p_t(x, N)`.
pub fn f_functional(pair: &ModelPair, t: f64, x: &[f64]) -> Result<f64> {
    let k = integrated_kernel(pair, t, x)?;
    Ok((0.5 * (TAU * t).ln() + k.log_value).exp())
}
