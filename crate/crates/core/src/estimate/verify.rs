//! Grid verifiers for closed-form kernels: bounds, Varadhan limit, derivative shapes.

use nalgebra::{DMatrix, Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{config, Result};
use crate::geometry::{GeometryPoint, ModelPair, Side, SubmanifoldModel};
use crate::kernels::{
    h2_in_h3_integrated_kappa, hyperbolic3_kernel, integrated_kernel, log_gradient_fd, log_hessian_fd,
    lower_bound_value, upper_bound_value, BoundParams, KernelValue,
};
use crate::stats::adaptive_simpson;

/// A probe point at distance `d` from `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbePoint {
    pub d: f64,
    pub side: Side,
    pub x: GeometryPoint,
}

/// Exterior probes at every `d`, plus interior probes strictly inside a sphere.
pub fn probe_points(pair: &ModelPair, ds: &[f64]) -> Result<Vec<ProbePoint>> {
    let mut out = Vec::new();
    for &d in ds {
        out.push(ProbePoint { d, side: Side::Exterior, x: pair.point_at_distance(d, Side::Exterior)? });
        if let SubmanifoldModel::CenteredSphere { radius } = pair.submanifold() {
            if d > 0.0 && d < *radius {
                out.push(ProbePoint { d, side: Side::Interior, x: pair.point_at_distance(d, Side::Interior)? });
            }
        }
    }
    Ok(out)
}

/// One grid cell of the bound sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub t: f64,
    pub d: f64,
    pub side: Side,
    pub lower: f64,
    pub value: f64,
    pub upper: f64,
}

impl BoundRow {
    pub fn lower_ok(&self) -> bool {
        self.lower <= self.value * (1.0 + 1e-12)
    }

    pub fn upper_ok(&self) -> bool {
        self.value <= self.upper
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    /// Rows of the verification grid (interleaved with the fitting grid).
    pub rows: Vec<BoundRow>,
    pub upper: BoundParams,
    pub lower_violations: Vec<BoundRow>,
    pub upper_violations: Vec<BoundRow>,
    /// `(t, d, kappa_a, kappa_b)` where `kappa_a > kappa_b` but `p_a < p_b`.
    pub comparison_violations: Vec<(f64, f64, f64, f64)>,
    /// Largest relative gap between the scaled closed form and direct quadrature, per `kappa`.
    pub scaling_check: Vec<(f64, f64)>,
}

impl BoundsReport {
    pub fn passed(&self) -> bool {
        self.lower_violations.is_empty() && self.upper_violations.is_empty() && self.comparison_violations.is_empty()
    }
}

fn kernel_at(pair: &ModelPair, t: f64, x: &[f64]) -> Result<KernelValue> {
    integrated_kernel(pair, t, x)
}

/// Smallest `c` with `p_t(x, N) <= c t^{-m/2} exp(-d^2 / (sigma2 t))` on the grid, inflated by `margin`.
pub fn fit_upper_bound(
    pair: &ModelPair,
    ts: &[f64],
    ds: &[f64],
    sigma2: f64,
    t0: f64,
    margin: f64,
) -> Result<BoundParams> {
    let m = pair.m() as f64;
    let mut log_c = f64::NEG_INFINITY;
    for p in probe_points(pair, ds)? {
        for &t in ts {
            let k = kernel_at(pair, t, p.x.coords())?;
            log_c = log_c.max(k.log_value + 0.5 * m * t.ln() + p.d * p.d / (sigma2 * t));
        }
    }
    Ok(BoundParams { big_c: 1.0, c: log_c.exp() * (1.0 + margin), sigma2, t0 })
}

/// `int_{H^2} p^{H^3_kappa}_t(x, y) dy` at distance `d`, by quadrature in geodesic polar coordinates on the plane.
pub fn h2_in_h3_by_quadrature(t: f64, d: f64, kappa: f64) -> Result<f64> {
    let c = (-kappa).sqrt();
    hyperbolic3_kernel(t, d, kappa)?;
    let a = c * d;
    let rho_max = (100.0 * t).sqrt() + 1.0 / c;
    let f = |rho: f64| {
        let b = c * rho;
        // cosh(c dist) - 1 = 2 sinh^2(a/2) cosh b + 2 sinh^2(b/2)
        let u = 2.0 * (a / 2.0).sinh().powi(2) * b.cosh() + 2.0 * (b / 2.0).sinh().powi(2);
        let dist = (u + (u * (u + 2.0)).sqrt()).ln_1p() / c;
        // scaled by exp(d^2 / 2t), since dist >= d
        let k = hyperbolic3_kernel(t, dist, kappa).map(|k| (k.log_value + d * d / (2.0 * t)).exp()).unwrap_or(0.0);
        k * std::f64::consts::TAU * b.sinh() / c
    };
    Ok(adaptive_simpson(f, 0.0, rho_max, 1e-13) * (-d * d / (2.0 * t)).exp())
}

/// Lower and fitted upper bounds on a `(t, d)` grid, plus the curvature ordering for `H^2 in H^3`.
///
/// The upper constant is fitted on `ts` and checked on the geometric midpoints
/// of consecutive entries of `ts`. The curvature ordering is checked for every
/// pair in `kappas` after the scaled closed form is compared with quadrature.
pub fn verify_bounds(pair: &ModelPair, ts: &[f64], ds: &[f64], sigma2: f64, kappas: &[f64]) -> Result<BoundsReport> {
    if ts.len() < 2 || ds.is_empty() {
        return Err(config("bound verification needs at least two times and one distance"));
    }
    let t_max = ts.iter().copied().fold(0.0, f64::max);
    let upper = fit_upper_bound(pair, ts, ds, sigma2, t_max * 1.01, 0.05)?;
    let check_ts: Vec<f64> = ts.iter().copied().chain(ts.windows(2).map(|w| (w[0] * w[1]).sqrt())).collect();
    let constants = pair.comparison_constants();
    let (m, n) = (pair.m(), pair.n());
    let mut rows = Vec::new();
    for p in probe_points(pair, ds)? {
        for &t in &check_ts {
            let value = kernel_at(pair, t, p.x.coords())?.value;
            rows.push(BoundRow {
                t,
                d: p.d,
                side: p.side,
                lower: lower_bound_value(t, p.d, &constants, m, n)?,
                value,
                upper: upper_bound_value(t, p.d, &upper, m)?,
            });
        }
    }
    let lower_violations = rows.iter().filter(|r| !r.lower_ok()).copied().collect();
    let upper_violations = rows.iter().filter(|r| !r.upper_ok()).copied().collect();

    let mut comparison_violations = Vec::new();
    let mut scaling_check = Vec::new();
    if matches!(pair.submanifold(), SubmanifoldModel::TotallyGeodesic { n: 2 }) && m == 3 {
        let mut ks = kappas.to_vec();
        ks.sort_by(|a, b| b.total_cmp(a));
        for &kappa in &ks {
            let mut worst: f64 = 0.0;
            for &(t, d) in &[(0.05, 0.0), (0.2, 0.7), (1.0, 1.5)] {
                let closed = h2_in_h3_integrated_kappa(t, d, kappa)?.value;
                let quad = h2_in_h3_by_quadrature(t, d, kappa)?;
                worst = worst.max(((quad - closed) / closed).abs());
            }
            scaling_check.push((kappa, worst));
        }
        for &t in &check_ts {
            for &d in ds {
                for w in ks.windows(2) {
                    let a = h2_in_h3_integrated_kappa(t, d, w[0])?.value;
                    let b = h2_in_h3_integrated_kappa(t, d, w[1])?.value;
                    if a < b {
                        comparison_violations.push((t, d, w[0], w[1]));
                    }
                }
            }
        }
    }
    Ok(BoundsReport { rows, upper, lower_violations, upper_violations, comparison_violations, scaling_check })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VaradhanRow {
    pub t: f64,
    pub d: f64,
    /// `t log p_t(x, N) + d^2 / 2`.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VaradhanReport {
    pub rows: Vec<VaradhanRow>,
    /// `(d, limit)`, the `t -> 0` limit from the fit `a t log t + b t + c` through the three smallest times.
    pub limits: Vec<(f64, f64)>,
    pub max_abs_deviation: f64,
}

impl VaradhanReport {
    pub fn max_abs_limit(&self) -> f64 {
        self.limits.iter().map(|l| l.1.abs()).fold(0.0, f64::max)
    }
}

fn extrapolate(points: &[(f64, f64)]) -> Option<f64> {
    let a = Matrix3::from_fn(|i, j| {
        let t = points[i].0;
        [t * t.ln(), t, 1.0][j]
    });
    let b = Vector3::new(points[0].1, points[1].1, points[2].1);
    a.lu().solve(&b).map(|s| s[2])
}

/// Evaluates `t log p_t + d^2/2` in log space and extrapolates each distance to `t = 0`.
pub fn verify_varadhan(pair: &ModelPair, ds: &[f64], ts: &[f64]) -> Result<VaradhanReport> {
    if ts.len() < 3 {
        return Err(config("the Varadhan extrapolation needs at least three times"));
    }
    let mut sorted = ts.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut rows = Vec::new();
    let mut limits = Vec::new();
    for &d in ds {
        let x = pair.point_at_distance(d, Side::Exterior)?;
        let d_true = pair.distance(x.coords());
        let col: Vec<(f64, f64)> = sorted
            .iter()
            .map(|&t| kernel_at(pair, t, x.coords()).map(|k| (t, t * k.log_value + d_true * d_true / 2.0)))
            .collect::<Result<_>>()?;
        let limit = extrapolate(&col[..3]).ok_or_else(|| config("singular extrapolation system"))?;
        rows.extend(col.iter().map(|&(t, value)| VaradhanRow { t, d, value }));
        limits.push((d, limit));
    }
    let max_abs_deviation = rows.iter().map(|r| r.value.abs()).fold(0.0, f64::max);
    Ok(VaradhanReport { rows, limits, max_abs_deviation })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivativeRow {
    pub t: f64,
    pub d: f64,
    pub side: Side,
    /// `1/t + (n/t) log(1/t) + d^2/t^2`.
    pub shape: f64,
    pub grad_sq: f64,
    /// Operator norm of the Hessian of `log p`.
    pub hess_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivativeReport {
    pub rows: Vec<DerivativeRow>,
    /// Smallest `C` with `|grad log p|^2 <= C shape` on the grid.
    pub c_grad: f64,
    /// Smallest `C` with `|Hess log p| <= C shape` on the grid.
    pub c_hess: f64,
    pub grad_shape_violation: bool,
    pub hess_shape_violation: bool,
}

impl DerivativeReport {
    pub fn passed(&self) -> bool {
        self.c_grad.is_finite() && self.c_hess.is_finite() && !self.grad_shape_violation && !self.hess_shape_violation
    }
}

fn operator_norm(h: &[Vec<f64>]) -> f64 {
    let k = h.len();
    let m = DMatrix::from_fn(k, k, |i, j| 0.5 * (h[i][j] + h[j][i]));
    m.symmetric_eigen().eigenvalues.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

// max ratio in the smallest-t decade against 10x the max elsewhere
fn shape_violation(rows: &[DerivativeRow], ratio: impl Fn(&DerivativeRow) -> f64) -> bool {
    let t_min = rows.iter().map(|r| r.t).fold(f64::INFINITY, f64::min);
    let (mut small, mut rest) = (0.0f64, 0.0f64);
    for r in rows {
        if r.t < 10.0 * t_min {
            small = small.max(ratio(r));
        } else {
            rest = rest.max(ratio(r));
        }
    }
    rest > 0.0 && small > 10.0 * rest
}

/// Finite-difference log-gradient and log-Hessian of the closed form against the shape
/// `1/t + (n/t) log(1/t) + d^2/t^2`, with the constants fitted over the grid.
pub fn verify_gradient_hessian(pair: &ModelPair, ts: &[f64], ds: &[f64]) -> Result<DerivativeReport> {
    let space = pair.space();
    let n = pair.n() as f64;
    let mut rows = Vec::new();
    for p in probe_points(pair, ds)? {
        for &t in ts {
            let kernel = |y: &[f64]| integrated_kernel(pair, t, y).unwrap_or(KernelValue::from_log(f64::NEG_INFINITY));
            let h = 1e-3 * t.sqrt();
            let g = log_gradient_fd(space, kernel, p.x.coords(), h)?;
            let hess = log_hessian_fd(space, kernel, p.x.coords(), h)?;
            rows.push(DerivativeRow {
                t,
                d: p.d,
                side: p.side,
                shape: 1.0 / t + n / t * (1.0 / t).ln() + p.d * p.d / (t * t),
                grad_sq: g.iter().map(|v| v * v).sum(),
                hess_norm: operator_norm(&hess),
            });
        }
    }
    let c_grad = rows.iter().map(|r| r.grad_sq / r.shape).fold(0.0, f64::max);
    let c_hess = rows.iter().map(|r| r.hess_norm / r.shape).fold(0.0, f64::max);
    Ok(DerivativeReport {
        grad_shape_violation: shape_violation(&rows, |r| r.grad_sq / r.shape),
        hess_shape_violation: shape_violation(&rows, |r| r.hess_norm / r.shape),
        rows,
        c_grad,
        c_hess,
    })
}
