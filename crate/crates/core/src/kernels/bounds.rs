//! Gaussian lower and upper bounds for integrated heat kernels.

use serde::{Deserialize, Serialize};

use super::log_q;
use crate::error::{domain, Result};
use crate::geometry::ComparisonConstants;

/// Constants of the lower bound (`big_c`) and of `c t^{-m/2} exp(-d^2 / (sigma2 t))` on `(0, t0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub big_c: f64,
    pub c: f64,
    pub sigma2: f64,
    pub t0: f64,
}

/// Logarithm of the curvature lower bound
/// `q_t(d) exp[-alpha (d^2 + nu t)^{1/2} e^{lambda t/2} - beta/2 (d^2 + nu t) e^{lambda t}]`.
pub fn log_lower_bound(t: f64, d: f64, k: &ComparisonConstants, m: usize, n: usize) -> Result<f64> {
    if !(t > 0.0) {
        return Err(domain(format!("lower bound needs t > 0, got {t}")));
    }
    let alpha = k.alpha(m, n);
    let beta = k.beta(m);
    let s = d * d + k.nu * t;
    let penalty = alpha * s.sqrt() * (k.lambda * t / 2.0).exp() + beta / 2.0 * s * (k.lambda * t).exp();
    Ok(log_q(t, d, m - n) - penalty)
}

pub fn lower_bound_value(t: f64, d: f64, k: &ComparisonConstants, m: usize, n: usize) -> Result<f64> {
    log_lower_bound(t, d, k, m, n).map(f64::exp)
}

/// `c t^{-m/2} exp(-d^2 / (sigma2 t))` for `t` in `(0, t0)`.
pub fn upper_bound_value(t: f64, d: f64, p: &BoundParams, m: usize) -> Result<f64> {
    if !(t > 0.0 && t < p.t0) {
        return Err(domain(format!("upper bound needs t in (0, {}), got {t}", p.t0)));
    }
    Ok(p.c * t.powf(-(m as f64) / 2.0) * (-d * d / (p.sigma2 * t)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ModelPair;
    use crate::kernels::{h2_in_h3_integrated, q_kernel};

    #[test]
    fn flat_bound_is_q() {
        let k = ModelPair::euclidean_affine(3, 1).unwrap().comparison_constants();
        let lb = lower_bound_value(0.3, 1.2, &k, 3, 1).unwrap();
        assert_eq!(lb, q_kernel(0.3, 1.2, 3, 1).unwrap().value);
    }

    #[test]
    fn hyperbolic_bound_at_origin() {
        let k = ModelPair::hyperbolic_totally_geodesic(3, 2, -1.0).unwrap().comparison_constants();
        // alpha = 2, nu = 2, lambda = 1, beta = 0
        let want = q_kernel(1.0, 0.0, 3, 2).unwrap().value * (-2.0 * 2f64.sqrt() * 0.5f64.exp()).exp();
        assert!((lower_bound_value(1.0, 0.0, &k, 3, 2).unwrap() / want - 1.0).abs() < 1e-14);
        for i in 1..=20 {
            for j in 0..=20 {
                let (t, d) = (0.05 * i as f64, 0.1 * j as f64);
                assert!(lower_bound_value(t, d, &k, 3, 2).unwrap() <= h2_in_h3_integrated(t, d).unwrap().value);
            }
        }
    }

    #[test]
    fn upper_bound_shape() {
        let p = BoundParams { big_c: 0.0, c: 2.0, sigma2: 4.0, t0: 2.0 };
        assert_eq!(upper_bound_value(0.5, 0.0, &p, 2).unwrap(), 4.0);
        assert!(upper_bound_value(0.5, 1.0, &p, 2).unwrap() < upper_bound_value(0.5, 0.5, &p, 2).unwrap());
        assert!(upper_bound_value(2.0, 0.0, &p, 2).is_err());
    }
}
