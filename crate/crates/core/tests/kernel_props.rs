use std::f64::consts::{PI, TAU};

use fermi_bridge::estimate::h2_in_h3_by_quadrature;
use fermi_bridge::geometry::angle_offset;
use fermi_bridge::kernels::{
    bessel_i0e, circle_in_plane_integrated, circle_kernel, gauss_weierstrass, h2_in_h3_integrated_kappa, q_kernel,
    sphere_in_space_integrated,
};
use fermi_bridge::stats::{adaptive_simpson, trapezoid};
use proptest::prelude::*;

fn circle(t: f64, a: f64, b: f64) -> f64 {
    circle_kernel(t, angle_offset(a, b).abs(), 1e-16).unwrap().value
}

#[test]
fn circle_kernel_is_a_probability_density() {
    for t in [0.05, 0.5, 3.0] {
        let mass = trapezoid(|th| circle(t, th, 0.0), 0.0, TAU, 400);
        assert!((mass - 1.0).abs() < 1e-12, "t={t}: {mass}");
    }
}

#[test]
fn circle_kernel_satisfies_chapman_kolmogorov() {
    for (s, t, th) in [(0.1, 0.2, 1.0), (0.5, 0.3, PI), (1.0, 2.0, 0.2)] {
        let conv = trapezoid(|ph| circle(s, th, ph) * circle(t, ph, 0.0), 0.0, TAU, 800);
        let direct = circle(s + t, th, 0.0);
        assert!(((conv - direct) / direct).abs() < 1e-10, "{conv} vs {direct}");
    }
}

// int_{R^2} g_s(x - y) P_t(|y|) dy with the angular integral done in closed form
fn plane_semigroup(s: f64, t: f64, x_norm: f64) -> f64 {
    let f = |rho: f64| {
        let z = x_norm * rho / s;
        let k = circle_in_plane_integrated(t, rho, 1.0).unwrap().value;
        rho / s * (-(x_norm - rho).powi(2) / (2.0 * s)).exp() * bessel_i0e(z) * k
    };
    adaptive_simpson(f, 0.0, 12.0, 1e-13)
}

#[test]
fn circle_in_plane_semigroup() {
    for (s, t, r) in [(0.2, 0.3, 2.0), (0.5, 0.5, 0.3), (0.1, 1.0, 1.0)] {
        let conv = plane_semigroup(s, t, r);
        let direct = circle_in_plane_integrated(s + t, r, 1.0).unwrap().value;
        assert!(((conv - direct) / direct).abs() < 1e-8, "{conv} vs {direct}");
    }
}

#[test]
fn sphere_in_space_integrates_the_point_kernel() {
    // int_{S^2(rho)} g_t(x - y) dy in spherical coordinates about x
    let (t, rho) = (0.4, 1.0);
    for x_norm in [0.0, 0.5, 2.0] {
        let f = |u: f64| {
            let d2 = x_norm * x_norm + rho * rho - 2.0 * x_norm * rho * u;
            TAU * rho * rho * gauss_weierstrass(t, d2.max(0.0).sqrt(), 3).unwrap().value
        };
        let quad = adaptive_simpson(f, -1.0, 1.0, 1e-14);
        let closed = sphere_in_space_integrated(t, x_norm, rho).unwrap().value;
        assert!(((quad - closed) / closed).abs() < 1e-9, "{x_norm}: {quad} vs {closed}");
    }
}

#[test]
fn varadhan_slope_for_the_circle_antipode() {
    // t log p + pi^2 / 2 -> 0 with rate t log t
    let mut prev = f64::INFINITY;
    for t in [1e-1, 1e-2, 1e-3, 1e-4] {
        let v = (t * circle_kernel(t, PI, 1e-16).unwrap().log_value + PI * PI / 2.0).abs();
        assert!(v < prev);
        prev = v;
    }
    assert!(prev < 1e-3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn curvature_scaling_matches_quadrature(t in 0.05f64..1.0, d in 0.0f64..2.0, kappa in -2.5f64..-0.2) {
        let closed = h2_in_h3_integrated_kappa(t, d, kappa).unwrap().value;
        let quad = h2_in_h3_by_quadrature(t, d, kappa).unwrap();
        prop_assert!(((quad - closed) / closed).abs() < 1e-8, "{quad} vs {closed}");
    }

    #[test]
    fn circle_kernel_dominates_q(t in 0.01f64..3.0, d in 0.0f64..PI) {
        let p = circle_kernel(t, d, 1e-16).unwrap().value;
        prop_assert!(p >= q_kernel(t, d, 1, 0).unwrap().value);
    }

    #[test]
    fn negative_curvature_lowers_the_plane_kernel(t in 0.01f64..1.0, d in 0.0f64..2.0, k1 in -3.0f64..-0.1, dk in 0.01f64..1.0) {
        let a = h2_in_h3_integrated_kappa(t, d, k1).unwrap().value;
        let b = h2_in_h3_integrated_kappa(t, d, k1 - dk).unwrap().value;
        prop_assert!(a >= b);
        prop_assert!(a <= q_kernel(t, d, 3, 2).unwrap().value);
    }

    #[test]
    fn circle_truncation_bound_is_honest(t in 0.01f64..5.0, d in 0.0f64..PI) {
        let loose = circle_kernel(t, d, 1e-6).unwrap();
        let tight = circle_kernel(t, d, 1e-16).unwrap();
        prop_assert!((tight.value - loose.value).abs() <= loose.truncation_error_bound + 1e-15 * tight.value);
    }
}
