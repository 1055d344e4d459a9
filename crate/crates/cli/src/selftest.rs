//! Fast invariant suite.

use std::f64::consts::TAU;

use fermi_bridge::estimate::{estimate_integrated_kernel, verify_bounds, verify_gradient_hessian, verify_varadhan};
use fermi_bridge::geometry::{gradient_vector_fd, laplacian_fd};
use fermi_bridge::kernels::{circle_kernel, gauss_weierstrass, h2_in_h3_integrated, q_kernel};
use fermi_bridge::simulate::{run_bridge, with_workers};
use fermi_bridge::stats::trapezoid;
use fermi_bridge::{BridgeConfig, ModelPair, Side};

type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn geometry_pairs() -> Vec<ModelPair> {
    vec![
        ModelPair::euclidean_affine(3, 1).unwrap(),
        ModelPair::euclidean_sphere(2, 1.0).unwrap(),
        ModelPair::euclidean_sphere(3, 1.0).unwrap(),
        ModelPair::hyperbolic_totally_geodesic(3, 2, -1.0).unwrap(),
        ModelPair::hyperbolic_point(3, -1.0).unwrap(),
        ModelPair::circle_point(0.0).unwrap(),
    ]
}

fn laplacian_closed_form(perturb: f64) -> Check {
    for pair in geometry_pairs() {
        for d in [0.3, 0.8, 1.7] {
            for side in [Side::Exterior, Side::Interior] {
                let Ok(x) = pair.point_at_distance(d, side) else { continue };
                if pair.cut_locus_distance(x.coords()) < 0.05 {
                    continue;
                }
                let exact = pair.laplacian_r_squared_half(x.coords()).map_err(|e| e.to_string())? * (1.0 + perturb);
                let fd = 0.5 * laplacian_fd(pair.space(), |y| pair.distance(y).powi(2), x.coords(), 1e-4);
                ensure((exact - fd).abs() < 1e-4, || format!("{:?} at d={d}: {exact} vs {fd}", pair.submanifold()))?;
            }
        }
    }
    Ok(())
}

fn radial_direction_is_gradient() -> Check {
    for pair in geometry_pairs() {
        let x = pair.point_at_distance(0.9, Side::Exterior).map_err(|e| e.to_string())?;
        let dir = pair.radial_direction(x.coords());
        let grad = gradient_vector_fd(pair.space(), |y| pair.distance(y), x.coords(), 1e-6);
        let diff: Vec<f64> = dir.iter().zip(&grad).map(|(a, b)| a - b).collect();
        ensure(pair.space().tangent_norm(&diff) < 1e-6, || format!("{:?}", pair.submanifold()))?;
    }
    Ok(())
}

fn kernel_values() -> Check {
    let inv = 0.398_942_280_401_432_7;
    ensure((gauss_weierstrass(1.0, 0.0, 1).unwrap().value - inv).abs() < 1e-15, || "Gauss-Weierstrass at 0".into())?;
    ensure(q_kernel(0.7, 0.4, 3, 3).is_err(), || "q accepted n = m".into())?;
    let h = h2_in_h3_integrated(1.0, 0.0).unwrap().value;
    ensure((h - inv * (-0.5f64).exp()).abs() < 1e-15, || format!("H2 in H3 at d=0: {h}"))?;
    let mass = trapezoid(|th: f64| circle_kernel(0.5, th.min(TAU - th), 1e-16).unwrap().value, 0.0, TAU, 400);
    ensure((mass - 1.0).abs() < 1e-12, || format!("circle kernel mass {mass}"))
}

fn flat_estimate_is_exact() -> Check {
    let pair = ModelPair::euclidean_affine(3, 1).unwrap();
    let x0 = pair.point_at_distance(1.0, Side::Exterior).unwrap();
    let mut cfg = BridgeConfig::new(pair, x0, 1.0).with_h_max(1e-2);
    cfg.n_paths = 200;
    let e = estimate_integrated_kernel(&cfg).map_err(|e| e.to_string())?;
    ensure(e.stderr == 0.0 && Some(e.mean) == e.reference, || format!("{e:?}"))
}

fn determinism() -> Check {
    let pair = ModelPair::hyperbolic_totally_geodesic(3, 2, -1.0).unwrap();
    let x0 = pair.point_at_distance(0.5, Side::Exterior).unwrap();
    let mut cfg = BridgeConfig::new(pair, x0, 1.0).with_h_max(1e-2);
    cfg.n_paths = 256;
    cfg.seed = 5;
    let a = with_workers(1, || run_bridge(&cfg).map(|r| r.1)).map_err(|e| e.to_string())?.map_err(|e| e.to_string())?;
    let b = with_workers(2, || run_bridge(&cfg).map(|r| r.1)).map_err(|e| e.to_string())?.map_err(|e| e.to_string())?;
    ensure(a == b, || "records differ across worker counts".into())
}

fn flat_verifiers() -> Check {
    let pair = ModelPair::euclidean_affine(3, 2).unwrap();
    let b = verify_bounds(&pair, &[0.01, 0.1, 1.0], &[0.0, 1.0, 2.0], 4.0, &[]).map_err(|e| e.to_string())?;
    ensure(b.passed() && b.rows.iter().all(|r| r.lower == r.value), || "flat bounds".into())?;
    let v = verify_varadhan(&pair, &[0.5, 1.0], &[1e-2, 1e-3, 1e-4]).map_err(|e| e.to_string())?;
    ensure(v.max_abs_limit() < 1e-10, || format!("flat Varadhan limit {}", v.max_abs_limit()))?;
    let g = verify_gradient_hessian(&pair, &[0.1, 0.5], &[0.5, 1.0]).map_err(|e| e.to_string())?;
    ensure(g.c_grad <= 1.0 + 1e-5, || format!("flat gradient constant {}", g.c_grad))
}

/// Runs every check, printing one line each; `perturb` scales the closed-form Laplacian.
pub fn selftest(perturb: f64) -> bool {
    type Named = (&'static str, Box<dyn Fn() -> Check>);
    let checks: Vec<Named> = vec![
        ("laplacian closed forms vs finite differences", Box::new(move || laplacian_closed_form(perturb))),
        ("radial direction is the distance gradient", Box::new(radial_direction_is_gradient)),
        ("closed-form kernel values", Box::new(kernel_values)),
        ("flat estimator is exact", Box::new(flat_estimate_is_exact)),
        ("worker-count determinism", Box::new(determinism)),
        ("flat bounds, Varadhan and gradient", Box::new(flat_verifiers)),
    ];
    let mut ok = true;
    for (name, check) in checks {
        match check() {
            Ok(()) => println!("ok   {name}"),
            Err(e) => {
                ok = false;
                println!("FAIL {name}: {e}");
            }
        }
    }
    ok
}
