use std::f64::consts::PI;

use fermi_bridge::estimate::{estimate_circle_with_cut_locus, estimate_integrated_kernel, estimate_mean_local_time};
use fermi_bridge::simulate::{run_bridge, with_workers, LocalTimeConfig};
use fermi_bridge::{BridgeConfig, EstimateResult, GeometryPoint, ModelPair, Side};
use proptest::prelude::*;

fn h3_config(d: f64, n_paths: usize, seed: u64) -> BridgeConfig {
    let pair = ModelPair::hyperbolic_totally_geodesic(3, 2, -1.0).unwrap();
    let x0 = pair.point_at_distance(d, Side::Exterior).unwrap();
    let mut cfg = BridgeConfig::new(pair, x0, 1.0).with_h_max(1e-2);
    cfg.n_paths = n_paths;
    cfg.seed = seed;
    cfg
}

#[test]
fn same_seed_same_records_any_worker_count() {
    let mut cfg = h3_config(0.5, 200, 11);
    cfg.observe = vec![0.3];
    let a = with_workers(1, || run_bridge(&cfg).unwrap().1).unwrap();
    let b = with_workers(2, || run_bridge(&cfg).unwrap().1).unwrap();
    let c = run_bridge(&cfg).unwrap().1;
    assert_eq!(a, b);
    assert_eq!(a, c);
    cfg.seed = 12;
    assert_ne!(a, run_bridge(&cfg).unwrap().1);
}

#[test]
fn bridge_ends_near_the_submanifold() {
    let mut cfg = h3_config(1.5, 500, 3);
    cfg.observe = vec![1.0 - 1e-4];
    let (_, recs) = run_bridge(&cfg).unwrap();
    for r in recs {
        // r ~ sqrt(cutoff) scale
        assert!(r.r_obs[0] < 0.1, "{}", r.r_obs[0]);
    }
}

#[test]
fn smaller_domains_kill_more_paths_earlier() {
    let mut small = h3_config(0.5, 400, 5);
    small.domain_radius = 0.8;
    let mut large = small.clone();
    large.domain_radius = 1.2;
    let (_, a) = run_bridge(&small).unwrap();
    let (_, b) = run_bridge(&large).unwrap();
    let mut killed_small = 0;
    for (ra, rb) in a.iter().zip(&b) {
        if let Some(tb) = rb.exited_at {
            let ta = ra.exited_at.expect("exit from the larger domain implies exit from the smaller one");
            assert!(ta <= tb);
        }
        killed_small += ra.exited_at.is_some() as usize;
    }
    let killed_large = b.iter().filter(|r| r.exited_at.is_some()).count();
    assert!(killed_small > killed_large);
    let (ea, eb) = (estimate_integrated_kernel(&small).unwrap(), estimate_integrated_kernel(&large).unwrap());
    assert!(ea.mean <= eb.mean);
}

#[test]
fn stderr_halves_when_paths_quadruple() {
    let a = estimate_integrated_kernel(&h3_config(1.0, 4_000, 21)).unwrap();
    let b = estimate_integrated_kernel(&h3_config(1.0, 16_000, 22)).unwrap();
    let ratio = a.stderr / b.stderr;
    assert!((ratio - 2.0).abs() < 0.4, "{ratio}");
}

fn cutoff_errors_shrink(e: &EstimateResult) {
    let reference = e.reference.unwrap();
    for w in e.cutoff_series.windows(2) {
        let (coarse, fine) = ((w[0].mean - reference).abs(), (w[1].mean - reference).abs());
        assert!(fine <= coarse + w[1].stderr, "{:?}", e.cutoff_series);
    }
}

#[test]
fn cutoff_series_converges_for_curved_pairs() {
    let mut cfg = h3_config(0.5, 20_000, 31);
    cfg.grid.h_max = 2e-3;
    cutoff_errors_shrink(&estimate_integrated_kernel(&cfg).unwrap());

    let pair = ModelPair::euclidean_sphere(2, 1.0).unwrap();
    let mut cfg = BridgeConfig::new(pair, GeometryPoint::new(vec![1.5, 0.0]), 1.0).with_h_max(2e-3);
    cfg.n_paths = 20_000;
    cfg.seed = 32;
    cutoff_errors_shrink(&estimate_integrated_kernel(&cfg).unwrap());
}

#[test]
fn circle_far_from_antipode_needs_no_correction() {
    let pair = ModelPair::circle_point(0.0).unwrap();
    let mut cfg = BridgeConfig::new(pair, GeometryPoint::new(vec![0.1]), 0.1);
    cfg.n_paths = 2_000;
    let e = estimate_circle_with_cut_locus(&cfg).unwrap();
    let q = e.q;
    assert!((e.estimate.mean / q - 1.0).abs() <= 1e-3);
    assert!((e.estimate.reference.unwrap() / q - 1.0).abs() <= 1e-3);
}

#[test]
fn flat_plane_local_time_keeps_growing() {
    let pair = ModelPair::euclidean_affine(3, 2).unwrap();
    let cfg = LocalTimeConfig {
        x0: GeometryPoint::new(vec![0.0; 3]),
        pair,
        t_grid: vec![1e3],
        n_paths: 400,
        seed: 8,
        eps_bands: vec![0.05],
        h_near: 1e-3,
        h_far: 1.0,
        freeze_radius: 1e9,
    };
    let e = &estimate_mean_local_time(&cfg).unwrap()[0].bands[0].1;
    // sqrt(2t / pi) ~ 25.2 against the hyperbolic limit 1
    assert!(e.mean > 10.0, "{}", e.mean);
    assert!((e.mean - e.reference.unwrap()).abs() < 4.0 * e.stderr + 0.05 * e.reference.unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn weights_are_non_negative_and_flat_weights_are_one(d in 0.0f64..2.0, seed in 0u64..1000, circle_start in 0.0f64..PI) {
        let (_, recs) = run_bridge(&h3_config(d, 50, seed)).unwrap();
        for r in &recs {
            for w in &r.log_weights {
                prop_assert!(!w.is_nan() && w.exp() >= 0.0);
            }
        }
        let pair = ModelPair::circle_point(0.0).unwrap();
        let mut cfg = BridgeConfig::new(pair, GeometryPoint::new(vec![circle_start]), 0.5).with_h_max(1e-2);
        cfg.n_paths = 50;
        cfg.seed = seed;
        for r in run_bridge(&cfg).unwrap().1 {
            prop_assert!(r.log_weights.iter().all(|w| *w >= 0.0));
            prop_assert!(r.log_weights_without_l.iter().all(|w| *w == 0.0));
        }
    }

    #[test]
    fn confidence_interval_is_symmetric(mean in -10.0f64..10.0, se in 0.0f64..3.0, n in 1usize..10_000) {
        let e = EstimateResult::new(mean, se, n, None);
        prop_assert!((e.ci95.0 - (mean - 1.96 * se)).abs() < 1e-12);
        prop_assert!((e.ci95.1 - (mean + 1.96 * se)).abs() < 1e-12);
    }
}
