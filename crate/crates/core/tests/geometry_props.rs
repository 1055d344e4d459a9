use fermi_bridge::geometry::{gradient_vector_fd, laplacian_fd};
use fermi_bridge::{GeometryPoint, ModelPair, SpaceKind};
use proptest::prelude::*;

fn pairs() -> Vec<ModelPair> {
    vec![
        ModelPair::euclidean_affine(3, 1).unwrap(),
        ModelPair::euclidean_affine(2, 1).unwrap(),
        ModelPair::euclidean_point(3).unwrap(),
        ModelPair::euclidean_sphere(2, 1.0).unwrap(),
        ModelPair::euclidean_sphere(3, 1.5).unwrap(),
        ModelPair::hyperbolic_totally_geodesic(3, 2, -1.0).unwrap(),
        ModelPair::hyperbolic_totally_geodesic(3, 1, -0.5).unwrap(),
        ModelPair::hyperbolic_point(3, -2.0).unwrap(),
        ModelPair::circle_point(0.7).unwrap(),
    ]
}

// a point from raw coordinates in [-1.5, 1.5]^3
fn point(pair: &ModelPair, raw: &[f64; 3]) -> GeometryPoint {
    let space = pair.space();
    match space.kind() {
        SpaceKind::Euclidean => GeometryPoint::new(raw[..pair.m()].to_vec()),
        SpaceKind::Hyperbolic => {
            let o = space.origin();
            let mut v = vec![0.0; space.ambient_len()];
            v[1..].copy_from_slice(&raw[..pair.m()]);
            space.exp(o.coords(), &v)
        }
        SpaceKind::Circle => GeometryPoint::new(vec![fermi_bridge::geometry::wrap_angle(2.0 * raw[0])]),
    }
}

fn regular(pair: &ModelPair, x: &[f64]) -> bool {
    pair.distance(x) > 0.05 && pair.cut_locus_distance(x) > 0.05
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn laplacian_of_half_r_squared_matches_finite_differences(raw in prop::array::uniform3(-1.5f64..1.5), k in 0usize..9) {
        let pair = &pairs()[k];
        let x = point(pair, &raw);
        prop_assume!(regular(pair, x.coords()));
        let exact = pair.laplacian_r_squared_half(x.coords()).unwrap();
        let fd = 0.5 * laplacian_fd(pair.space(), |y| pair.distance(y).powi(2), x.coords(), 1e-4);
        prop_assert!((exact - fd).abs() < 1e-4, "{exact} vs {fd}");
    }

    #[test]
    fn comparison_constants_bound_the_laplacian(raw in prop::array::uniform3(-1.5f64..1.5), k in 0usize..9) {
        let pair = &pairs()[k];
        let x = point(pair, &raw);
        prop_assume!(regular(pair, x.coords()));
        let c = pair.comparison_constants();
        let r = pair.distance(x.coords());
        let lap = pair.laplacian_r_squared_half(x.coords()).unwrap();
        prop_assert!(lap <= c.nu + c.lambda * r * r + 1e-12);
    }

    #[test]
    fn radial_direction_is_the_unit_gradient(raw in prop::array::uniform3(-1.5f64..1.5), k in 0usize..9) {
        let pair = &pairs()[k];
        let x = point(pair, &raw);
        prop_assume!(regular(pair, x.coords()));
        let dir = pair.radial_direction(x.coords());
        prop_assert!((pair.space().tangent_norm(&dir) - 1.0).abs() < 1e-9);
        let grad = gradient_vector_fd(pair.space(), |y| pair.distance(y), x.coords(), 1e-6);
        let diff: Vec<f64> = dir.iter().zip(&grad).map(|(a, b)| a - b).collect();
        prop_assert!(pair.space().tangent_norm(&diff) < 1e-6);
    }

    #[test]
    fn distance_to_n_is_at_most_distance_to_any_point_of_n(raw in prop::array::uniform3(-1.5f64..1.5), u in prop::array::uniform3(-2.0f64..2.0), k in 0usize..9) {
        let pair = &pairs()[k];
        let x = point(pair, &raw);
        let y = pair.point_on_submanifold(&u);
        prop_assert!(pair.distance(y.coords()) < 1e-9);
        prop_assert!(pair.distance(x.coords()) <= pair.space().distance(x.coords(), y.coords()) + 1e-9);
    }

    #[test]
    fn exp_stays_on_hyperboloid(raw in prop::array::uniform3(-1.5f64..1.5), v in prop::array::uniform3(-3.0f64..3.0)) {
        let pair = &pairs()[5];
        let x = point(pair, &raw);
        let frame = pair.space().tangent_frame(x.coords());
        let mut w = vec![0.0; 4];
        for (e, c) in frame.iter().zip(v) {
            for (wi, ei) in w.iter_mut().zip(e) {
                *wi += c * ei;
            }
        }
        let y = pair.space().exp(x.coords(), &w);
        let x0 = y.coords()[0];
        prop_assert!(pair.constraint_residual(y.coords()) <= 1e-9 * x0 * x0);
        let len = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        prop_assert!((pair.space().distance(x.coords(), y.coords()) - len).abs() < 1e-8 * (1.0 + len));
    }

    #[test]
    fn foot_point_realises_the_distance(raw in prop::array::uniform3(-1.5f64..1.5), k in 0usize..9) {
        let pair = &pairs()[k];
        let x = point(pair, &raw);
        if let Some(y) = pair.foot_point(x.coords()) {
            prop_assert!(pair.distance(y.coords()) < 1e-9);
            prop_assert!((pair.space().distance(x.coords(), y.coords()) - pair.distance(x.coords())).abs() < 1e-9);
        }
    }
}
