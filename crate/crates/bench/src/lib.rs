//! Criterion benchmarks for kernels and path throughput.

use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{BenchmarkId, Criterion, Throughput};
use fermi_bridge::kernels::{circle_in_plane_integrated, circle_kernel, h2_in_h3_integrated, hyperbolic3_kernel};
use fermi_bridge::simulate::{bridge_band_occupation, path_rng, simulate_bridge_path};
use fermi_bridge::{BridgeConfig, GeometryPoint, ModelPair, Side};

fn kernels(c: &mut Criterion) {
    let mut g = c.benchmark_group("kernels");
    g.bench_function("circle_kernel_antipode", |b| b.iter(|| circle_kernel(black_box(1.0), black_box(PI), 1e-16)));
    g.bench_function("circle_in_plane", |b| b.iter(|| circle_in_plane_integrated(black_box(1.0), black_box(2.0), 1.0)));
    g.bench_function("h2_in_h3", |b| b.iter(|| h2_in_h3_integrated(black_box(1.0), black_box(1.0))));
    g.bench_function("hyperbolic3", |b| b.iter(|| hyperbolic3_kernel(black_box(0.5), black_box(1.0), -1.0)));
    g.bench_function("bridge_band_occupation", |b| {
        b.iter(|| bridge_band_occupation(black_box(0.003), black_box(-0.004), black_box(1e-4), black_box(0.005)))
    });
    g.finish();
}

fn bridge_configs() -> Vec<(&'static str, BridgeConfig)> {
    let h3 = ModelPair::hyperbolic_totally_geodesic(3, 2, -1.0).unwrap();
    let x_h3 = h3.point_at_distance(1.0, Side::Exterior).unwrap();
    let plane = ModelPair::euclidean_sphere(2, 1.0).unwrap();
    let circle = ModelPair::circle_point(0.0).unwrap();
    vec![
        ("h3_h2", BridgeConfig::new(h3, x_h3, 1.0)),
        ("r2_circle", BridgeConfig::new(plane, GeometryPoint::new(vec![2.0, 0.0]), 1.0)),
        ("s1_antipode", BridgeConfig::new(circle, GeometryPoint::new(vec![PI]), 1.0)),
    ]
}

fn paths(c: &mut Criterion) {
    let mut g = c.benchmark_group("bridge_path");
    for (name, cfg) in bridge_configs() {
        let grid = cfg.time_grid().unwrap();
        g.throughput(Throughput::Elements(grid.n_steps() as u64));
        g.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| {
            let mut i = 0;
            b.iter(|| {
                i += 1;
                simulate_bridge_path(cfg, &grid, &mut path_rng(0, i)).unwrap()
            })
        });
    }
    g.finish();
}

pub fn benchmarks(c: &mut Criterion) {
    kernels(c);
    paths(c);
}
