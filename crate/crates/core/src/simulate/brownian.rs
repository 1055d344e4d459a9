//! Brownian motion and exact Euclidean bridges.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{config, Result};
use crate::geometry::{GeometryPoint, ModelPair, SpaceForm, SpaceKind, SubmanifoldModel};

/// One Brownian step of duration `h` from `x` into `out`.
///
/// Exact Gaussian increments in `R^m`, wrapped exact increments on the circle,
/// and a tangent Gaussian of covariance `h Id` pushed through `exp` on the hyperboloid.
pub fn brownian_step_into<R: Rng + ?Sized>(
    space: &SpaceForm,
    x: &[f64],
    h: f64,
    rng: &mut R,
    noise: &mut [f64],
    out: &mut [f64],
) {
    space.sample_tangent_into(x, h, rng, noise);
    space.exp_into(x, noise, out);
}

/// Drift-free path on `grid`, starting at `x0`.
pub fn sample_brownian_path<R: Rng + ?Sized>(
    pair: &ModelPair,
    x0: &GeometryPoint,
    grid: &[f64],
    rng: &mut R,
) -> Result<Vec<GeometryPoint>> {
    pair.check_point(x0.coords())?;
    if grid.is_empty() || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(config("time grid must be non-empty and strictly increasing"));
    }
    let space = pair.space();
    let mut noise = vec![0.0; space.ambient_len()];
    let mut path = Vec::with_capacity(grid.len());
    path.push(x0.clone());
    for w in grid.windows(2) {
        let last = path.last().expect("non-empty path");
        let mut next = vec![0.0; space.ambient_len()];
        brownian_step_into(space, last.coords(), w[1] - w[0], rng, &mut noise, &mut next);
        path.push(GeometryPoint(next));
    }
    Ok(path)
}

/// Exact bridge from `x0` to the affine subspace at time `T`, sampled on `grid` (which must start at 0).
///
/// Normal coordinates are Brownian bridges to 0 at `T`; tangential coordinates are free Brownian motions.
pub fn sample_exact_euclidean_bridge<R: Rng + ?Sized>(
    pair: &ModelPair,
    x0: &GeometryPoint,
    t_total: f64,
    grid: &[f64],
    rng: &mut R,
) -> Result<Vec<GeometryPoint>> {
    let n = match (pair.space().kind(), pair.submanifold()) {
        (SpaceKind::Euclidean, SubmanifoldModel::AffineSubspace { n }) => *n,
        _ => return Err(config("exact bridges are only available for affine subspaces of R^m")),
    };
    pair.check_point(x0.coords())?;
    if grid.first() != Some(&0.0) || grid.windows(2).any(|w| w[1] <= w[0]) || grid.last().is_some_and(|&t| t > t_total)
    {
        return Err(config("bridge grid must start at 0, increase strictly and end by T"));
    }
    let m = pair.m();
    let mut path = Vec::with_capacity(grid.len());
    let mut x = x0.0.clone();
    path.push(x0.clone());
    for w in grid.windows(2) {
        let (s, t) = (w[0], w[1]);
        let h = t - s;
        for (i, xi) in x.iter_mut().enumerate() {
            let z: f64 = rng.sample(StandardNormal);
            if i < n {
                *xi += h.sqrt() * z;
            } else if t >= t_total {
                *xi = 0.0;
            } else {
                // Brownian bridge to 0 at T: mean shrinks linearly, conditional variance h (T - t)/(T - s)
                let rem = t_total - s;
                *xi = *xi * (t_total - t) / rem + (h * (t_total - t) / rem).sqrt() * z;
            }
        }
        path.push(GeometryPoint(x.clone()));
    }
    debug_assert_eq!(x.len(), m);
    Ok(path)
}
