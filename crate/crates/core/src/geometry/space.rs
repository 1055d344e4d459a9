//! Ambient model manifolds and their point/tangent arithmetic.
//!
//! Euclidean points are plain coordinates. Hyperbolic space of curvature
//! `kappa < 0` is realised as the upper sheet of the hyperboloid
//! `<y, y> = 1/kappa` in Minkowski space with `<a, b> = -a0 b0 + sum ai bi`,
//! so a point of `H^m` carries `m + 1` coordinates. Circle points are a single
//! angle in `[0, 2pi)`.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{config, Result};

/// Tolerance for the hyperboloid constraint after every point-producing operation.
pub const HYPERBOLOID_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    Euclidean,
    Hyperbolic,
    Circle,
}

/// A model ambient manifold: `R^m`, `H^m_kappa` or the unit circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceForm {
    kind: SpaceKind,
    m: usize,
    kappa: f64,
}

/// A point in a [`SpaceForm`], stored in ambient coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GeometryPoint(pub Vec<f64>);

impl GeometryPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        Self(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

impl From<Vec<f64>> for GeometryPoint {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// Minkowski inner product `-a0 b0 + sum_{i>0} ai bi`.
#[inline]
pub fn minkowski(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = -a[0] * b[0];
    for i in 1..a.len() {
        acc += a[i] * b[i];
    }
    acc
}

/// Wraps an angle into `[0, 2pi)`.
#[inline]
pub fn wrap_angle(theta: f64) -> f64 {
    let w = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Signed angular offset `a - b` folded into `(-pi, pi]`.
#[inline]
pub fn angle_offset(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

impl SpaceForm {
    pub fn euclidean(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(config("Euclidean space needs dimension m >= 1"));
        }
        Ok(Self { kind: SpaceKind::Euclidean, m, kappa: 0.0 })
    }

    pub fn hyperbolic(m: usize, kappa: f64) -> Result<Self> {
        if m < 2 {
            return Err(config("hyperbolic space needs dimension m >= 2"));
        }
        if !(kappa < 0.0) || !kappa.is_finite() {
            return Err(config(format!("hyperbolic space needs finite kappa < 0, got {kappa}")));
        }
        Ok(Self { kind: SpaceKind::Hyperbolic, m, kappa })
    }

    pub fn circle() -> Self {
        Self { kind: SpaceKind::Circle, m: 1, kappa: 0.0 }
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    /// Intrinsic dimension.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// `sqrt(-kappa)` for hyperbolic space, 0 otherwise.
    pub fn curvature_scale(&self) -> f64 {
        match self.kind {
            SpaceKind::Hyperbolic => (-self.kappa).sqrt(),
            _ => 0.0,
        }
    }

    /// Number of stored coordinates per point.
    pub fn ambient_len(&self) -> usize {
        match self.kind {
            SpaceKind::Euclidean => self.m,
            SpaceKind::Hyperbolic => self.m + 1,
            SpaceKind::Circle => 1,
        }
    }

    /// The distinguished origin: `0`, the hyperboloid apex, or angle 0.
    pub fn origin(&self) -> GeometryPoint {
        let mut v = vec![0.0; self.ambient_len()];
        if self.kind == SpaceKind::Hyperbolic {
            v[0] = 1.0 / self.curvature_scale();
        }
        GeometryPoint(v)
    }

    pub fn is_valid_point(&self, x: &[f64]) -> bool {
        if x.len() != self.ambient_len() || x.iter().any(|c| !c.is_finite()) {
            return false;
        }
        match self.kind {
            SpaceKind::Euclidean => true,
            SpaceKind::Circle => (0.0..TAU).contains(&x[0]),
            SpaceKind::Hyperbolic => {
                let target = 1.0 / self.kappa;
                let scale = (x[0] * x[0]).max(1.0);
                x[0] > 0.0 && (minkowski(x, x) - target).abs() <= HYPERBOLOID_TOL * scale
            }
        }
    }

    pub fn check_point(&self, x: &[f64]) -> Result<()> {
        if self.is_valid_point(x) {
            Ok(())
        } else {
            Err(config(format!("point {x:?} is not a valid point of {:?}", self.kind)))
        }
    }

    /// Geodesic distance.
    pub fn distance(&self, x: &[f64], y: &[f64]) -> f64 {
        match self.kind {
            SpaceKind::Euclidean => x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt(),
            SpaceKind::Circle => angle_offset(x[0], y[0]).abs(),
            SpaceKind::Hyperbolic => {
                // chordal form, stable for nearby points
                let c = self.curvature_scale();
                let mut chord2 = -(x[0] - y[0]) * (x[0] - y[0]);
                for i in 1..x.len() {
                    chord2 += (x[i] - y[i]) * (x[i] - y[i]);
                }
                2.0 / c * (c * chord2.max(0.0).sqrt() / 2.0).asinh()
            }
        }
    }

    /// Projects a perturbed point back onto the manifold.
    ///
    /// On the hyperboloid the time coordinate is recomputed from the spatial
    /// ones, which restores `<y, y> = 1/kappa` without cancellation.
    pub fn normalize(&self, x: &mut [f64]) {
        match self.kind {
            SpaceKind::Euclidean => {}
            SpaceKind::Circle => x[0] = wrap_angle(x[0]),
            SpaceKind::Hyperbolic => {
                let spatial: f64 = x[1..].iter().map(|v| v * v).sum();
                x[0] = (-1.0 / self.kappa + spatial).sqrt();
            }
        }
    }

    /// Minkowski or Euclidean norm of a tangent vector.
    pub fn tangent_norm(&self, v: &[f64]) -> f64 {
        match self.kind {
            SpaceKind::Hyperbolic => minkowski(v, v).max(0.0).sqrt(),
            _ => v.iter().map(|a| a * a).sum::<f64>().sqrt(),
        }
    }

    /// Riemannian inner product of two tangent vectors at the same point.
    pub fn tangent_dot(&self, u: &[f64], v: &[f64]) -> f64 {
        match self.kind {
            SpaceKind::Hyperbolic => minkowski(u, v),
            _ => u.iter().zip(v).map(|(a, b)| a * b).sum(),
        }
    }

    /// Exponential map `exp_x(v)` written into `out`, followed by normalisation.
    pub fn exp_into(&self, x: &[f64], v: &[f64], out: &mut [f64]) {
        match self.kind {
            SpaceKind::Euclidean => {
                for ((o, a), b) in out.iter_mut().zip(x).zip(v) {
                    *o = a + b;
                }
            }
            SpaceKind::Circle => out[0] = wrap_angle(x[0] + v[0]),
            SpaceKind::Hyperbolic => {
                let c = self.curvature_scale();
                let norm = self.tangent_norm(v);
                let arg = c * norm;
                let (ch, sh_over) = if arg < 1e-8 {
                    (1.0 + arg * arg / 2.0, 1.0 + arg * arg / 6.0)
                } else {
                    (arg.cosh(), arg.sinh() / arg)
                };
                for i in 0..out.len() {
                    out[i] = ch * x[i] + sh_over * v[i];
                }
            }
        }
        self.normalize(out);
    }

    pub fn exp(&self, x: &[f64], v: &[f64]) -> GeometryPoint {
        let mut out = vec![0.0; self.ambient_len()];
        self.exp_into(x, v, &mut out);
        GeometryPoint(out)
    }

    /// Parallel transport of the apex frame vector `e_{i+1}` (spatial axis `i`) to `x`.
    ///
    /// For Euclidean space and the circle this is just the coordinate axis.
    /// The returned vectors form an orthonormal frame of `T_x M`.
    pub fn frame_vector_into(&self, x: &[f64], axis: usize, out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        match self.kind {
            SpaceKind::Euclidean | SpaceKind::Circle => out[axis] = 1.0,
            SpaceKind::Hyperbolic => {
                let mut u = vec![0.0; out.len()];
                u[axis + 1] = 1.0;
                self.transport_from_apex(x, &u, out);
            }
        }
    }

    /// Orthonormal frame of `T_x M` in ambient coordinates.
    pub fn tangent_frame(&self, x: &[f64]) -> Vec<Vec<f64>> {
        (0..self.m)
            .map(|axis| {
                let mut e = vec![0.0; self.ambient_len()];
                self.frame_vector_into(x, axis, &mut e);
                e
            })
            .collect()
    }

    // Transport of a tangent vector at the apex (u[0] == 0) along the geodesic to x.
    fn transport_from_apex(&self, x: &[f64], u: &[f64], out: &mut [f64]) {
        let c = self.curvature_scale();
        let x0 = c * x[0];
        let mut xu = 0.0;
        for i in 1..x.len() {
            xu += c * x[i] * u[i];
        }
        let coef = xu / (1.0 + x0);
        out[0] = u[0] + coef * (1.0 + x0);
        for i in 1..x.len() {
            out[i] = u[i] + coef * c * x[i];
        }
    }

    /// Fills `out` with an isotropic Gaussian tangent vector at `x` of covariance `variance * Id`.
    pub fn sample_tangent_into<R: Rng + ?Sized>(&self, x: &[f64], variance: f64, rng: &mut R, out: &mut [f64]) {
        let sd = variance.sqrt();
        match self.kind {
            SpaceKind::Euclidean | SpaceKind::Circle => {
                for o in out.iter_mut() {
                    let z: f64 = rng.sample(StandardNormal);
                    *o = sd * z;
                }
            }
            SpaceKind::Hyperbolic => {
                let c = self.curvature_scale();
                let x0 = c * x[0];
                let mut xu = 0.0;
                out[0] = 0.0;
                for i in 1..x.len() {
                    let z: f64 = rng.sample(StandardNormal);
                    out[i] = sd * z;
                    xu += c * x[i] * out[i];
                }
                let coef = xu / (1.0 + x0);
                out[0] = coef * (1.0 + x0);
                for i in 1..x.len() {
                    out[i] += coef * c * x[i];
                }
            }
        }
    }

    /// Point reached from `x` along the geodesic with initial unit velocity `dir` after length `s`.
    pub fn geodesic_point(&self, x: &[f64], dir: &[f64], s: f64) -> GeometryPoint {
        let v: Vec<f64> = dir.iter().map(|d| d * s).collect();
        self.exp(x, &v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hyperboloid_origin_is_valid() {
        let h = SpaceForm::hyperbolic(3, -2.0).unwrap();
        let o = h.origin();
        assert!(h.is_valid_point(o.coords()));
        assert!((minkowski(o.coords(), o.coords()) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_spaces() {
        assert!(SpaceForm::euclidean(0).is_err());
        assert!(SpaceForm::hyperbolic(3, 0.0).is_err());
        assert!(SpaceForm::hyperbolic(3, 1.0).is_err());
        assert!(SpaceForm::hyperbolic(1, -1.0).is_err());
    }

    #[test]
    fn hyperbolic_geodesic_has_unit_speed() {
        let h = SpaceForm::hyperbolic(3, -1.0).unwrap();
        let o = h.origin();
        let e = h.tangent_frame(o.coords());
        let p = h.geodesic_point(o.coords(), &e[0], 0.7);
        assert!((h.distance(o.coords(), p.coords()) - 0.7).abs() < 1e-13);
        // and from a generic point, with curvature -2
        let h2 = SpaceForm::hyperbolic(3, -2.0).unwrap();
        let mut base = vec![0.0, 0.3, -1.2, 0.5];
        h2.normalize(&mut base);
        let frame = h2.tangent_frame(&base);
        for (i, a) in frame.iter().enumerate() {
            assert!(minkowski(a, &base).abs() < 1e-12);
            for (j, b) in frame.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((minkowski(a, b) - want).abs() < 1e-12);
            }
            let q = h2.geodesic_point(&base, a, 1.3);
            assert!((h2.distance(&base, &q.0) - 1.3).abs() < 1e-12);
            assert!(h2.is_valid_point(&q.0));
        }
    }

    #[test]
    fn sampled_tangents_are_tangent() {
        let h = SpaceForm::hyperbolic(3, -1.0).unwrap();
        let mut x = vec![0.0, 1.0, 2.0, -0.5];
        h.normalize(&mut x);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut v = vec![0.0; 4];
        for _ in 0..100 {
            h.sample_tangent_into(&x, 0.01, &mut rng, &mut v);
            assert!(minkowski(&v, &x).abs() < 1e-12);
            let mut y = vec![0.0; 4];
            h.exp_into(&x, &v, &mut y);
            assert!(h.is_valid_point(&y));
        }
    }

    #[test]
    fn circle_wrapping() {
        assert_eq!(wrap_angle(-1e-300), 0.0);
        assert!((wrap_angle(-0.5) - (TAU - 0.5)).abs() < 1e-15);
        assert!((angle_offset(0.1, TAU - 0.1) - 0.2).abs() < 1e-15);
        let s = SpaceForm::circle();
        assert!((s.distance(&[0.0], &[PI]) - PI).abs() < 1e-15);
        assert!((s.distance(&[0.1], &[TAU - 0.1]) - 0.2).abs() < 1e-14);
    }
}
