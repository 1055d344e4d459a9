//! Closed-form geometry of the supported (ambient, submanifold) pairs.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::space::{angle_offset, minkowski, wrap_angle, GeometryPoint, SpaceForm, SpaceKind};
use crate::error::{config, domain, Result};

/// Points within this distance of `N` or of the cut locus count as lying on it.
pub const LOCUS_TOL: f64 = 1e-12;

/// A model submanifold `N`.
///
/// `AffineSubspace { n }` is the span of the first `n` coordinate axes and
/// `TotallyGeodesic { n }` is the copy of `H^n` cut out by vanishing of the
/// spatial coordinates `n+1..=m`. `CenteredSphere` is `S^{m-1}(radius)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SubmanifoldModel {
    Point { basepoint: GeometryPoint },
    AffineSubspace { n: usize },
    CenteredSphere { radius: f64 },
    TotallyGeodesic { n: usize },
    CirclePoint { theta0: f64 },
}

/// Constants in `1/2 Lap r^2 <= nu + lambda r^2` and in the curvature conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonConstants {
    pub nu: f64,
    pub lambda: f64,
    pub c1: f64,
    pub c2: f64,
    pub big_lambda: f64,
}

impl ComparisonConstants {
    /// `n Lambda + (m - 1) C1`.
    pub fn alpha(&self, m: usize, n: usize) -> f64 {
        n as f64 * self.big_lambda + (m as f64 - 1.0) * self.c1
    }

    /// `(m - 1) C2`.
    pub fn beta(&self, m: usize) -> f64 {
        (m as f64 - 1.0) * self.c2
    }
}

/// Which side of a hypersurface a probe point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    #[default]
    Exterior,
    Interior,
}

/// A validated (M, N) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelPair {
    space: SpaceForm,
    sub: SubmanifoldModel,
}

impl ModelPair {
    pub fn new(space: SpaceForm, sub: SubmanifoldModel) -> Result<Self> {
        let m = space.m();
        match (&sub, space.kind()) {
            (SubmanifoldModel::Point { basepoint }, SpaceKind::Euclidean | SpaceKind::Hyperbolic) => {
                space.check_point(basepoint.coords())?;
            }
            (SubmanifoldModel::AffineSubspace { n }, SpaceKind::Euclidean) => {
                if *n >= m {
                    return Err(config(format!("affine subspace dimension {n} must be below m = {m}")));
                }
            }
            (SubmanifoldModel::CenteredSphere { radius }, SpaceKind::Euclidean) => {
                if m < 2 {
                    return Err(config("centered sphere needs m >= 2"));
                }
                if !(*radius > 0.0) || !radius.is_finite() {
                    return Err(config(format!("sphere radius must be positive, got {radius}")));
                }
            }
            (SubmanifoldModel::TotallyGeodesic { n }, SpaceKind::Hyperbolic) => {
                if *n >= m {
                    return Err(config(format!("totally geodesic dimension {n} must be below m = {m}")));
                }
            }
            (SubmanifoldModel::CirclePoint { theta0 }, SpaceKind::Circle) => {
                if !theta0.is_finite() {
                    return Err(config("circle basepoint must be finite"));
                }
                let sub = SubmanifoldModel::CirclePoint { theta0: wrap_angle(*theta0) };
                return Ok(Self { space, sub });
            }
            (sub, kind) => {
                return Err(config(format!("unsupported pair: {sub:?} inside {kind:?}")));
            }
        }
        Ok(Self { space, sub })
    }

    /// `(R^m, R^n)` with `R^n` the span of the first `n` axes.
    pub fn euclidean_affine(m: usize, n: usize) -> Result<Self> {
        Self::new(SpaceForm::euclidean(m)?, SubmanifoldModel::AffineSubspace { n })
    }

    pub fn euclidean_point(m: usize) -> Result<Self> {
        let basepoint = GeometryPoint(vec![0.0; m]);
        Self::new(SpaceForm::euclidean(m)?, SubmanifoldModel::Point { basepoint })
    }

    pub fn euclidean_sphere(m: usize, radius: f64) -> Result<Self> {
        Self::new(SpaceForm::euclidean(m)?, SubmanifoldModel::CenteredSphere { radius })
    }

    pub fn hyperbolic_totally_geodesic(m: usize, n: usize, kappa: f64) -> Result<Self> {
        Self::new(SpaceForm::hyperbolic(m, kappa)?, SubmanifoldModel::TotallyGeodesic { n })
    }

    pub fn hyperbolic_point(m: usize, kappa: f64) -> Result<Self> {
        let space = SpaceForm::hyperbolic(m, kappa)?;
        let basepoint = space.origin();
        Self::new(space, SubmanifoldModel::Point { basepoint })
    }

    pub fn circle_point(theta0: f64) -> Result<Self> {
        Self::new(SpaceForm::circle(), SubmanifoldModel::CirclePoint { theta0 })
    }

    pub fn space(&self) -> &SpaceForm {
        &self.space
    }

    pub fn submanifold(&self) -> &SubmanifoldModel {
        &self.sub
    }

    pub fn m(&self) -> usize {
        self.space.m()
    }

    /// Dimension of `N`.
    pub fn n(&self) -> usize {
        match &self.sub {
            SubmanifoldModel::Point { .. } | SubmanifoldModel::CirclePoint { .. } => 0,
            SubmanifoldModel::AffineSubspace { n } | SubmanifoldModel::TotallyGeodesic { n } => *n,
            SubmanifoldModel::CenteredSphere { .. } => self.m() - 1,
        }
    }

    pub fn codimension(&self) -> usize {
        self.m() - self.n()
    }

    /// True when the cut locus is non-empty and not polar, so that it carries local time.
    pub fn has_charged_cut_locus(&self) -> bool {
        matches!(self.sub, SubmanifoldModel::CirclePoint { .. })
    }

    /// Distance `r_N(x)`.
    pub fn distance(&self, x: &[f64]) -> f64 {
        match &self.sub {
            SubmanifoldModel::Point { basepoint } => self.space.distance(x, basepoint.coords()),
            SubmanifoldModel::AffineSubspace { n } => norm(&x[*n..]),
            SubmanifoldModel::CenteredSphere { radius } => (norm(x) - radius).abs(),
            SubmanifoldModel::TotallyGeodesic { n } => {
                let c = self.space.curvature_scale();
                (c * norm(&x[n + 1..])).asinh() / c
            }
            SubmanifoldModel::CirclePoint { theta0 } => angle_offset(x[0], *theta0).abs(),
        }
    }

    /// Closest point of `N`, or `None` on the cut locus.
    pub fn foot_point(&self, x: &[f64]) -> Option<GeometryPoint> {
        match &self.sub {
            SubmanifoldModel::Point { basepoint } => Some(basepoint.clone()),
            SubmanifoldModel::AffineSubspace { n } => {
                let mut y = x.to_vec();
                y[*n..].iter_mut().for_each(|v| *v = 0.0);
                Some(GeometryPoint(y))
            }
            SubmanifoldModel::CenteredSphere { radius } => {
                let r = norm(x);
                (r > LOCUS_TOL).then(|| GeometryPoint(x.iter().map(|v| v * radius / r).collect()))
            }
            SubmanifoldModel::TotallyGeodesic { n } => {
                let c = self.space.curvature_scale();
                let scale = 1.0 / (c * norm(&x[n + 1..])).hypot(1.0);
                let mut y: Vec<f64> = x.iter().map(|v| v * scale).collect();
                y[n + 1..].iter_mut().for_each(|v| *v = 0.0);
                self.space.normalize(&mut y);
                Some(GeometryPoint(y))
            }
            SubmanifoldModel::CirclePoint { theta0 } => {
                (self.cut_locus_distance(x) > LOCUS_TOL).then(|| GeometryPoint(vec![*theta0]))
            }
        }
    }

    /// Unit radial vector `d/dr_N` at `x` in ambient coordinates, zero on `N` and on the cut locus.
    pub fn radial_direction_into(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        let r = self.distance(x);
        if r <= LOCUS_TOL || self.cut_locus_distance(x) <= LOCUS_TOL {
            return;
        }
        match &self.sub {
            SubmanifoldModel::Point { basepoint } => {
                let b = basepoint.coords();
                match self.space.kind() {
                    SpaceKind::Hyperbolic => {
                        let c = self.space.curvature_scale();
                        let (sh, ch) = ((c * r).sinh(), (c * r).cosh());
                        for i in 0..out.len() {
                            out[i] = c / sh * (ch * x[i] - b[i]);
                        }
                    }
                    _ => {
                        for i in 0..out.len() {
                            out[i] = (x[i] - b[i]) / r;
                        }
                    }
                }
            }
            SubmanifoldModel::AffineSubspace { n } => {
                for i in *n..out.len() {
                    out[i] = x[i] / r;
                }
            }
            SubmanifoldModel::CenteredSphere { radius } => {
                let rho = norm(x);
                let sign = if rho > *radius { 1.0 } else { -1.0 };
                for i in 0..out.len() {
                    out[i] = sign * x[i] / rho;
                }
            }
            SubmanifoldModel::TotallyGeodesic { n } => {
                let c = self.space.curvature_scale();
                let normal = norm(&x[n + 1..]);
                let (th, ch) = ((c * r).tanh(), (c * r).cosh());
                for i in 0..=*n {
                    out[i] = c * th * x[i];
                }
                for i in n + 1..out.len() {
                    out[i] = ch * x[i] / normal;
                }
            }
            SubmanifoldModel::CirclePoint { theta0 } => {
                out[0] = angle_offset(x[0], *theta0).signum();
            }
        }
    }

    pub fn radial_direction(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.space.ambient_len()];
        self.radial_direction_into(x, &mut out);
        out
    }

    /// `r_N(x) * d/dr_N log Theta_N(x)`, a smooth function of `r_N` set to 0 on `N` and the cut locus.
    pub fn r_log_theta(&self, x: &[f64]) -> f64 {
        let r = self.distance(x);
        if r <= LOCUS_TOL || self.cut_locus_distance(x) <= LOCUS_TOL {
            return 0.0;
        }
        self.r_log_theta_at(x, r)
    }

    fn r_log_theta_at(&self, x: &[f64], r: f64) -> f64 {
        let m = self.m() as f64;
        match &self.sub {
            SubmanifoldModel::AffineSubspace { .. } | SubmanifoldModel::CirclePoint { .. } => 0.0,
            SubmanifoldModel::Point { .. } => match self.space.kind() {
                SpaceKind::Hyperbolic => hyperbolic_g(self.space.curvature_scale() * r, self.m(), 0),
                _ => 0.0,
            },
            SubmanifoldModel::CenteredSphere { radius } => {
                let rho = norm(x);
                let sign = if rho > *radius { 1.0 } else { -1.0 };
                sign * (m - 1.0) * r / rho
            }
            SubmanifoldModel::TotallyGeodesic { n } => hyperbolic_g(self.space.curvature_scale() * r, self.m(), *n),
        }
    }

    /// Radial log-derivative `d/dr_N log Theta_N(x)` of the normal-exponential Jacobian.
    pub fn radial_log_theta(&self, x: &[f64]) -> Result<f64> {
        let r = self.distance(x);
        if r <= LOCUS_TOL {
            return Err(domain("radial_log_theta is undefined on N"));
        }
        if self.cut_locus_distance(x) <= LOCUS_TOL {
            return Err(domain("radial_log_theta is undefined on the cut locus"));
        }
        Ok(self.r_log_theta_at(x, r) / r)
    }

    /// `1/2 Lap r_N^2 = (m - n) + r_N d/dr_N log Theta_N`.
    pub fn laplacian_r_squared_half(&self, x: &[f64]) -> Result<f64> {
        let r = self.distance(x);
        Ok(self.codimension() as f64 + r * self.radial_log_theta(x)?)
    }

    /// Hard-coded constants, each checked on a grid by the test suite.
    pub fn comparison_constants(&self) -> ComparisonConstants {
        let m = self.m() as f64;
        let n = self.n() as f64;
        let zero = ComparisonConstants { nu: m - n, lambda: 0.0, c1: 0.0, c2: 0.0, big_lambda: 0.0 };
        match &self.sub {
            SubmanifoldModel::AffineSubspace { .. } | SubmanifoldModel::CirclePoint { .. } => zero,
            SubmanifoldModel::CenteredSphere { radius } => {
                ComparisonConstants { nu: m, big_lambda: 1.0 / radius, ..zero }
            }
            SubmanifoldModel::Point { .. } | SubmanifoldModel::TotallyGeodesic { .. } => {
                let c1 = self.space.curvature_scale();
                let alpha = (m - 1.0) * c1;
                ComparisonConstants { nu: m - n + alpha / 2.0, lambda: alpha / 2.0, c1, ..zero }
            }
        }
    }

    /// Distance from `x` to the cut locus of `N` (infinite when empty).
    pub fn cut_locus_distance(&self, x: &[f64]) -> f64 {
        match &self.sub {
            SubmanifoldModel::CenteredSphere { .. } => norm(x),
            SubmanifoldModel::CirclePoint { theta0 } => PI - angle_offset(x[0], *theta0).abs(),
            _ => f64::INFINITY,
        }
    }

    /// Signed angular offset of a circle point from the antipode of the basepoint, in `(-pi, pi]`.
    ///
    /// Positive offsets lie on the side reached from the basepoint by negative rotation.
    pub fn cut_offset(&self, x: &[f64]) -> Option<f64> {
        match &self.sub {
            SubmanifoldModel::CirclePoint { theta0 } => Some(angle_offset(x[0], theta0 + PI)),
            _ => None,
        }
    }

    /// Signed distance to a hypersurface `N`, positive on the exterior side; `None` unless codimension is one.
    pub fn signed_distance(&self, x: &[f64]) -> Option<f64> {
        if self.codimension() != 1 {
            return None;
        }
        let m = self.m();
        Some(match &self.sub {
            SubmanifoldModel::Point { basepoint } => x[0] - basepoint.0[0],
            SubmanifoldModel::AffineSubspace { .. } => x[m - 1],
            SubmanifoldModel::CenteredSphere { radius } => norm(x) - radius,
            SubmanifoldModel::TotallyGeodesic { .. } => {
                let c = self.space.curvature_scale();
                (c * x[m]).asinh() / c
            }
            SubmanifoldModel::CirclePoint { theta0 } => angle_offset(x[0], *theta0),
        })
    }

    /// A point at distance `d` from `N`.
    ///
    /// Points are placed along the last coordinate axis, or the first one for
    /// spheres. For spheres `side` selects the exterior or interior; the
    /// interior requires `d <= radius`. Circle points need `d <= pi`.
    pub fn point_at_distance(&self, d: f64, side: Side) -> Result<GeometryPoint> {
        if !(d >= 0.0) || !d.is_finite() {
            return Err(config(format!("distance must be finite and non-negative, got {d}")));
        }
        let m = self.m();
        let len = self.space.ambient_len();
        let p = match &self.sub {
            SubmanifoldModel::Point { basepoint } => match self.space.kind() {
                SpaceKind::Hyperbolic => {
                    let b = basepoint.coords();
                    let mut e = vec![0.0; len];
                    self.space.frame_vector_into(b, m - 1, &mut e);
                    self.space.geodesic_point(b, &e, d)
                }
                _ => {
                    let mut v = basepoint.0.clone();
                    v[m - 1] += d;
                    GeometryPoint(v)
                }
            },
            SubmanifoldModel::AffineSubspace { .. } => {
                let mut v = vec![0.0; len];
                v[m - 1] = d;
                GeometryPoint(v)
            }
            SubmanifoldModel::CenteredSphere { radius } => {
                let rho = match side {
                    Side::Exterior => radius + d,
                    Side::Interior if d <= *radius => radius - d,
                    Side::Interior => {
                        return Err(config(format!("interior distance {d} exceeds sphere radius {radius}")))
                    }
                };
                let mut v = vec![0.0; len];
                v[0] = rho;
                GeometryPoint(v)
            }
            SubmanifoldModel::TotallyGeodesic { .. } => {
                let c = self.space.curvature_scale();
                let mut v = vec![0.0; len];
                v[0] = (c * d).cosh() / c;
                v[m] = (c * d).sinh() / c;
                self.space.normalize(&mut v);
                GeometryPoint(v)
            }
            SubmanifoldModel::CirclePoint { theta0 } => {
                if d > PI {
                    return Err(config(format!("circle distance {d} exceeds pi")));
                }
                GeometryPoint(vec![wrap_angle(theta0 + d)])
            }
        };
        Ok(p)
    }

    /// Maps `n` coordinates onto `N` by a closed-form parametrisation.
    ///
    /// Affine: the coordinates themselves. Totally geodesic: the point of `H^n`
    /// with those spatial coordinates. Sphere: `m - 1` spherical angles.
    /// Points: the basepoint.
    pub fn point_on_submanifold(&self, u: &[f64]) -> GeometryPoint {
        let len = self.space.ambient_len();
        match &self.sub {
            SubmanifoldModel::Point { basepoint } => basepoint.clone(),
            SubmanifoldModel::CirclePoint { theta0 } => GeometryPoint(vec![*theta0]),
            SubmanifoldModel::AffineSubspace { n } => {
                let mut v = vec![0.0; len];
                v[..*n].copy_from_slice(&u[..*n]);
                GeometryPoint(v)
            }
            SubmanifoldModel::TotallyGeodesic { n } => {
                let mut v = vec![0.0; len];
                v[1..=*n].copy_from_slice(&u[..*n]);
                self.space.normalize(&mut v);
                GeometryPoint(v)
            }
            SubmanifoldModel::CenteredSphere { radius } => {
                let m = self.m();
                let mut v = vec![*radius; m];
                for (k, angle) in u.iter().take(m - 1).enumerate() {
                    v[k] *= angle.cos();
                    for vj in v.iter_mut().skip(k + 1) {
                        *vj *= angle.sin();
                    }
                }
                GeometryPoint(v)
            }
        }
    }

    /// Checks that `x` is a valid point of the ambient space.
    pub fn check_point(&self, x: &[f64]) -> Result<()> {
        self.space.check_point(x)
    }

    /// Minkowski or Euclidean norm check used by the hyperboloid invariant tests.
    pub fn constraint_residual(&self, x: &[f64]) -> f64 {
        match self.space.kind() {
            SpaceKind::Hyperbolic => (minkowski(x, x) - 1.0 / self.space.kappa()).abs(),
            _ => 0.0,
        }
    }
}

/// `g(r) = (m - n - 1)(cr coth cr - 1) + n cr tanh cr`, evaluated at `s = c r`.
fn hyperbolic_g(s: f64, m: usize, n: usize) -> f64 {
    let k = (m - n - 1) as f64;
    let coth_term = if s < 1e-4 { s * s / 3.0 - s.powi(4) / 45.0 } else { s / s.tanh() - 1.0 };
    k * coth_term + n as f64 * s * s.tanh()
}

#[inline]
pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_distances() {
        let s = ModelPair::euclidean_sphere(2, 1.0).unwrap();
        assert_eq!(s.distance(&[2.0, 0.0]), 1.0);
        let c = ModelPair::circle_point(0.0).unwrap();
        assert!((c.distance(&[PI]) - PI).abs() < 1e-15);
        let h = ModelPair::hyperbolic_totally_geodesic(3, 2, -1.0).unwrap();
        let x = h.point_at_distance(0.7, Side::Exterior).unwrap();
        assert!((h.distance(&x.0) - 0.7).abs() < 1e-14);
    }

    #[test]
    fn sphere_radial_direction() {
        let s = ModelPair::euclidean_sphere(2, 1.0).unwrap();
        assert_eq!(s.radial_direction(&[2.0, 0.0]), vec![1.0, 0.0]);
        assert_eq!(s.radial_direction(&[0.5, 0.0]), vec![-1.0, 0.0]);
        assert_eq!(s.radial_direction(&[0.0, 0.0]), vec![0.0, 0.0]);
        assert_eq!(s.radial_direction(&[1.0, 0.0]), vec![0.0, 0.0]);
    }

    #[test]
    fn log_theta_closed_forms() {
        let s = ModelPair::euclidean_sphere(2, 1.0).unwrap();
        assert!((s.radial_log_theta(&[2.0, 0.0]).unwrap() - 0.5).abs() < 1e-15);
        assert!((s.laplacian_r_squared_half(&[2.0, 0.0]).unwrap() - 1.5).abs() < 1e-15);
        assert!((s.radial_log_theta(&[0.5, 0.0]).unwrap() + 2.0).abs() < 1e-15);
        assert!(s.radial_log_theta(&[0.0, 0.0]).is_err());
        assert!(s.radial_log_theta(&[1.0, 0.0]).is_err());

        let a = ModelPair::euclidean_affine(3, 1).unwrap();
        assert_eq!(a.radial_log_theta(&[0.3, 1.0, -2.0]).unwrap(), 0.0);
        assert_eq!(a.laplacian_r_squared_half(&[0.3, 1.0, -2.0]).unwrap(), 2.0);

        let h = ModelPair::hyperbolic_totally_geodesic(3, 2, -1.0).unwrap();
        let x = h.point_at_distance(0.7, Side::Exterior).unwrap();
        let want = 1.0 + 0.7 * 2.0 * 0.7f64.tanh();
        assert!((h.laplacian_r_squared_half(&x.0).unwrap() - want).abs() < 1e-13);
        // high-precision oracle
        assert!((want - 1.846_114_887_964_028_8).abs() < 1e-15);

        let c = ModelPair::circle_point(0.0).unwrap();
        assert_eq!(c.radial_log_theta(&[1.0]).unwrap(), 0.0);
        assert!(c.radial_log_theta(&[PI]).is_err());
    }

    #[test]
    fn cut_locus_distances() {
        let s = ModelPair::euclidean_sphere(2, 1.0).unwrap();
        assert_eq!(s.cut_locus_distance(&[2.0, 0.0]), 2.0);
        let h = ModelPair::hyperbolic_totally_geodesic(3, 2, -1.0).unwrap();
        assert_eq!(h.cut_locus_distance(&h.space().origin().0), f64::INFINITY);
        let c = ModelPair::circle_point(0.0).unwrap();
        assert!((c.cut_locus_distance(&[PI / 2.0]) - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn comparison_constants_table() {
        let a = ModelPair::euclidean_affine(3, 1).unwrap().comparison_constants();
        assert_eq!((a.nu, a.lambda), (2.0, 0.0));
        let h = ModelPair::hyperbolic_totally_geodesic(3, 2, -1.0).unwrap().comparison_constants();
        assert_eq!((h.nu, h.lambda, h.c1, h.big_lambda), (2.0, 1.0, 1.0, 0.0));
        assert_eq!(h.alpha(3, 2), 2.0);
        let s = ModelPair::euclidean_sphere(2, 1.0).unwrap().comparison_constants();
        assert_eq!((s.nu, s.lambda), (2.0, 0.0));
    }

    #[test]
    fn rejects_unsupported_pairs() {
        let e = SpaceForm::euclidean(3).unwrap();
        let h = SpaceForm::hyperbolic(3, -1.0).unwrap();
        assert!(ModelPair::new(e, SubmanifoldModel::TotallyGeodesic { n: 2 }).is_err());
        assert!(ModelPair::new(h, SubmanifoldModel::AffineSubspace { n: 2 }).is_err());
        assert!(ModelPair::new(h, SubmanifoldModel::CenteredSphere { radius: 1.0 }).is_err());
        assert!(ModelPair::new(e, SubmanifoldModel::AffineSubspace { n: 3 }).is_err());
        assert!(ModelPair::new(SpaceForm::circle(), SubmanifoldModel::AffineSubspace { n: 0 }).is_err());
        assert!(ModelPair::new(e, SubmanifoldModel::CirclePoint { theta0: 0.0 }).is_err());
    }

    #[test]
    fn sphere_parametrisation_lies_on_sphere() {
        let s = ModelPair::euclidean_sphere(4, 1.5).unwrap();
        let y = s.point_on_submanifold(&[0.3, 2.0, -1.0]);
        assert!(s.distance(&y.0) < 1e-14);
    }
}
