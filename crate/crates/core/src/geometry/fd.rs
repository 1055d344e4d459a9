//! Central finite differences along geodesics in an orthonormal frame.
//!
//! Second differences along geodesics give the covariant Hessian directly,
//! because geodesics have no acceleration.

use super::space::SpaceForm;

fn along<F: Fn(&[f64]) -> f64>(space: &SpaceForm, f: &F, x: &[f64], dir: &[f64], s: f64) -> f64 {
    let p = space.geodesic_point(x, dir, s);
    f(p.coords())
}

/// Gradient components in the orthonormal frame [`SpaceForm::tangent_frame`].
pub fn gradient_fd<F: Fn(&[f64]) -> f64>(space: &SpaceForm, f: F, x: &[f64], h: f64) -> Vec<f64> {
    space
        .tangent_frame(x)
        .iter()
        .map(|e| (along(space, &f, x, e, h) - along(space, &f, x, e, -h)) / (2.0 * h))
        .collect()
}

/// Gradient as an ambient tangent vector.
pub fn gradient_vector_fd<F: Fn(&[f64]) -> f64>(space: &SpaceForm, f: F, x: &[f64], h: f64) -> Vec<f64> {
    let frame = space.tangent_frame(x);
    let comps = gradient_fd(space, f, x, h);
    let mut out = vec![0.0; x.len()];
    for (e, g) in frame.iter().zip(&comps) {
        for (o, ei) in out.iter_mut().zip(e) {
            *o += g * ei;
        }
    }
    out
}

/// Symmetric Hessian matrix in the orthonormal frame, row-major `m x m`.
pub fn hessian_fd<F: Fn(&[f64]) -> f64>(space: &SpaceForm, f: F, x: &[f64], h: f64) -> Vec<Vec<f64>> {
    let frame = space.tangent_frame(x);
    let m = frame.len();
    let f0 = f(x);
    let second = |dir: &[f64]| (along(space, &f, x, dir, h) - 2.0 * f0 + along(space, &f, x, dir, -h)) / (h * h);
    let mut hess = vec![vec![0.0; m]; m];
    for i in 0..m {
        hess[i][i] = second(&frame[i]);
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..m {
        for j in i + 1..m {
            let u: Vec<f64> = frame[i].iter().zip(&frame[j]).map(|(a, b)| s * (a + b)).collect();
            let huu = second(&u);
            let hij = huu - 0.5 * (hess[i][i] + hess[j][j]);
            hess[i][j] = hij;
            hess[j][i] = hij;
        }
    }
    hess
}

/// Laplace-Beltrami operator as the trace of geodesic second differences.
pub fn laplacian_fd<F: Fn(&[f64]) -> f64>(space: &SpaceForm, f: F, x: &[f64], h: f64) -> f64 {
    let f0 = f(x);
    space
        .tangent_frame(x)
        .iter()
        .map(|e| (along(space, &f, x, e, h) - 2.0 * f0 + along(space, &f, x, e, -h)) / (h * h))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclidean_quadratic() {
        let e = SpaceForm::euclidean(3).unwrap();
        let f = |x: &[f64]| x[0] * x[0] + 3.0 * x[0] * x[1] - x[2] * x[2];
        let x = [1.0, 2.0, 0.5];
        let g = gradient_fd(&e, f, &x, 1e-4);
        assert!((g[0] - 8.0).abs() < 1e-6 && (g[1] - 3.0).abs() < 1e-6 && (g[2] + 1.0).abs() < 1e-6);
        let hm = hessian_fd(&e, f, &x, 1e-3);
        assert!((hm[0][1] - 3.0).abs() < 1e-5 && (hm[2][2] + 2.0).abs() < 1e-5);
        assert!((laplacian_fd(&e, f, &x, 1e-3)).abs() < 1e-5);
    }

    #[test]
    fn hyperbolic_distance_squared_laplacian() {
        // 1/2 Lap d(o,.)^2 = 1 + (m-1) r coth r in H^m
        let h = SpaceForm::hyperbolic(3, -1.0).unwrap();
        let o = h.origin();
        let f = |x: &[f64]| h.distance(o.coords(), x).powi(2) / 2.0;
        let e = h.tangent_frame(o.coords());
        let x = h.geodesic_point(o.coords(), &e[1], 0.9);
        let want = 1.0 + 2.0 * 0.9 / 0.9f64.tanh();
        assert!((laplacian_fd(&h, f, x.coords(), 1e-4) - want).abs() < 1e-5);
    }
}
