//! Finite-difference derivatives of log kernels in the point argument.

use std::cell::Cell;

use super::KernelValue;
use crate::error::{Error, Result};
use crate::geometry::{gradient_fd, hessian_fd, SpaceForm};

fn guarded<'a, F>(kernel: &'a F, bad: &'a Cell<Option<f64>>) -> impl Fn(&[f64]) -> f64 + 'a
where
    F: Fn(&[f64]) -> KernelValue,
{
    move |x: &[f64]| {
        let k = kernel(x);
        if !k.log_value.is_finite() || !(k.value >= 0.0) {
            bad.set(Some(k.value));
            return 0.0;
        }
        k.log_value
    }
}

/// Central-difference gradient of `log kernel(x)` in an orthonormal frame at `x`.
pub fn log_gradient_fd<F>(space: &SpaceForm, kernel: F, x: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> KernelValue,
{
    let bad = Cell::new(None);
    let g = gradient_fd(space, guarded(&kernel, &bad), x, h);
    match bad.get() {
        Some(value) => Err(Error::NonPositiveKernel { value }),
        None => Ok(g),
    }
}

/// Central-difference Hessian of `log kernel(x)` in an orthonormal frame at `x`.
pub fn log_hessian_fd<F>(space: &SpaceForm, kernel: F, x: &[f64], h: f64) -> Result<Vec<Vec<f64>>>
where
    F: Fn(&[f64]) -> KernelValue,
{
    let bad = Cell::new(None);
    let hm = hessian_fd(space, guarded(&kernel, &bad), x, h);
    match bad.get() {
        Some(value) => Err(Error::NonPositiveKernel { value }),
        None => Ok(hm),
    }
}
