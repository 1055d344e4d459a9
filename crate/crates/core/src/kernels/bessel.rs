//! Modified Bessel function of the first kind, order zero.

use std::f64::consts::PI;

/// Argument at which evaluation switches from the power series to the asymptotic expansion.
pub const SERIES_LIMIT: f64 = 15.0;

fn series(z: f64) -> f64 {
    let q = z * z / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        term *= q / (k * k);
        sum += term;
        if term < 1e-17 * sum {
            return sum;
        }
        k += 1.0;
    }
}

// e^{-z} I0(z) ~ (2 pi z)^{-1/2} sum_k ((2k-1)!!)^2 / (k! 8^k z^k)
fn asymptotic_scaled(z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        let next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * z);
        if next < 1e-17 * sum || next > term {
            break;
        }
        term = next;
        sum += term;
        k += 1.0;
    }
    sum / (2.0 * PI * z).sqrt()
}

/// `I0(z)`, even in `z`.
pub fn bessel_i0(z: f64) -> f64 {
    let z = z.abs();
    if z <= SERIES_LIMIT {
        series(z)
    } else {
        asymptotic_scaled(z) * z.exp()
    }
}

/// Exponentially scaled `e^{-|z|} I0(z)`, finite for all `z`.
pub fn bessel_i0e(z: f64) -> f64 {
    let z = z.abs();
    if z <= SERIES_LIMIT {
        series(z) * (-z).exp()
    } else {
        asymptotic_scaled(z)
    }
}

/// `ln I0(z)` without overflow.
pub fn ln_bessel_i0(z: f64) -> f64 {
    z.abs() + bessel_i0e(z).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        assert_eq!(bessel_i0(0.0), 1.0);
        assert!((bessel_i0(1.0) / 1.2660658777520082 - 1.0).abs() < 1e-14);
        assert!((bessel_i0(10.0) / 2815.716628466254 - 1.0).abs() < 1e-13);
    }

    #[test]
    fn branches_agree_at_the_seam() {
        for z in [14.0, 15.0, 16.0, 20.0] {
            let s = series(z);
            let a = asymptotic_scaled(z) * z.exp();
            assert!((s / a - 1.0).abs() < 1e-12, "z={z}: {s} vs {a}");
        }
    }

    #[test]
    fn scaled_large_argument() {
        // e^{-z} I0(z) -> 1/sqrt(2 pi z)
        let z = 1e6;
        assert!((bessel_i0e(z) * (2.0 * PI * z).sqrt() - 1.0).abs() < 1e-6);
        assert!(ln_bessel_i0(1e4).is_finite());
    }
}
