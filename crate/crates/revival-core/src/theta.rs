//! Jacobi theta function `theta(z, tau) = sum_k exp(-pi tau k^2 + 2 pi i k z)`.
//!
//! Two summation routes are provided: the direct Fourier series, and the
//! image series `tau^{-1/2} sum_n exp(-pi (z - n)^2 / tau)` obtained from the
//! modular relation. [`theta`] picks the image series when `Re tau < 1`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::gaussian_series;

const PI: f64 = std::f64::consts::PI;

fn check_tau(tau: Complex64) -> Result<()> {
    if z_ok(tau) && tau.re > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("theta needs Re tau > 0, got tau = {tau}")))
    }
}

fn z_ok(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Reduce `z` by integers and `tau` by multiples of `2i`; both are exact symmetries.
fn reduce(z: Complex64, tau: Complex64) -> (Complex64, Complex64) {
    let z = Complex64::new(z.re - z.re.round(), z.im);
    let tau = Complex64::new(tau.re, tau.im - 2.0 * (tau.im / 2.0).round());
    (z, tau)
}

/// Direct summation of the defining series.
pub fn theta_direct(z: Complex64, tau: Complex64) -> Result<Complex64> {
    check_tau(tau)?;
    if !z_ok(z) {
        return Err(Error::Domain(format!("theta needs finite z, got {z}")));
    }
    let (z, tau) = reduce(z, tau);
    let center = -z.im / tau.re;
    let a = -PI * tau;
    let b = Complex64::new(0.0, 2.0 * PI) * z;
    gaussian_series(center, |k| {
        let kf = k as f64;
        (a * (kf * kf) + b * kf).exp()
    })
}

/// Summation through the modular relation, as a sum of Gaussian images.
pub fn theta_modular(z: Complex64, tau: Complex64) -> Result<Complex64> {
    check_tau(tau)?;
    if !z_ok(z) {
        return Err(Error::Domain(format!("theta needs finite z, got {z}")));
    }
    let (z, tau) = reduce(z, tau);
    let w = tau.inv();
    let center = z.re - w.im * z.im / w.re;
    let s = gaussian_series(center, |n| {
        let u = z - n as f64;
        (-PI * u * u * w).exp()
    })?;
    Ok(s / tau.sqrt())
}

/// Theta function with the modular switch at `Re tau = 1`.
pub fn theta(z: Complex64, tau: Complex64) -> Result<Complex64> {
    check_tau(tau)?;
    if tau.re < 1.0 {
        theta_modular(z, tau)
    } else {
        theta_direct(z, tau)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn integer_periodicity() {
        let z = c(0.3, 0.1);
        let tau = c(2.0, 0.0);
        let a = theta(z, tau).unwrap();
        let b = theta(z + 1.0, tau).unwrap();
        assert!((a - b).norm() < 1e-14);
    }

    #[test]
    fn rejects_left_half_plane() {
        assert!(matches!(theta(c(0.0, 0.0), c(0.0, 1.0)), Err(Error::Domain(_))));
        assert!(matches!(theta(c(0.0, 0.0), c(-1.0, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn overflow_reports_index() {
        match theta_direct(c(0.0, 30.0), c(1.0, 0.0)) {
            Err(Error::Range { k }) => assert!(k < 0),
            other => panic!("expected range error, got {other:?}"),
        }
    }

    #[test]
    fn modular_relation_real_tau() {
        let tau = 3.0;
        let lhs = theta(c(0.0, 0.0), c(1.0 / tau, 0.0)).unwrap();
        let rhs = theta(c(0.0, 0.0), c(tau, 0.0)).unwrap() * tau.sqrt();
        assert!((lhs - rhs).norm() < 1e-13);
    }

    #[test]
    fn branches_agree_near_switch() {
        for &(zr, zi, tr, ti) in &[
            (0.2, -0.4, 0.9, 0.3),
            (-1.7, 0.8, 1.1, -0.6),
            (0.5, 1.9, 0.05, 0.2),
            (1.3, -2.0, 20.0, 1.0),
        ] {
            let z = c(zr, zi);
            let tau = c(tr, ti);
            let a = theta_direct(z, tau).unwrap();
            let b = theta_modular(z, tau).unwrap();
            assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0), "{z} {tau}: {a} vs {b}");
        }
    }
}
