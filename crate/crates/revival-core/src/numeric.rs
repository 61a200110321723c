//! Small numerical helpers: reduced phases and Gaussian-weighted series.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances::{MAX_SERIES_TERMS, SERIES_REL_TAIL};

pub(crate) const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Fractional part of `a * b` in turns, carrying the rounding error of the product.
pub(crate) fn frac_product(a: f64, b: f64) -> f64 {
    let p = a * b;
    let e = a.mul_add(b, -p);
    let f = (p - p.floor()) + e;
    f - f.floor()
}

/// `exp(2 pi i x)` for `x` measured in turns.
pub(crate) fn cis_turns(x: f64) -> Complex64 {
    let r = x - x.floor();
    let (s, c) = (TWO_PI * r).sin_cos();
    Complex64::new(c, s)
}

/// Sums `term(k)` over all integers for terms whose magnitude is a Gaussian in `k`
/// peaked near `center`. Each side stops at the first term below
/// `SERIES_REL_TAIL * (|partial| + 1)`.
pub(crate) fn gaussian_series<F>(center: f64, mut term: F) -> Result<Complex64>
where
    F: FnMut(i64) -> Complex64,
{
    if !center.is_finite() {
        return Err(Error::Domain(format!("series center is not finite: {center}")));
    }
    let k0 = center.round() as i64;
    let first = term(k0);
    if !first.re.is_finite() || !first.im.is_finite() {
        return Err(Error::Range { k: k0 });
    }
    let mut sum = first;
    let mut up = true;
    let mut down = true;
    let mut d: i64 = 1;
    while up || down {
        if d as u64 > MAX_SERIES_TERMS {
            return Err(Error::Capacity {
                requested: d as u64,
                limit: MAX_SERIES_TERMS,
            });
        }
        for (active, k) in [(&mut up, k0 + d), (&mut down, k0 - d)] {
            if !*active {
                continue;
            }
            let v = term(k);
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::Range { k });
            }
            sum += v;
            if v.norm() < SERIES_REL_TAIL * (sum.norm() + 1.0) {
                *active = false;
            }
        }
        d += 1;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frac_product_is_exact_for_integers() {
        assert_eq!(frac_product(49.0, 1.0), 0.0);
        assert_eq!(frac_product(12345.0, 3.0), 0.0);
        let f = frac_product(10.0, 0.25);
        assert!((f - 0.5).abs() < 1e-15);
    }

    #[test]
    fn gaussian_series_sums_jacobi_value() {
        let s = gaussian_series(0.0, |k| Complex64::new((-std::f64::consts::PI * (k * k) as f64).exp(), 0.0))
            .unwrap();
        assert!((s.re - 1.086_434_811_213_308).abs() < 1e-15);
    }
}
