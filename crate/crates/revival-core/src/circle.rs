//! Coherent states on the circle `[-l, l)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::{cis_turns, frac_product, gaussian_series};
use crate::packet::{gaussian_overlap, gaussian_packet};
use crate::params::{wrap_position, Domain, PhasePoint, PhysicalParams};
use crate::state::WaveState;
use crate::theta::theta;
use crate::tolerances::{MAX_MODES, WINDOW_EXPONENT, WINDOW_MARGIN};

const PI: f64 = std::f64::consts::PI;

/// Mode range `[k_lo, k_hi]` keeping every Gaussian weight above `e^{-40}`, plus margin.
pub(crate) fn mode_window(center: f64, half_width: f64, floor: Option<i64>) -> Result<(i64, i64)> {
    let lo = (center - half_width).floor() - WINDOW_MARGIN as f64;
    let hi = (center + half_width).ceil() + WINDOW_MARGIN as f64;
    let count = hi - lo + 1.0;
    if !count.is_finite() || count > MAX_MODES as f64 {
        return Err(Error::Capacity {
            requested: if count.is_finite() { count as u64 } else { u64::MAX },
            limit: MAX_MODES,
        });
    }
    let mut lo = lo as i64;
    if let Some(f) = floor {
        lo = lo.max(f);
    }
    Ok((lo, (hi as i64).max(lo)))
}

pub(crate) fn circle_window(params: &PhysicalParams, p: f64) -> Result<(i64, i64)> {
    let l = params.half_length();
    let center = p * l / (PI * params.hbar());
    let half = WINDOW_EXPONENT.sqrt() * l / (PI * params.alpha());
    mode_window(center, half, None)
}

/// Closed-form coefficient of `upsilon_{qp}` on `e^{i pi k x / l} / sqrt(2l)`.
pub fn circle_coefficient(params: &PhysicalParams, phase: PhasePoint, k: i64) -> Complex64 {
    let (l, a, hbar) = (params.half_length(), params.alpha(), params.hbar());
    let amp = (PI * a * a / (2.0 * l.powi(4))).powf(0.25) * (2.0 * l).sqrt();
    let d = PI * k as f64 / l - phase.p / hbar;
    let weight = (-(a * a) * d * d).exp();
    amp * weight * cis_turns(-frac_product(k as f64, phase.q / (2.0 * l)))
}

/// The periodized coherent state `upsilon_{qp}` in the circle eigenbasis.
pub fn make_circle_state(params: &PhysicalParams, phase: PhasePoint) -> Result<WaveState> {
    params.require_packet_fits()?;
    if !phase.is_finite() {
        return Err(Error::invalid("phase", "q and p must be finite"));
    }
    let phase = PhasePoint::new(wrap_position(phase.q, params.half_length()), phase.p);
    let (lo, hi) = circle_window(params, phase.p)?;
    let coeffs = (lo..=hi).map(|k| circle_coefficient(params, phase, k)).collect();
    Ok(WaveState::from_packet(Domain::Circle, *params, lo, coeffs, phase))
}

/// `||upsilon_{qp}||^2 = sum_k exp(-l^2 k^2 / 2 alpha^2) cos(2 p l k / hbar)`.
pub fn circle_norm_sq(params: &PhysicalParams, phase: PhasePoint) -> Result<f64> {
    let (l, a, hbar) = (params.half_length(), params.alpha(), params.hbar());
    let z = Complex64::new(phase.p * l / (PI * hbar), 0.0);
    let tau = Complex64::new(l * l / (2.0 * PI * a * a), 0.0);
    Ok(theta(z, tau)?.re)
}

/// `(upsilon_a, upsilon_{b,t})` summed over the periodic images of `b` via theta.
pub fn circle_overlap(params: &PhysicalParams, a: PhasePoint, b: PhasePoint, t: f64) -> Result<Complex64> {
    let (l, m, al, hbar) = (params.half_length(), params.mass(), params.alpha(), params.hbar());
    let two_ig = Complex64::new(2.0, params.gamma(t));
    let psum = a.p + b.p;
    let delta = b.q - a.q + psum * t / (2.0 * m);
    // Recentre on the nearest image so the prefactor stays bounded.
    let k0 = (-delta / (2.0 * l)).round();
    let b0 = PhasePoint::new(b.q + 2.0 * k0 * l, b.p);
    let delta0 = delta + 2.0 * k0 * l;
    let g0 = gaussian_overlap(params, a, b0, t);
    if g0 == Complex64::new(0.0, 0.0) {
        return Ok(g0);
    }
    let tau = l * l / (PI * al * al * two_ig);
    let z = Complex64::i() * l * delta0 / (2.0 * PI * al * al * two_ig) - psum * l / (2.0 * PI * hbar);
    Ok(g0 * theta(z, tau)?)
}

/// Direct sum of evolved line packets over the shifts `2 n l`.
pub fn circle_image_sum(params: &PhysicalParams, phase: PhasePoint, x: f64, t: f64) -> Result<Complex64> {
    let l = params.half_length();
    let center = (x - phase.q - phase.p * t / params.mass()) / (2.0 * l);
    gaussian_series(center, |n| gaussian_packet(params, phase, x - 2.0 * l * n as f64, t))
}

/// `(1 / 2 pi hbar) |(upsilon_a, upsilon_{b,t})|^2` with the domain-matching overlap.
pub fn transition_density(
    params: &PhysicalParams,
    a: PhasePoint,
    b: PhasePoint,
    t: f64,
    domain: Domain,
) -> Result<f64> {
    let v = match domain {
        Domain::Circle => circle_overlap(params, a, b, t)?,
        Domain::Box => crate::box_well::box_overlap(params, a, b, t)?,
    };
    Ok(v.norm_sqr() / (2.0 * PI * params.hbar()))
}
