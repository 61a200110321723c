//! Coherent states in the infinite square well `[-l, l]`, and the maps to the doubled circle.

use num_complex::Complex64;

use crate::circle::{circle_overlap, mode_window};
use crate::error::{Error, Result};
use crate::numeric::{cis_turns, frac_product, gaussian_series};
use crate::packet::gaussian_packet;
use crate::params::{Domain, PhasePoint, PhysicalParams};
use crate::sampled::SampledFunction;
use crate::state::WaveState;
use crate::tolerances::{EXCLUSION_MOMENTUM_UNITS, EXCLUSION_POSITION_ALPHAS, WINDOW_EXPONENT};

const PI: f64 = std::f64::consts::PI;
const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Neighbourhoods of the wall points `(+-l, 0)` where box coherent states degenerate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExclusionZone {
    pub position: f64,
    pub momentum: f64,
}

impl ExclusionZone {
    /// `3 alpha` in position and `3 hbar / alpha` in momentum.
    pub fn default_for(params: &PhysicalParams) -> Self {
        Self {
            position: EXCLUSION_POSITION_ALPHAS * params.alpha(),
            momentum: EXCLUSION_MOMENTUM_UNITS * params.hbar() / params.alpha(),
        }
    }

    /// No exclusion at all; only the exact wall points are refused.
    pub fn none() -> Self {
        Self {
            position: 0.0,
            momentum: 0.0,
        }
    }

    pub fn contains(&self, phase: PhasePoint, l: f64) -> bool {
        let near_wall = (phase.q - l).abs() <= self.position || (phase.q + l).abs() <= self.position;
        near_wall && phase.p.abs() <= self.momentum
    }
}

/// Image of a box phase point on the doubled circle `[-2l, 2l)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoveringImage {
    pub q_prime: f64,
    pub p_prime: f64,
}

/// The two-sheeted covering: `p >= 0` maps to `q - l`, `p < 0` to `l - q`.
pub fn covering_map(phase: PhasePoint, l: f64) -> Result<CoveringImage> {
    if !(phase.q >= -l && phase.q <= l) {
        return Err(Error::invalid("q", format!("{} lies outside [-{l}, {l}]", phase.q)));
    }
    let q_prime = if phase.p >= 0.0 { phase.q - l } else { l - phase.q };
    Ok(CoveringImage {
        q_prime,
        p_prime: phase.p.abs(),
    })
}

/// Folds a doubled-circle point back into the box.
pub fn uncover(image: PhasePoint, l: f64) -> PhasePoint {
    let u = (image.q + 2.0 * l).rem_euclid(4.0 * l) - 2.0 * l;
    if u <= 0.0 {
        PhasePoint::new(u + l, image.p)
    } else {
        PhasePoint::new(l - u, -image.p)
    }
}

pub(crate) fn doubled(params: &PhysicalParams) -> PhysicalParams {
    params
        .with_half_length(2.0 * params.half_length())
        .expect("doubling a valid length")
}

/// The pair `(q - l, p)` and `(l - q, -p)` whose odd combination is `omega_{qp}`.
pub(crate) fn lifted_pair(phase: PhasePoint, l: f64) -> (PhasePoint, PhasePoint) {
    (
        PhasePoint::new(phase.q - l, phase.p),
        PhasePoint::new(l - phase.q, -phase.p),
    )
}

pub(crate) fn box_window(params: &PhysicalParams, p: f64) -> Result<(i64, i64)> {
    let l = params.half_length();
    let center = 2.0 * l * p.abs() / (PI * params.hbar());
    let half = WINDOW_EXPONENT.sqrt() * 2.0 * l / (PI * params.alpha());
    mode_window(center, half, Some(1))
}

/// Closed-form coefficient of `omega_{qp}` on `sin(pi k (x - l) / 2l) / sqrt(l)`.
pub fn box_coefficient(params: &PhysicalParams, phase: PhasePoint, k: i64) -> Complex64 {
    let (l, a, hbar) = (params.half_length(), params.alpha(), params.hbar());
    let kappa = PI * k as f64 / (2.0 * l);
    let amp = (8.0 * PI * a * a).powf(0.25) / (2.0 * l.sqrt());
    let minus = (-(a * a) * (kappa - phase.p / hbar).powi(2)).exp();
    let plus = (-(a * a) * (kappa + phase.p / hbar).powi(2)).exp();
    let e = cis_turns(-frac_product(k as f64, (phase.q - l) / (4.0 * l)));
    Complex64::i() * amp * (e * minus - e.conj() * plus)
}

/// Box coherent state with the default wall exclusion.
pub fn make_box_state(params: &PhysicalParams, phase: PhasePoint) -> Result<WaveState> {
    make_box_state_with(params, phase, ExclusionZone::default_for(params))
}

pub fn make_box_state_with(params: &PhysicalParams, phase: PhasePoint, zone: ExclusionZone) -> Result<WaveState> {
    params.require_packet_fits()?;
    let l = params.half_length();
    if !phase.is_finite() || phase.q < -l || phase.q > l {
        return Err(Error::invalid("q", format!("{} lies outside [-{l}, {l}]", phase.q)));
    }
    if zone.contains(phase, l) || (phase.p == 0.0 && phase.q.abs() == l) {
        return Err(Error::Degenerate { q: phase.q, p: phase.p });
    }
    let (lo, hi) = box_window(params, phase.p)?;
    let coeffs = (lo..=hi).map(|k| box_coefficient(params, phase, k)).collect();
    Ok(WaveState::from_packet(Domain::Box, *params, lo, coeffs, phase))
}

/// `||omega_{qp}||^2` from the two doubled-circle theta series.
pub fn box_norm_sq(params: &PhysicalParams, phase: PhasePoint) -> Result<f64> {
    let p2 = doubled(params);
    let (a, b) = lifted_pair(phase, params.half_length());
    let direct = circle_overlap(&p2, a, a, 0.0)?;
    let cross = circle_overlap(&p2, a, b, 0.0)?;
    Ok(direct.re - cross.re)
}

/// `(omega_a, omega_{b,t})` without the wall-exclusion check.
pub(crate) fn box_overlap_unchecked(
    params: &PhysicalParams,
    a: PhasePoint,
    b: PhasePoint,
    t: f64,
) -> Result<Complex64> {
    let p2 = doubled(params);
    let l = params.half_length();
    let (a0, _) = lifted_pair(a, l);
    let (b0, b1) = lifted_pair(b, l);
    Ok(circle_overlap(&p2, a0, b0, t)? - circle_overlap(&p2, a0, b1, t)?)
}

/// `(omega_a, omega_{b,t})` through the doubled circle of half-length `2l`.
pub fn box_overlap(params: &PhysicalParams, a: PhasePoint, b: PhasePoint, t: f64) -> Result<Complex64> {
    let zone = ExclusionZone::default_for(params);
    let l = params.half_length();
    for ph in [a, b] {
        if zone.contains(ph, l) {
            return Err(Error::Degenerate { q: ph.q, p: ph.p });
        }
    }
    box_overlap_unchecked(params, a, b, t)
}

/// Reflected image sum: `sum_j eta_t(x - 4jl) - eta_t(4jl + 2l - x)`.
pub fn box_image_sum(params: &PhysicalParams, phase: PhasePoint, x: f64, t: f64) -> Result<Complex64> {
    let l = params.half_length();
    let drift = phase.q + phase.p * t / params.mass();
    let even = gaussian_series((x - drift) / (4.0 * l), |j| {
        gaussian_packet(params, phase, x - 4.0 * l * j as f64, t)
    })?;
    let odd = gaussian_series((x - 2.0 * l + drift) / (4.0 * l), |j| {
        gaussian_packet(params, phase, 4.0 * l * j as f64 + 2.0 * l - x, t)
    })?;
    Ok(even - odd)
}

fn grid_shape(psi: &SampledFunction, half: f64) -> Result<usize> {
    let n = psi.len() - 1;
    let tol = 1e-12 * half.abs().max(1.0);
    if !n.is_multiple_of(2) || (psi.start + half).abs() > tol || (psi.end() - half).abs() > tol {
        return Err(Error::contract(format!(
            "grid [{}, {}] with {} intervals is not symmetric with an even interval count",
            psi.start,
            psi.end(),
            n
        )));
    }
    Ok(n)
}

/// `[Theta psi](y) = (psi(y - l) - psi(l - y)) / sqrt(2)` for `psi` sampled on `[-2l, 2l]`.
pub fn theta_map(psi: &SampledFunction) -> Result<SampledFunction> {
    let two_l = -psi.start;
    let n = grid_shape(psi, two_l)?;
    let values = (0..=n / 2)
        .map(|j| (psi.values[j] - psi.values[n - j]) * FRAC_1_SQRT_2)
        .collect();
    SampledFunction::new(-two_l / 2.0, psi.step, values)
}

/// Odd lift of a box function sampled on `[-l, l]` to `[-2l, 2l]`.
pub fn theta_inverse(phi: &SampledFunction) -> Result<SampledFunction> {
    let l = -phi.start;
    let m = grid_shape(phi, l)?;
    let values = (0..=2 * m)
        .map(|i| {
            if i <= m {
                phi.values[i] * FRAC_1_SQRT_2
            } else {
                -phi.values[2 * m - i] * FRAC_1_SQRT_2
            }
        })
        .collect();
    SampledFunction::new(-2.0 * l, phi.step, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::EvalMethod;

    fn params() -> PhysicalParams {
        PhysicalParams::new(0.05, 1.0, 0.05, 1.0).unwrap()
    }

    #[test]
    fn vanishes_at_walls() {
        let s = make_box_state(&params(), PhasePoint::new(0.6, 1.0)).unwrap();
        for x in [-1.0, 1.0] {
            assert!(s.eval(x, EvalMethod::Spectral).unwrap().norm() < 1e-12);
            assert!(s.eval(x, EvalMethod::ImageSum).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn reflection_symmetry() {
        let p = params();
        let q = 0.3;
        for k in 1..40 {
            let c1 = box_coefficient(&p, PhasePoint::new(q, 0.0), k);
            let c2 = box_coefficient(&p, PhasePoint::new(2.0 - q, 0.0), k);
            assert!((c1 + c2).norm() < 1e-13);
        }
    }

    #[test]
    fn wall_point_has_zero_norm() {
        let p = params();
        assert_eq!(box_norm_sq(&p, PhasePoint::new(1.0, 0.0)).unwrap(), 0.0);
        assert_eq!(box_norm_sq(&p, PhasePoint::new(-1.0, 0.0)).unwrap(), 0.0);
        assert!(matches!(
            make_box_state(&p, PhasePoint::new(1.0, 0.0)),
            Err(Error::Degenerate { .. })
        ));
    }

    #[test]
    fn covering_branches() {
        assert_eq!(covering_map(PhasePoint::new(0.0, 1.0), 2.0).unwrap().q_prime, -2.0);
        assert_eq!(covering_map(PhasePoint::new(0.0, -1.0), 2.0).unwrap().q_prime, 2.0);
        let back = uncover(PhasePoint::new(0.5, 1.0), 1.0);
        assert_eq!(back, PhasePoint::new(0.5, -1.0));
    }

    #[test]
    fn theta_maps_round_trip() {
        let phi = SampledFunction::from_fn(-1.0, 1.0, 64, |y| {
            Complex64::new((PI * (y - 1.0) / 2.0).sin(), (PI * (y - 1.0)).sin())
        })
        .unwrap();
        let back = theta_map(&theta_inverse(&phi).unwrap()).unwrap();
        for (a, b) in back.values.iter().zip(&phi.values) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn spectral_matches_images_after_evolution() {
        let p = params();
        let s = make_box_state(&p, PhasePoint::new(0.4, -1.3)).unwrap().evolve(0.37);
        for i in 0..=40 {
            let x = -1.0 + 0.05 * i as f64;
            let a = s.eval(x, EvalMethod::Spectral).unwrap();
            let b = s.eval(x, EvalMethod::ImageSum).unwrap();
            assert!((a - b).norm() < 1e-11, "x = {x}: {a} vs {b}");
        }
    }

    #[test]
    fn overlap_matches_coefficients() {
        let p = PhysicalParams::new(0.1, 1.0, 0.2, 1.0).unwrap();
        let a = PhasePoint::new(-0.3, 0.7);
        let b = PhasePoint::new(0.2, -1.8);
        let t = 0.81;
        let sa = make_box_state(&p, a).unwrap();
        let sb = make_box_state(&p, b).unwrap().evolve(t);
        let direct = sa.inner(&sb).unwrap();
        let closed = box_overlap(&p, a, b, t).unwrap();
        assert!((direct - closed).norm() < 1e-12, "{direct} vs {closed}");
        assert!((box_norm_sq(&p, a).unwrap() - sa.norm_sq()).abs() < 1e-13);
    }
}
