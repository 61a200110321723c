//! Free Gaussian packets on the line and their exact overlap kernel.

use num_complex::Complex64;

use crate::params::{PhasePoint, PhysicalParams};

const PI: f64 = std::f64::consts::PI;

/// `eta_{qp,t}(x)`: the freely evolved Gaussian packet.
pub fn gaussian_packet(params: &PhysicalParams, phase: PhasePoint, x: f64, t: f64) -> Complex64 {
    let (hbar, m, alpha) = (params.hbar(), params.mass(), params.alpha());
    let one_ig = Complex64::new(1.0, params.gamma(t));
    // Fourth root of (1 + i gamma)^2 taken as exp(Log(1 + i gamma) / 2).
    let root = (0.5 * one_ig.ln()).exp();
    let norm = (2.0 * PI * alpha * alpha).powf(-0.25);
    let u = x - phase.q - phase.p * t / m;
    let spread = -(u * u) / (4.0 * alpha * alpha * one_ig);
    let wave = Complex64::new(0.0, phase.p * (x - phase.q - phase.p * t / (2.0 * m)) / hbar);
    norm * (spread + wave).exp() / root
}

/// Position spread `sqrt(alpha^2 + (hbar t / 2 m alpha)^2)`.
pub fn dispersion(params: &PhysicalParams, t: f64) -> f64 {
    let a = params.alpha();
    let s = params.hbar() * t / (2.0 * params.mass() * a);
    a.hypot(s)
}

/// Closed-form `(eta_a, eta_{b,t})` on the line.
pub fn gaussian_overlap(params: &PhysicalParams, a: PhasePoint, b: PhasePoint, t: f64) -> Complex64 {
    let (hbar, m, alpha) = (params.hbar(), params.mass(), params.alpha());
    let two_ig = Complex64::new(2.0, params.gamma(t));
    let pref = (2.0 / two_ig).sqrt();
    let psum = b.p + a.p;
    let dq = b.q - a.q;
    let shift = dq + psum * t / (2.0 * m);
    let re_part = -(alpha * (b.p - a.p) / hbar).powi(2) / 2.0;
    let gauss = -(shift * shift) / (4.0 * alpha * alpha * two_ig);
    let phase = -psum * dq / (2.0 * hbar) - t * psum * psum / (8.0 * m * hbar);
    pref * (gauss + Complex64::new(re_part, phase)).exp()
}
