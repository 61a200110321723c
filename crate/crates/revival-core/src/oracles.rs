//! Brute-force reference computations the closed forms are checked against.

use num_complex::Complex64;

use crate::box_well::{box_coefficient, box_window};
use crate::circle::{circle_coefficient, circle_window};
use crate::error::{Error, Result};
use crate::numeric::{cis_turns, frac_product, TWO_PI};
use crate::params::{Domain, PhasePoint, PhysicalParams};
use crate::quad::CompositeRule;
use crate::sampled::SampledFunction;
use crate::scales::revival_time;
use crate::state::WaveState;
use crate::tolerances::MOMENTUM_WINDOW_UNITS;


/// Coefficient mass a brute-force projection may leave behind.
const DISCARDED_MASS: f64 = 1e-12;

/// Coherent-weight mass a phase-space window may leave behind.
const WINDOW_LOSS: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadRule {
    GaussLegendre,
    Trapezoid,
}

/// Refinement plan: `nodes` per panel (Gauss) or initial intervals (trapezoid),
/// doubled at most `subdivisions` times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rule: QuadRule,
    pub nodes: usize,
    pub subdivisions: u32,
    pub target_tol: f64,
}

impl QuadratureSpec {
    pub fn new(rule: QuadRule, nodes: usize, subdivisions: u32, target_tol: f64) -> Result<Self> {
        if nodes < 2 {
            return Err(Error::invalid("nodes", format!("need at least 2, got {nodes}")));
        }
        if !(target_tol > 0.0) {
            return Err(Error::invalid("target_tol", format!("must be positive, got {target_tol}")));
        }
        Ok(Self {
            rule,
            nodes,
            subdivisions,
            target_tol,
        })
    }

    /// 20-point Gauss panels, up to 2^14 of them, to `1e-13`.
    pub fn fine() -> Self {
        Self {
            rule: QuadRule::GaussLegendre,
            nodes: 20,
            subdivisions: 14,
            target_tol: 1e-13,
        }
    }
}

/// A converged quadrature value with the size of its last correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEstimate {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
}

fn rule_estimate(
    f: &impl Fn(f64) -> Complex64,
    g: &impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
    level: u32,
) -> (Complex64, usize) {
    let integrand = |x: f64| f(x).conj() * g(x);
    match spec.rule {
        QuadRule::GaussLegendre => {
            let r = CompositeRule::new(a, b, 1usize << level, spec.nodes);
            (r.integrate(integrand), r.nodes.len())
        }
        QuadRule::Trapezoid => {
            let n = spec.nodes << level;
            let h = (b - a) / n as f64;
            let mut s = (integrand(a) + integrand(b)) * 0.5;
            for i in 1..n {
                s += integrand(a + h * i as f64);
            }
            (s * h, n + 1)
        }
    }
}

/// `int_a^b conj(f) g dx`, doubling the panel count until two estimates agree.
pub fn quad_inner(
    f: impl Fn(f64) -> Complex64,
    g: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<OracleEstimate> {
    if !(b > a) {
        return Err(Error::invalid("interval", format!("[{a}, {b}] is empty")));
    }
    let (mut prev, mut evals) = rule_estimate(&f, &g, a, b, spec, 0);
    for level in 1..=spec.subdivisions {
        let (next, n) = rule_estimate(&f, &g, a, b, spec, level);
        evals += n;
        let err = (next - prev).norm();
        if err < spec.target_tol {
            return Ok(OracleEstimate {
                value: next,
                error: err,
                evaluations: evals,
            });
        }
        prev = next;
        if level == spec.subdivisions {
            return Err(Error::OracleFailure {
                previous: format!("{prev}"),
                last: format!("{next}"),
            });
        }
    }
    Err(Error::OracleFailure {
        previous: format!("{prev}"),
        last: "no refinement allowed".into(),
    })
}

fn check_grid(psi: &SampledFunction, l: f64) -> Result<usize> {
    let n = psi.len() - 1;
    if (psi.start + l).abs() > 1e-12 * l || (psi.end() - l).abs() > 1e-9 * l {
        return Err(Error::contract("brute evolution needs samples spanning [-l, l] with both ends"));
    }
    Ok(n)
}

/// Projects onto the eigenbasis by direct sums, applies the exact phases and resynthesizes.
pub fn brute_evolve(psi: &SampledFunction, params: &PhysicalParams, t: f64, domain: Domain) -> Result<SampledFunction> {
    let l = params.half_length();
    let n = check_grid(psi, l)?;
    let h = psi.step;
    let s = t / revival_time(params, domain);
    let values = &psi.values;
    match domain {
        Domain::Circle => {
            let k_cap = (n / 8) as i64;
            let total: f64 = values[..n].iter().map(|v| v.norm_sqr()).sum::<f64>() * h;
            let mut coeffs = Vec::new();
            let mut kept = 0.0;
            for k in -k_cap..=k_cap {
                let c: Complex64 = (0..n)
                    .map(|j| values[j] * cis_turns(-frac_product(k as f64, j as f64 / n as f64)))
                    .sum::<Complex64>()
                    * h
                    / (2.0 * l).sqrt()
                    * cis_turns(k as f64 * 0.5);
                kept += c.norm_sqr();
                coeffs.push((k, c));
            }
            if total - kept > DISCARDED_MASS * total.max(1.0) {
                return Err(Error::contract(format!(
                    "modes beyond |k| = {k_cap} carry mass {:e}; refine the grid",
                    total - kept
                )));
            }
            let out = (0..=n)
                .map(|j| {
                    let x = psi.x(j);
                    coeffs
                        .iter()
                        .map(|&(k, c)| {
                            let kf = k as f64;
                            c * cis_turns(frac_product(kf, x / (2.0 * l)) - frac_product(kf * kf, s))
                        })
                        .sum::<Complex64>()
                        / (2.0 * l).sqrt()
                })
                .collect();
            SampledFunction::new(psi.start, h, out)
        }
        Domain::Box => {
            let k_cap = (n / 4) as i64;
            let total: f64 = values.iter().map(|v| v.norm_sqr()).sum::<f64>() * h;
            let sign = |k: i64| if k % 2 == 0 { 1.0 } else { -1.0 };
            let sine = |k: i64, j: usize| sign(k) * (TWO_PI * frac_product(k as f64, j as f64 / (2 * n) as f64)).sin();
            let mut coeffs = Vec::new();
            let mut kept = 0.0;
            for k in 1..=k_cap.max(1) {
                let c: Complex64 = (1..n).map(|j| values[j] * sine(k, j)).sum::<Complex64>() * h / l.sqrt();
                kept += c.norm_sqr();
                coeffs.push((k, c));
            }
            if total - kept > DISCARDED_MASS * total.max(1.0) {
                return Err(Error::contract(format!(
                    "modes beyond k = {k_cap} carry mass {:e}; refine the grid",
                    total - kept
                )));
            }
            let out = (0..=n)
                .map(|j| {
                    coeffs
                        .iter()
                        .map(|&(k, c)| c * cis_turns(-frac_product((k * k) as f64, s)) * sine(k, j))
                        .sum::<Complex64>()
                        / l.sqrt()
                })
                .collect();
            SampledFunction::new(psi.start, h, out)
        }
    }
}

/// Phase-space grid for the resolution-of-unity reconstruction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseGridSpec {
    pub nq: usize,
    pub np: usize,
    /// Momentum half-window in units of `hbar / alpha`.
    pub window_units: f64,
    /// Widenings (each doubling the window) allowed before giving up.
    pub max_widenings: u32,
}

impl Default for PhaseGridSpec {
    fn default() -> Self {
        Self {
            nq: 256,
            np: 256,
            window_units: MOMENTUM_WINDOW_UNITS,
            max_widenings: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolutionReport {
    /// `||psi_rec - psi|| / ||psi||`.
    pub residual: f64,
    /// `(1 / 2 pi hbar) sum |(upsilon_qp, psi)|^2 dq dp / ||psi||^2`.
    pub captured: f64,
    pub p_window: (f64, f64),
    pub widenings: u32,
}

fn coherent_coefficient(params: &PhysicalParams, domain: Domain, ph: PhasePoint, k: i64) -> Complex64 {
    match domain {
        Domain::Circle => circle_coefficient(params, ph, k),
        Domain::Box => box_coefficient(params, ph, k),
    }
}

/// Momentum intervals holding the coherent weight of `psi`.
fn momentum_windows(psi: &WaveState, half: f64) -> Vec<(f64, f64)> {
    let p = psi.mean_mode_momentum();
    match psi.domain() {
        Domain::Circle => vec![(p - half, p + half)],
        Domain::Box => {
            let c = p.abs();
            if c <= half {
                vec![(-c - half, c + half)]
            } else {
                vec![(-c - half, -c + half), (c - half, c + half)]
            }
        }
    }
}

/// Reconstructs `psi` from its coherent-state transform on a finite grid.
pub fn resolution_residual(psi: &WaveState, grid: &PhaseGridSpec) -> Result<ResolutionReport> {
    if grid.nq < 2 || grid.np < 2 {
        return Err(Error::invalid("grid", "need at least two points per axis"));
    }
    let params = *psi.params();
    let (l, hbar, alpha) = (params.half_length(), params.hbar(), params.alpha());
    let norm = psi.norm_sq();
    let domain = psi.domain();
    let (qs, wq): (Vec<f64>, Vec<f64>) = match domain {
        Domain::Circle => {
            let h = 2.0 * l / grid.nq as f64;
            ((0..grid.nq).map(|i| -l + h * i as f64).collect(), vec![h; grid.nq])
        }
        Domain::Box => {
            let panels = (grid.nq / 16).max(1);
            let r = CompositeRule::new(-l, l, panels, grid.nq.div_ceil(panels).max(2));
            (r.nodes, r.weights)
        }
    };
    let mut units = grid.window_units;
    let mut widenings = 0;
    loop {
        let windows = momentum_windows(psi, units * hbar / alpha);
        let np_each = (grid.np / windows.len()).max(2);
        let mut ps = Vec::new();
        let mut wp = Vec::new();
        for &(a, b) in &windows {
            let h = (b - a) / (np_each - 1) as f64;
            for j in 0..np_each {
                ps.push(a + h * j as f64);
                wp.push(if j == 0 || j == np_each - 1 { 0.5 * h } else { h });
            }
        }
        let p_lo = ps.iter().cloned().fold(f64::INFINITY, f64::min);
        let p_hi = ps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let (w_lo, w_hi) = match domain {
            Domain::Circle => (circle_window(&params, p_lo)?.0, circle_window(&params, p_hi)?.1),
            Domain::Box => box_window(&params, p_lo.abs().max(p_hi.abs()))?,
        };
        let k_lo = psi.k_min().min(w_lo);
        let k_hi = psi.k_max().max(w_hi);
        let width = (k_hi - k_lo + 1) as usize;
        let offset = (psi.k_min() - k_lo) as usize;
        let mut rec = vec![Complex64::new(0.0, 0.0); width];
        let mut captured = 0.0;
        let mut basis = vec![Complex64::new(0.0, 0.0); width];
        for (&q, &w1) in qs.iter().zip(&wq) {
            for (&p, &w2) in ps.iter().zip(&wp) {
                let ph = PhasePoint::new(q, p);
                for (i, b) in basis.iter_mut().enumerate() {
                    *b = coherent_coefficient(&params, domain, ph, k_lo + i as i64);
                }
                let amp: Complex64 = psi
                    .coefficients()
                    .iter()
                    .zip(&basis[offset..])
                    .map(|(c, b)| b.conj() * c)
                    .sum();
                let w = w1 * w2 / (TWO_PI * hbar);
                captured += w * amp.norm_sqr();
                for (r, b) in rec.iter_mut().zip(&basis) {
                    *r += b * amp * w;
                }
            }
        }
        let captured = captured / norm;
        if 1.0 - captured <= WINDOW_LOSS {
            let diff: f64 = rec
                .iter()
                .enumerate()
                .map(|(i, r)| (r - psi.coefficient(k_lo + i as i64)).norm_sqr())
                .sum();
            let lo = windows.first().map(|w| w.0).unwrap_or(0.0);
            let hi = windows.last().map(|w| w.1).unwrap_or(0.0);
            return Ok(ResolutionReport {
                residual: (diff / norm).sqrt(),
                captured,
                p_window: (lo, hi),
                widenings,
            });
        }
        if widenings >= grid.max_widenings {
            return Err(Error::OracleFailure {
                previous: format!("window {units} hbar/alpha"),
                last: format!("lost coherent mass {:e}", 1.0 - captured),
            });
        }
        widenings += 1;
        units *= 2.0;
    }
}
