//! Spectral wave states on the circle and in the box.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numeric::{cis_turns, frac_product};
use crate::params::{Domain, PhasePoint, PhysicalParams};
use crate::scales::revival_time;

/// How [`WaveState::eval`] synthesizes the wave function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMethod {
    /// Basis synthesis from the stored coefficients.
    Spectral,
    /// Direct sum of evolved line packets over the periodic or reflected images.
    ImageSum,
}

/// A state stored as coefficients over the eigenbasis of the domain.
///
/// Circle modes `k in [k_min, k_max]` use `e^{i pi k x / l} / sqrt(2l)`;
/// box modes `k >= 1` use `sin(pi k (x - l) / 2l) / sqrt(l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveState {
    domain: Domain,
    params: PhysicalParams,
    k_min: i64,
    coeffs: Vec<Complex64>,
    time: f64,
    source: Option<PhasePoint>,
}

impl WaveState {
    /// Builds a state from explicit coefficients; it carries no packet source.
    pub fn from_coefficients(
        domain: Domain,
        params: PhysicalParams,
        k_min: i64,
        coeffs: Vec<Complex64>,
    ) -> Result<Self> {
        if domain == Domain::Box && k_min < 1 {
            return Err(Error::contract("box modes start at k = 1"));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::contract("coefficients must be finite"));
        }
        Ok(Self {
            domain,
            params,
            k_min,
            coeffs,
            time: 0.0,
            source: None,
        })
    }

    pub(crate) fn from_packet(
        domain: Domain,
        params: PhysicalParams,
        k_min: i64,
        coeffs: Vec<Complex64>,
        source: PhasePoint,
    ) -> Self {
        Self {
            domain,
            params,
            k_min,
            coeffs,
            time: 0.0,
            source: Some(source),
        }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    pub fn k_min(&self) -> i64 {
        self.k_min
    }

    pub fn k_max(&self) -> i64 {
        self.k_min + self.coeffs.len() as i64 - 1
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// The packet that generated the state, if any.
    pub fn source(&self) -> Option<PhasePoint> {
        self.source
    }

    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().enumerate().map(move |(i, c)| (self.k_min + i as i64, *c))
    }

    /// Coefficient of mode `k`; zero outside the stored window.
    pub fn coefficient(&self, k: i64) -> Complex64 {
        if k < self.k_min || k > self.k_max() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(k - self.k_min) as usize]
        }
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Inner product `(self, other)` over the shared basis.
    pub fn inner(&self, other: &WaveState) -> Result<Complex64> {
        if self.domain != other.domain || self.params.half_length() != other.params.half_length() {
            return Err(Error::contract("inner product across different domains"));
        }
        let lo = self.k_min.max(other.k_min);
        let hi = self.k_max().min(other.k_max());
        let mut s = Complex64::new(0.0, 0.0);
        for k in lo..=hi {
            s += self.coefficient(k).conj() * other.coefficient(k);
        }
        Ok(s)
    }

    /// Mean of `hbar kappa_k` weighted by `|c_k|^2` (`kappa_k` the mode wavenumber).
    pub fn mean_mode_momentum(&self) -> f64 {
        let scale = wavenumber_scale(self.domain, self.params.half_length()) * self.params.hbar();
        let mut num = 0.0;
        let mut den = 0.0;
        for (k, c) in self.modes() {
            num += c.norm_sqr() * scale * k as f64;
            den += c.norm_sqr();
        }
        num / den
    }

    /// Exact free evolution by `t`.
    pub fn evolve(&self, t: f64) -> WaveState {
        let t_rev = revival_time(&self.params, self.domain);
        let s = t / t_rev;
        let coeffs = self
            .modes()
            .map(|(k, c)| {
                let k2 = (k * k) as f64;
                c * cis_turns(-frac_product(k2, s))
            })
            .collect();
        WaveState {
            coeffs,
            time: self.time + t,
            ..self.clone()
        }
    }

    /// The wave function at `x` at the stored time.
    pub fn eval(&self, x: f64, method: EvalMethod) -> Result<Complex64> {
        match method {
            EvalMethod::Spectral => Ok(self.eval_spectral(x)),
            EvalMethod::ImageSum => {
                let src = self
                    .source
                    .ok_or(Error::MethodUnavailable("image sum needs a packet-generated state"))?;
                match self.domain {
                    Domain::Circle => crate::circle::circle_image_sum(&self.params, src, x, self.time),
                    Domain::Box => crate::box_well::box_image_sum(&self.params, src, x, self.time),
                }
            }
        }
    }

    fn eval_spectral(&self, x: f64) -> Complex64 {
        let l = self.params.half_length();
        let mut s = Complex64::new(0.0, 0.0);
        match self.domain {
            Domain::Circle => {
                let u = x / (2.0 * l);
                for (k, c) in self.modes() {
                    s += c * cis_turns(frac_product(k as f64, u));
                }
                s / (2.0 * l).sqrt()
            }
            Domain::Box => {
                let u = (x - l) / (4.0 * l);
                for (k, c) in self.modes() {
                    let turns = frac_product(k as f64, u);
                    s += c * (crate::numeric::TWO_PI * turns).sin();
                }
                s / l.sqrt()
            }
        }
    }

    /// `|psi(x)|^2` at every grid point, evaluated in parallel.
    pub fn density(&self, xs: &[f64], method: EvalMethod) -> Result<Vec<f64>> {
        xs.par_iter()
            .map(|&x| self.eval(x, method).map(|v| v.norm_sqr()))
            .collect()
    }
}

pub(crate) fn wavenumber_scale(domain: Domain, l: f64) -> f64 {
    match domain {
        Domain::Circle => std::f64::consts::PI / l,
        Domain::Box => std::f64::consts::PI / (2.0 * l),
    }
}

/// Free-function form of [`WaveState::evolve`].
pub fn evolve(state: &WaveState, t: f64) -> WaveState {
    state.evolve(t)
}

/// Free-function form of [`WaveState::eval`].
pub fn eval_state(state: &WaveState, x: f64, method: EvalMethod) -> Result<Complex64> {
    state.eval(x, method)
}

/// `n` equally spaced points covering `[-l, l)` (circle) or `[-l, l]` (box).
pub fn position_grid(domain: Domain, l: f64, n: usize) -> Vec<f64> {
    match domain {
        Domain::Circle => (0..n).map(|i| -l + 2.0 * l * i as f64 / n as f64).collect(),
        Domain::Box => {
            if n < 2 {
                return vec![0.0; n];
            }
            (0..n).map(|i| -l + 2.0 * l * i as f64 / (n - 1) as f64).collect()
        }
    }
}
