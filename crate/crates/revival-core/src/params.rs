use std::fmt;

use crate::error::{Error, Result};

/// The four constants fixing one simulation instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    hbar: f64,
    mass: f64,
    alpha: f64,
    half_length: f64,
}

fn positive(name: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::invalid(name, format!("must be positive and finite, got {v}")))
    }
}

impl PhysicalParams {
    pub fn new(hbar: f64, mass: f64, alpha: f64, half_length: f64) -> Result<Self> {
        Ok(Self {
            hbar: positive("hbar", hbar)?,
            mass: positive("mass", mass)?,
            alpha: positive("alpha", alpha)?,
            half_length: positive("half_length", half_length)?,
        })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn with_half_length(&self, l: f64) -> Result<Self> {
        Self::new(self.hbar, self.mass, self.alpha, l)
    }

    pub fn with_hbar_alpha(&self, hbar: f64, alpha: f64) -> Result<Self> {
        Self::new(hbar, self.mass, alpha, self.half_length)
    }

    /// Dimensionless spreading rate `hbar t / (2 m alpha^2)`.
    pub fn gamma(&self, t: f64) -> f64 {
        self.hbar * t / (2.0 * self.mass * self.alpha * self.alpha)
    }

    /// Packets must fit the domain: `alpha < l / 4`.
    pub fn require_packet_fits(&self) -> Result<()> {
        if self.alpha < 0.25 * self.half_length {
            Ok(())
        } else {
            Err(Error::invalid(
                "alpha",
                format!("alpha = {} must be below l/4 = {}", self.alpha, 0.25 * self.half_length),
            ))
        }
    }
}

impl fmt::Display for PhysicalParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "hbar={} m={} alpha={} l={}",
            self.hbar, self.mass, self.alpha, self.half_length
        )
    }
}

/// A point `(q, p)` of phase space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub q: f64,
    pub p: f64,
}

impl PhasePoint {
    pub const fn new(q: f64, p: f64) -> Self {
        Self { q, p }
    }

    pub fn is_finite(&self) -> bool {
        self.q.is_finite() && self.p.is_finite()
    }
}

/// Time together with its spreading rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionFactor {
    pub gamma: f64,
    pub t: f64,
}

impl EvolutionFactor {
    pub fn new(params: &PhysicalParams, t: f64) -> Self {
        Self {
            gamma: params.gamma(t),
            t,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    Circle,
    Box,
}

impl Domain {
    pub fn name(&self) -> &'static str {
        match self {
            Domain::Circle => "circle",
            Domain::Box => "box",
        }
    }
}

impl std::str::FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "circle" => Ok(Domain::Circle),
            "box" => Ok(Domain::Box),
            other => Err(Error::invalid("domain", format!("expected circle or box, got {other}"))),
        }
    }
}

/// Wrap `q` into the fundamental cell `[-l, l)`.
pub fn wrap_position(q: f64, l: f64) -> f64 {
    if q >= -l && q < l {
        return q;
    }
    let period = 2.0 * l;
    let mut r = (q + l).rem_euclid(period) - l;
    if r >= l {
        r -= period;
    }
    r
}
