//! A finite family of phase-space test functions used for weak pairings.
//!
//! Member `(j, b)` is `h_j(q) g_b(p)` with `h_j = cos(pi j q / L)` for `j > 0`,
//! `sin(pi |j| q / L)` for `j < 0`, `1` for `j = 0`, and `g_b` a Gaussian bump.
//! On the circle `L = l`. In the box `L = 2l` and the member is symmetrized as
//! `h(q - l) g(p) + h(l - q) g(-p)`.

use crate::error::{Error, Result};
use crate::params::Domain;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub center: f64,
    pub width: f64,
}

impl Bump {
    pub fn eval(&self, p: f64) -> f64 {
        let u = (p - self.center) / self.width;
        (-0.5 * u * u).exp()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestFamily {
    pub j_max: i64,
    pub bumps: Vec<Bump>,
}

impl TestFamily {
    pub fn new(j_max: i64, bumps: Vec<Bump>) -> Result<Self> {
        if j_max < 0 || bumps.is_empty() {
            return Err(Error::invalid("test_family", "need j_max >= 0 and at least one bump"));
        }
        if bumps.iter().any(|b| !(b.width > 0.0 && b.width.is_finite() && b.center.is_finite())) {
            return Err(Error::invalid("test_family", "bump widths must be positive"));
        }
        Ok(Self { j_max, bumps })
    }

    /// Harmonics up to `j = 8` and five bumps at `p_ref * (0.5, 0.75, 1, 1.25, 1.5)`.
    pub fn standard(p_ref: f64) -> Result<Self> {
        if !(p_ref.is_finite() && p_ref != 0.0) {
            return Err(Error::invalid("p_ref", "reference momentum must be nonzero"));
        }
        let w = 0.25 * p_ref.abs();
        let bumps = [0.5, 0.75, 1.0, 1.25, 1.5]
            .iter()
            .map(|f| Bump {
                center: f * p_ref,
                width: w,
            })
            .collect();
        Self::new(8, bumps)
    }

    pub fn harmonics(&self) -> usize {
        (2 * self.j_max + 1) as usize
    }

    pub fn len(&self) -> usize {
        self.harmonics() * self.bumps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, j: i64, bump: usize) -> usize {
        (j + self.j_max) as usize * self.bumps.len() + bump
    }

    /// `(j, bump)` for a flat index.
    pub fn member(&self, idx: usize) -> Result<(i64, usize)> {
        if idx >= self.len() {
            return Err(Error::contract(format!(
                "test index {idx} outside the family of {} members",
                self.len()
            )));
        }
        let nb = self.bumps.len();
        Ok(((idx / nb) as i64 - self.j_max, idx % nb))
    }

    /// The member at a physical phase point.
    pub fn eval(&self, idx: usize, q: f64, p: f64, domain: Domain, l: f64) -> Result<f64> {
        let (j, b) = self.member(idx)?;
        let g = &self.bumps[b];
        Ok(match domain {
            Domain::Circle => harmonic(j, q, l) * g.eval(p),
            Domain::Box => harmonic(j, q - l, 2.0 * l) * g.eval(p) + harmonic(j, l - q, 2.0 * l) * g.eval(-p),
        })
    }
}

pub(crate) fn harmonic(j: i64, q: f64, period_half: f64) -> f64 {
    let k = std::f64::consts::PI * j.unsigned_abs() as f64 / period_half;
    match j.signum() {
        1 => (k * q).cos(),
        -1 => (k * q).sin(),
        _ => 1.0,
    }
}

/// Splits complex pairings with `e^{i pi j q / L}`, `j = 0..=J`, into real members.
pub(crate) fn unpack(family: &TestFamily, complex: &[Vec<num_complex::Complex64>]) -> Vec<f64> {
    let mut out = vec![0.0; family.len()];
    for (b, per_j) in complex.iter().enumerate() {
        for j in 0..=family.j_max {
            let v = per_j[j as usize];
            out[family.index(j, b)] = v.re;
            if j > 0 {
                out[family.index(-j, b)] = v.im;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip() {
        let f = TestFamily::standard(1.0).unwrap();
        assert_eq!(f.len(), 17 * 5);
        for idx in 0..f.len() {
            let (j, b) = f.member(idx).unwrap();
            assert_eq!(f.index(j, b), idx);
        }
        assert!(f.member(f.len()).is_err());
    }

    #[test]
    fn box_members_are_symmetric_at_walls() {
        let f = TestFamily::standard(1.0).unwrap();
        for idx in 0..f.len() {
            for q in [-1.0, 1.0] {
                let a = f.eval(idx, q, 0.7, Domain::Box, 1.0).unwrap();
                let b = f.eval(idx, q, -0.7, Domain::Box, 1.0).unwrap();
                assert!((a - b).abs() < 1e-14);
            }
        }
    }
}
