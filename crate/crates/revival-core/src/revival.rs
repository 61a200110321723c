//! Fractional revival structure and the predicted semiclassical limit profiles.

use crate::error::{Error, Result};
use crate::params::{wrap_position, Domain, PhasePoint};

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Copies `n_prime` and offset `a` of the packet at `t = (M/N) T_rev`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RevivalStructure {
    pub m: i64,
    pub n: i64,
    pub n_prime: i64,
    pub a: f64,
    pub irrational: bool,
}

impl RevivalStructure {
    pub fn c(&self) -> f64 {
        self.m as f64 / self.n as f64
    }

    /// The structure assigned to an irrational `c`: one copy, no offset.
    pub fn irrational() -> Self {
        Self {
            m: 0,
            n: 1,
            n_prime: 1,
            a: 0.0,
            irrational: true,
        }
    }
}

/// `N' = N` for odd `N`, `N/2` for even `N`; `a = 2l/N` when `N = 2 mod 4`.
pub fn revival_structure(m: i64, n: i64, l: f64) -> Result<RevivalStructure> {
    if n <= 0 {
        return Err(Error::contract(format!("denominator must be positive, got {n}")));
    }
    if gcd(m, n) != 1 {
        return Err(Error::contract(format!("{m}/{n} is not a reduced fraction")));
    }
    let n_prime = if n % 2 == 1 { n } else { n / 2 };
    let a = if n % 4 == 2 { 2.0 * l / n as f64 } else { 0.0 };
    Ok(RevivalStructure {
        m,
        n,
        n_prime,
        a,
        irrational: false,
    })
}

/// Box revival structure, obtained from the doubled circle of half-length `2l`.
///
/// The offset for `N = 2 mod 4` is therefore `4l/N`.
pub fn box_revival_structure(m: i64, n: i64, l: f64) -> Result<RevivalStructure> {
    revival_structure(m, n, 2.0 * l)
}

/// Spatial spread of the limit profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Spread {
    Finite(f64),
    /// Complete flattening.
    Infinite,
}

impl Spread {
    pub fn new(d: f64) -> Result<Self> {
        if d.is_infinite() && d > 0.0 {
            Ok(Spread::Infinite)
        } else if d.is_finite() && d >= 0.0 {
            Ok(Spread::Finite(d))
        } else {
            Err(Error::invalid("D", format!("spread must lie in [0, inf], got {d}")))
        }
    }

    /// Damping `e^{-(k D)^2 / 2}` of a harmonic with wavenumber `k`.
    pub fn damping(&self, k: f64) -> f64 {
        match *self {
            Spread::Finite(d) => (-(k * d).powi(2) / 2.0).exp(),
            Spread::Infinite => {
                if k == 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

/// A mixture of `n_prime` spread copies of a phase point.
///
/// Circle centers are reduced into `[-l, l)`. Box centers are folded back from
/// the doubled circle, so each carries its own momentum sign.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitProfile {
    pub centers: Vec<PhasePoint>,
    pub spread: Spread,
    pub momentum: f64,
    pub weight: f64,
    pub domain: Domain,
    pub half_length: f64,
    /// Box profiles at infinite spread carry equal mass at `+p` and `-p`.
    pub mirrored: bool,
    unfolded: Vec<f64>,
}

impl LimitProfile {
    /// Unfolded centers on the covering circle (`[-l, l)` or `[-2l, 2l)`).
    pub fn unfolded_centers(&self) -> &[f64] {
        &self.unfolded
    }
}

/// Centers `q + a + s k l / N' - (p/m) t_offset` with `s = 2` (circle) or `4` (box).
pub fn limit_profile(
    structure: &RevivalStructure,
    phase: PhasePoint,
    spread: Spread,
    t_offset: f64,
    mass: f64,
    l: f64,
    domain: Domain,
) -> LimitProfile {
    let np = structure.n_prime;
    let drift = phase.p * t_offset / mass;
    let (centers, unfolded): (Vec<PhasePoint>, Vec<f64>) = (0..np)
        .map(|k| match domain {
            Domain::Circle => {
                let c = phase.q + structure.a + 2.0 * l * k as f64 / np as f64 - drift;
                let w = wrap_position(c, l);
                (PhasePoint::new(w, phase.p), w)
            }
            Domain::Box => {
                let u = phase.q - l + structure.a + 4.0 * l * k as f64 / np as f64 - drift;
                let u = wrap_position(u, 2.0 * l);
                (crate::box_well::uncover(PhasePoint::new(u, phase.p), l), u)
            }
        })
        .unzip();
    LimitProfile {
        centers,
        spread,
        momentum: phase.p,
        weight: 1.0 / np as f64,
        domain,
        half_length: l,
        mirrored: domain == Domain::Box && spread == Spread::Infinite,
        unfolded,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn copy_count_rules() {
        let s = revival_structure(1, 3, 1.0).unwrap();
        assert_eq!((s.n_prime, s.a), (3, 0.0));
        let s = revival_structure(1, 2, 1.0).unwrap();
        assert_eq!((s.n_prime, s.a), (1, 1.0));
        let s = revival_structure(3, 4, 1.0).unwrap();
        assert_eq!((s.n_prime, s.a), (2, 0.0));
        assert!(revival_structure(2, 4, 1.0).is_err());
        assert_eq!(box_revival_structure(1, 2, 1.0).unwrap().a, 2.0);
    }

    #[test]
    fn classical_point() {
        let s = revival_structure(0, 1, 1.0).unwrap();
        let p = limit_profile(&s, PhasePoint::new(0.3, 0.7), Spread::Finite(0.0), 0.0, 1.0, 1.0, Domain::Circle);
        assert_eq!(p.centers, vec![PhasePoint::new(0.3, 0.7)]);
        assert_eq!(p.weight, 1.0);
    }

    #[test]
    fn box_centers_fold_with_sign() {
        let s = revival_structure(0, 1, 1.0).unwrap();
        let p = limit_profile(&s, PhasePoint::new(0.5, 1.0), Spread::Finite(0.0), 2.0, 1.0, 1.0, Domain::Box);
        assert!((p.centers[0].q + 0.5).abs() < 1e-15);
        assert_eq!(p.centers[0].p, -1.0);
        assert!(!p.mirrored);
    }
}
