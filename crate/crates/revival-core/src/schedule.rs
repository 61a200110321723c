//! Semiclassical schedules and level-wise convergence measurements.

use crate::classical::ClassicalDensity;
use crate::error::{Error, Result};
use crate::husimi::{rho_from_classical, transition_pairings, DensityOperatorMixture, PhaseQuadrature};
use crate::params::{Domain, PhasePoint, PhysicalParams};
use crate::revival::{box_revival_structure, limit_profile, revival_structure, RevivalStructure, Spread};
use crate::scales::revival_time;
use crate::testfns::TestFamily;

/// The limit regime: `c = M/N` and spread `D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regime {
    pub m: i64,
    pub n: i64,
    pub spread: Spread,
}

impl Regime {
    pub fn new(m: i64, n: i64, spread: Spread) -> Result<Self> {
        revival_structure(m, n, 1.0)?;
        Ok(Self { m, n, spread })
    }

    pub fn c(&self) -> f64 {
        self.m as f64 / self.n as f64
    }

    pub fn structure(&self, l: f64, domain: Domain) -> RevivalStructure {
        match domain {
            Domain::Circle => revival_structure(self.m, self.n, l),
            Domain::Box => box_revival_structure(self.m, self.n, l),
        }
        .expect("regime fraction validated on construction")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleOptions {
    pub hbar0: f64,
    /// `alpha_n = c_alpha * sqrt(hbar_n)`.
    pub c_alpha: f64,
    /// Momentum unit fixing the flattening rate when `D = inf`.
    pub p_scale: f64,
}

impl ScheduleOptions {
    /// `hbar_0 = 0.01 l p`, `C = sqrt(l / p) / 3`, so `alpha_0 = l / 30`.
    pub fn defaults(l: f64, p_scale: f64) -> Self {
        Self {
            hbar0: 1e-2 * l * p_scale,
            c_alpha: (l / p_scale).sqrt() / 3.0,
            p_scale,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleLevel {
    pub params: PhysicalParams,
    pub t: f64,
    /// `t - c T_rev`.
    pub t_offset: f64,
    /// Spread `hbar t_offset / (2 m alpha)` reached at this level.
    pub spread: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SemiclassicalSchedule {
    pub regime: Regime,
    pub domain: Domain,
    pub levels: Vec<ScheduleLevel>,
}

/// Levels `hbar_n = hbar_0 2^{-n}`, `alpha_n = C sqrt(hbar_n)`, `t_n = c T_rev + 2 m D_n alpha_n / hbar_n`.
///
/// For `D = inf` the spread grows as `D_n = l (p alpha_n / hbar_n)^{1/2}`, which
/// sends `hbar t / alpha` to infinity while `hbar (t - c T_rev)` still vanishes.
pub fn make_schedule(
    regime: Regime,
    base: &PhysicalParams,
    levels: usize,
    domain: Domain,
    opts: ScheduleOptions,
) -> Result<SemiclassicalSchedule> {
    if levels < 3 {
        return Err(Error::invalid("levels", format!("need at least 3 levels, got {levels}")));
    }
    if !(opts.hbar0 > 0.0 && opts.c_alpha > 0.0 && opts.p_scale > 0.0) {
        return Err(Error::invalid("schedule", "hbar0, C and p_scale must be positive"));
    }
    let l = base.half_length();
    let m = base.mass();
    let mut out = Vec::with_capacity(levels);
    for n in 0..levels {
        let hbar = opts.hbar0 * 0.5f64.powi(n as i32);
        let alpha = opts.c_alpha * hbar.sqrt();
        let params = base.with_hbar_alpha(hbar, alpha)?;
        if params.require_packet_fits().is_err() {
            return Err(Error::invalid("schedule", format!("level {n}: alpha = {alpha} does not fit l = {l}")));
        }
        let d = match regime.spread {
            Spread::Finite(d) => d,
            Spread::Infinite => l * (opts.p_scale * alpha / hbar).sqrt(),
        };
        let t_offset = 2.0 * m * d * alpha / hbar;
        let t = regime.c() * revival_time(&params, domain) + t_offset;
        out.push(ScheduleLevel {
            params,
            t,
            t_offset,
            spread: d,
        });
    }
    check_levels(&regime, &out, m)?;
    Ok(SemiclassicalSchedule {
        regime,
        domain,
        levels: out,
    })
}

fn check_levels(regime: &Regime, levels: &[ScheduleLevel], m: f64) -> Result<()> {
    for (n, w) in levels.windows(2).enumerate() {
        let (a, b) = (&w[0], &w[1]);
        let ratio = |x: &ScheduleLevel| x.params.hbar() / x.params.alpha();
        let fail = |what: &str| Err(Error::contract(format!("level {}: {what}", n + 1)));
        if b.params.alpha() >= a.params.alpha() {
            return fail("alpha does not decrease");
        }
        if ratio(b) >= ratio(a) {
            return fail("hbar / alpha does not decrease");
        }
        if b.params.hbar() * b.t_offset > a.params.hbar() * a.t_offset {
            return fail("hbar (t - c T_rev) does not decrease");
        }
        if regime.spread == Spread::Infinite && ratio(b) * b.t_offset <= ratio(a) * a.t_offset {
            return fail("hbar t / alpha does not grow");
        }
    }
    if let Spread::Finite(d) = regime.spread {
        for (n, lv) in levels.iter().enumerate() {
            let got = lv.params.hbar() / lv.params.alpha() * lv.t_offset;
            if (got - 2.0 * m * d).abs() > 1e-12 * (2.0 * m * d).max(f64::MIN_POSITIVE) {
                return Err(Error::contract(format!("level {n}: hbar t / alpha = {got}, expected {}", 2.0 * m * d)));
            }
        }
    }
    Ok(())
}

/// What is evolved along the schedule.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum Scenario {
    /// `b -> transition_density(a, b, t)` for a fixed final point `a`.
    Transition(PhasePoint),
    /// The Husimi function of the single normalized atom at a point.
    Atom(PhasePoint),
    /// The Husimi function of the mixture built from a classical density.
    Density {
        sigma: ClassicalDensity,
        quad: Option<PhaseQuadrature>,
    },
}

/// What the computed density is compared with at each level.
#[derive(Debug, Clone)]
pub enum Target {
    /// The regime's limit profile with the given spread, rebuilt at each level.
    Profile(Spread),
    /// A classical density transported freely to each level's time.
    Classical(ClassicalDensity),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelResidual {
    pub hbar: f64,
    pub alpha: f64,
    pub t: f64,
    pub residual: f64,
}

/// Max pairing discrepancy over `family` at each schedule level.
pub fn convergence_meter(
    schedule: &SemiclassicalSchedule,
    scenario: &Scenario,
    target: &Target,
    family: &TestFamily,
) -> Result<Vec<LevelResidual>> {
    let domain = schedule.domain;
    schedule
        .levels
        .iter()
        .map(|lv| {
            let p = &lv.params;
            let l = p.half_length();
            let computed = match scenario {
                Scenario::Transition(a) => transition_pairings(p, *a, lv.t, domain, family)?,
                Scenario::Atom(a) => DensityOperatorMixture::single(p, domain, *a)?.evolve(lv.t).pairings(family)?,
                Scenario::Density { sigma, quad } => {
                    rho_from_classical(sigma, p, quad.as_ref())?.evolve(lv.t).pairings(family)?
                }
            };
            let expected = match target {
                Target::Classical(sigma) => sigma.transport(lv.t)?.pairings(family),
                Target::Profile(spread) => {
                    let (point, offset) = match scenario {
                        Scenario::Transition(a) => (*a, lv.t_offset),
                        Scenario::Atom(a) => (*a, -lv.t_offset),
                        Scenario::Density { .. } => {
                            return Err(Error::contract("profile targets need a point scenario"));
                        }
                    };
                    let s = schedule.regime.structure(l, domain);
                    let prof = limit_profile(&s, point, *spread, offset, p.mass(), l, domain);
                    ClassicalDensity::from_profile(&prof, p.mass())?.pairings(family)
                }
            };
            let residual = computed
                .iter()
                .zip(&expected)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            Ok(LevelResidual {
                hbar: p.hbar(),
                alpha: p.alpha(),
                t: lv.t,
                residual,
            })
        })
        .collect()
}

/// Strict decrease over the last three levels and a final value below half the first.
pub fn is_converging(residuals: &[f64]) -> bool {
    let n = residuals.len();
    if n < 3 {
        return false;
    }
    let tail = &residuals[n.saturating_sub(3)..];
    tail.windows(2).all(|w| w[1] < w[0]) && residuals[n - 1] < 0.5 * residuals[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> PhysicalParams {
        PhysicalParams::new(1.0, 1.0, 0.1, 1.0).unwrap()
    }

    #[test]
    fn classical_regime_has_zero_time() {
        let s = make_schedule(
            Regime::new(0, 1, Spread::Finite(0.0)).unwrap(),
            &base(),
            4,
            Domain::Circle,
            ScheduleOptions::defaults(1.0, 1.0),
        )
        .unwrap();
        assert!(s.levels.iter().all(|l| l.t == 0.0));
    }

    #[test]
    fn collapse_regime_is_exact() {
        let s = make_schedule(
            Regime::new(0, 1, Spread::Finite(1.0)).unwrap(),
            &base(),
            4,
            Domain::Circle,
            ScheduleOptions::defaults(1.0, 1.0),
        )
        .unwrap();
        for l in &s.levels {
            assert!((l.params.hbar() / l.params.alpha() * l.t - 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn half_revival_regime() {
        let s = make_schedule(
            Regime::new(1, 2, Spread::Finite(0.0)).unwrap(),
            &base(),
            3,
            Domain::Circle,
            ScheduleOptions::defaults(1.0, 1.0),
        )
        .unwrap();
        for l in &s.levels {
            assert_eq!(l.t, revival_time(&l.params, Domain::Circle) / 2.0);
            assert_eq!(l.params.hbar() * l.t_offset, 0.0);
        }
    }

    #[test]
    fn too_few_levels() {
        let r = Regime::new(0, 1, Spread::Infinite).unwrap();
        assert!(make_schedule(r, &base(), 2, Domain::Circle, ScheduleOptions::defaults(1.0, 1.0)).is_err());
    }

    #[test]
    fn verdict() {
        assert!(is_converging(&[1.0, 0.8, 0.4, 0.1]));
        assert!(!is_converging(&[1.0, 0.8, 0.9, 0.1]));
        assert!(!is_converging(&[1.0, 0.9, 0.8, 0.7]));
    }
}
