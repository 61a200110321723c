//! Classical, collapse and revival time scales.

use crate::params::{Domain, PhysicalParams};

const PI: f64 = std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeScales {
    /// Classical period; `+inf` when `p = 0`.
    pub t_cl: f64,
    pub t_coll: f64,
    pub t_rev: f64,
}

/// Full revival time: `4 m l^2 / (pi hbar)` on the circle, four times that in the box.
pub fn revival_time(params: &PhysicalParams, domain: Domain) -> f64 {
    let l = params.half_length();
    let base = 4.0 * params.mass() * l * l / (PI * params.hbar());
    match domain {
        Domain::Circle => base,
        Domain::Box => 4.0 * base,
    }
}

/// Time for the spread to reach `l / sqrt(3)`, the width of a uniform density.
pub fn collapse_time(params: &PhysicalParams) -> f64 {
    2.0 * params.mass() * params.half_length() * params.alpha() / (3f64.sqrt() * params.hbar())
}

pub fn classical_period(params: &PhysicalParams, p: f64, domain: Domain) -> f64 {
    if p == 0.0 {
        return f64::INFINITY;
    }
    let path = match domain {
        Domain::Circle => 2.0,
        Domain::Box => 4.0,
    };
    path * params.half_length() * params.mass() / p.abs()
}

pub fn time_scales(params: &PhysicalParams, p: f64, domain: Domain) -> TimeScales {
    TimeScales {
        t_cl: classical_period(params, p, domain),
        t_coll: collapse_time(params),
        t_rev: revival_time(params, domain),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        let p = PhysicalParams::new(1.0, 1.0, 0.1, PI).unwrap();
        let c = time_scales(&p, 2.0, Domain::Circle);
        assert!((c.t_cl - PI).abs() < 1e-15);
        assert!((c.t_coll - 2.0 * PI * 0.1 / 3f64.sqrt()).abs() < 1e-15);
        assert!((c.t_rev - 4.0 * PI).abs() < 1e-14);
        let b = time_scales(&p, 2.0, Domain::Box);
        assert!((b.t_cl - 2.0 * PI).abs() < 1e-15);
        assert!((b.t_rev - 16.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn zero_momentum_has_no_period() {
        let p = PhysicalParams::new(1.0, 1.0, 0.1, 1.0).unwrap();
        assert!(time_scales(&p, 0.0, Domain::Circle).t_cl.is_infinite());
    }

    #[test]
    fn halving_hbar() {
        let a = PhysicalParams::new(0.2, 1.0, 0.1, 1.0).unwrap();
        let b = PhysicalParams::new(0.1, 1.0, 0.1, 1.0).unwrap();
        let (sa, sb) = (time_scales(&a, 1.0, Domain::Circle), time_scales(&b, 1.0, Domain::Circle));
        assert!((sb.t_rev / sa.t_rev - 2.0).abs() < 1e-14);
        assert!((sb.t_coll / sa.t_coll - 2.0).abs() < 1e-14);
        assert_eq!(sb.t_cl, sa.t_cl);
    }
}
