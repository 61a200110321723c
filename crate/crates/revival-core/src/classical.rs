//! Classical phase-space densities, free transport and the Kozlov flattening limit.
//!
//! Box densities are stored through their unfolding onto the doubled circle
//! of half-length `2l`: a box point `(q, p)` becomes the pair `(q - l, p)` and
//! `(l - q, -p)`, each with half the mass. Free motion on that circle is the
//! reflecting motion in the box.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::params::{wrap_position, Domain, PhasePoint};
use crate::revival::{LimitProfile, Spread};
use crate::testfns::{unpack, TestFamily};

const PI: f64 = std::f64::consts::PI;

/// Weight times a Gaussian in momentum and a wrapped Gaussian in position.
///
/// Zero widths give point masses; `sigma_q = inf` is uniform in position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianComponent {
    pub weight: f64,
    pub q: f64,
    pub p: f64,
    pub sigma_q: f64,
    pub sigma_p: f64,
}

/// Samples on a periodic position grid times an arbitrary momentum rule.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseGrid {
    pub qs: Vec<f64>,
    pub ps: Vec<f64>,
    pub wp: Vec<f64>,
    /// Row-major: `values[iq * ps.len() + ip]`.
    pub values: Vec<f64>,
}

impl PhaseGrid {
    pub fn dq(&self) -> f64 {
        if self.qs.len() > 1 {
            self.qs[1] - self.qs[0]
        } else {
            0.0
        }
    }

    pub fn get(&self, iq: usize, ip: usize) -> f64 {
        self.values[iq * self.ps.len() + ip]
    }

    fn mass(&self) -> f64 {
        let np = self.ps.len();
        let mut s = 0.0;
        for iq in 0..self.qs.len() {
            for ip in 0..np {
                s += self.values[iq * np + ip] * self.wp[ip];
            }
        }
        s * self.dq()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Representation {
    Mixture(Vec<GaussianComponent>),
    Grid(PhaseGrid),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalDensity {
    domain: Domain,
    half_length: f64,
    mass: f64,
    repr: Representation,
    /// Accumulated `t / m` for analytic mixtures.
    shear: f64,
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be positive and finite, got {v}")))
    }
}

impl ClassicalDensity {
    /// Gaussian mixture given in physical coordinates; weights are renormalized.
    pub fn gaussian_mixture(domain: Domain, l: f64, mass: f64, comps: &[GaussianComponent]) -> Result<Self> {
        check_positive("half_length", l)?;
        check_positive("mass", mass)?;
        let total: f64 = comps.iter().map(|c| c.weight).sum();
        if comps.is_empty() || !(total > 0.0) {
            return Err(Error::invalid("components", "need positive total weight"));
        }
        for c in comps {
            if !(c.weight >= 0.0) || !(c.sigma_q >= 0.0) || !(c.sigma_p >= 0.0) || !c.sigma_p.is_finite() {
                return Err(Error::invalid("components", "weights and widths must be non-negative"));
            }
            if domain == Domain::Box && !(c.q >= -l && c.q <= l) {
                return Err(Error::invalid("components", format!("box center {} outside [-{l}, {l}]", c.q)));
            }
        }
        let lifted = match domain {
            Domain::Circle => comps
                .iter()
                .map(|c| GaussianComponent {
                    weight: c.weight / total,
                    q: wrap_position(c.q, l),
                    ..*c
                })
                .collect(),
            Domain::Box => comps
                .iter()
                .flat_map(|c| {
                    let w = 0.5 * c.weight / total;
                    [
                        GaussianComponent {
                            weight: w,
                            q: c.q - l,
                            ..*c
                        },
                        GaussianComponent {
                            weight: w,
                            q: l - c.q,
                            p: -c.p,
                            ..*c
                        },
                    ]
                })
                .collect(),
        };
        Ok(Self {
            domain,
            half_length: l,
            mass,
            repr: Representation::Mixture(lifted),
            shear: 0.0,
        })
    }

    /// A point mass `delta(q - q0, p - p0)`.
    pub fn point(domain: Domain, l: f64, mass: f64, phase: PhasePoint) -> Result<Self> {
        Self::gaussian_mixture(
            domain,
            l,
            mass,
            &[GaussianComponent {
                weight: 1.0,
                q: phase.q,
                p: phase.p,
                sigma_q: 0.0,
                sigma_p: 0.0,
            }],
        )
    }

    /// The density described by a limit profile.
    pub fn from_profile(profile: &LimitProfile, mass: f64) -> Result<Self> {
        let sq = match profile.spread {
            Spread::Finite(d) => d,
            Spread::Infinite => f64::INFINITY,
        };
        let l = profile.half_length;
        let lifted: Vec<GaussianComponent> = match profile.domain {
            Domain::Circle => profile
                .centers
                .iter()
                .map(|c| GaussianComponent {
                    weight: profile.weight,
                    q: c.q,
                    p: c.p,
                    sigma_q: sq,
                    sigma_p: 0.0,
                })
                .collect(),
            Domain::Box => profile
                .unfolded_centers()
                .iter()
                .flat_map(|&u| {
                    [(u, profile.momentum), (-u, -profile.momentum)].map(|(q, p)| GaussianComponent {
                        weight: 0.5 * profile.weight,
                        q,
                        p,
                        sigma_q: sq,
                        sigma_p: 0.0,
                    })
                })
                .collect(),
        };
        check_positive("mass", mass)?;
        Ok(Self {
            domain: profile.domain,
            half_length: l,
            mass,
            repr: Representation::Mixture(lifted),
            shear: 0.0,
        })
    }

    /// Samples a non-negative density on `nq` periodic positions and the given momentum rule.
    ///
    /// Box densities are sampled on the doubled circle through the fold, so
    /// `f` is only ever called inside the box.
    pub fn sample<F>(domain: Domain, l: f64, mass: f64, nq: usize, ps: Vec<f64>, wp: Vec<f64>, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64,
    {
        check_positive("half_length", l)?;
        check_positive("mass", mass)?;
        if nq < 2 || ps.is_empty() || ps.len() != wp.len() {
            return Err(Error::invalid("grid", "need nq >= 2 and matching momentum nodes and weights"));
        }
        let cover = covering_half_length(domain, l);
        let qs: Vec<f64> = (0..nq).map(|i| -cover + 2.0 * cover * i as f64 / nq as f64).collect();
        let mut values = Vec::with_capacity(nq * ps.len());
        for &q in &qs {
            for &p in &ps {
                let v = match domain {
                    Domain::Circle => f(q, p),
                    Domain::Box => {
                        let b = crate::box_well::uncover(PhasePoint::new(q, p), l);
                        0.5 * f(b.q, b.p)
                    }
                };
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(Error::contract(format!("density value {v} at ({q}, {p}) is negative or not finite")));
                }
                values.push(v);
            }
        }
        let mut grid = PhaseGrid { qs, ps, wp, values };
        let m = grid.mass();
        if !(m > 0.0) {
            return Err(Error::contract("density has zero mass on the grid"));
        }
        grid.values.iter_mut().for_each(|v| *v /= m);
        Ok(Self {
            domain,
            half_length: l,
            mass,
            repr: Representation::Grid(grid),
            shear: 0.0,
        })
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    /// Elapsed transport time for analytic mixtures.
    pub fn elapsed(&self) -> f64 {
        self.shear * self.mass
    }

    /// Total probability: `1` up to the sampling rule for grids.
    pub fn total(&self) -> f64 {
        match &self.repr {
            Representation::Mixture(c) => c.iter().map(|c| c.weight).sum(),
            Representation::Grid(g) => g.mass(),
        }
    }

    /// Density at a physical phase point; mixtures without point masses only.
    pub fn value(&self, q: f64, p: f64) -> Result<f64> {
        let comps = match &self.repr {
            Representation::Mixture(c) => c,
            Representation::Grid(_) => return Err(Error::MethodUnavailable("pointwise value of a sampled density")),
        };
        if comps.iter().any(|c| c.sigma_q == 0.0 || c.sigma_p == 0.0) {
            return Err(Error::contract("pointwise value of a singular density"));
        }
        let cover = covering_half_length(self.domain, self.half_length);
        let lifted = |u: f64, p: f64| -> f64 {
            comps
                .iter()
                .map(|c| c.weight * wrapped_gaussian(u - self.shear * p - c.q, c.sigma_q, cover) * normal(p - c.p, c.sigma_p))
                .sum()
        };
        Ok(match self.domain {
            Domain::Circle => lifted(q, p),
            Domain::Box => {
                let l = self.half_length;
                lifted(q - l, p) + lifted(l - q, -p)
            }
        })
    }

    /// Free transport `sigma(q - p t / m, p)`; reflecting walls in the box.
    pub fn transport(&self, t: f64) -> Result<ClassicalDensity> {
        let tau = t / self.mass;
        match &self.repr {
            Representation::Mixture(_) => Ok(Self {
                shear: self.shear + tau,
                ..self.clone()
            }),
            Representation::Grid(g) => {
                let cover = covering_half_length(self.domain, self.half_length);
                Ok(Self {
                    repr: Representation::Grid(shift_slices(g, tau, cover)),
                    ..self.clone()
                })
            }
        }
    }

    /// The position average `(1/2l) int sigma(q', p) dq'` on the circle,
    /// `(1/4l) int [sigma(q', p) + sigma(q', -p)] dq'` in the box.
    pub fn kozlov_limit(&self) -> ClassicalDensity {
        let repr = match &self.repr {
            Representation::Mixture(c) => Representation::Mixture(
                c.iter()
                    .map(|c| GaussianComponent {
                        sigma_q: f64::INFINITY,
                        ..*c
                    })
                    .collect(),
            ),
            Representation::Grid(g) => {
                let np = g.ps.len();
                let nq = g.qs.len();
                let mut values = vec![0.0; g.values.len()];
                for ip in 0..np {
                    let mean = (0..nq).map(|iq| g.get(iq, ip)).sum::<f64>() / nq as f64;
                    for iq in 0..nq {
                        values[iq * np + ip] = mean;
                    }
                }
                Representation::Grid(PhaseGrid { values, ..g.clone() })
            }
        };
        Self { repr, ..self.clone() }
    }

    /// Pairings against every member of `family`.
    pub fn pairings(&self, family: &TestFamily) -> Vec<f64> {
        let cover = covering_half_length(self.domain, self.half_length);
        let factor = match self.domain {
            Domain::Circle => 1.0,
            Domain::Box => 2.0,
        };
        let complex: Vec<Vec<Complex64>> = family
            .bumps
            .iter()
            .map(|bump| {
                (0..=family.j_max)
                    .map(|j| {
                        let kappa = PI * j as f64 / cover;
                        let v = match &self.repr {
                            Representation::Mixture(c) => {
                                c.iter().map(|c| mixture_term(c, kappa, self.shear, bump.center, bump.width)).sum()
                            }
                            Representation::Grid(g) => grid_term(g, kappa, |p| bump.eval(p)),
                        };
                        v * factor
                    })
                    .collect()
            })
            .collect();
        unpack(family, &complex)
    }

    /// Pairing with a single member.
    pub fn weak_pair(&self, family: &TestFamily, idx: usize) -> Result<f64> {
        family.member(idx)?;
        Ok(self.pairings(family)[idx])
    }

    /// Integral over position for each momentum node of a grid density.
    pub fn momentum_marginal(&self) -> Result<Vec<f64>> {
        match &self.repr {
            Representation::Grid(g) => {
                let dq = g.dq();
                Ok((0..g.ps.len())
                    .map(|ip| (0..g.qs.len()).map(|iq| g.get(iq, ip)).sum::<f64>() * dq)
                    .collect())
            }
            Representation::Mixture(_) => Err(Error::MethodUnavailable("marginal of an analytic mixture")),
        }
    }
}

pub(crate) fn covering_half_length(domain: Domain, l: f64) -> f64 {
    match domain {
        Domain::Circle => l,
        Domain::Box => 2.0 * l,
    }
}

fn normal(x: f64, s: f64) -> f64 {
    (-0.5 * (x / s).powi(2)).exp() / ((2.0 * PI).sqrt() * s)
}

fn wrapped_gaussian(x: f64, s: f64, l: f64) -> f64 {
    if s.is_infinite() {
        return 1.0 / (2.0 * l);
    }
    let x = wrap_position(x, l);
    let reach = (8.0 * s / (2.0 * l)).ceil() as i64 + 1;
    (-reach..=reach).map(|n| normal(x - 2.0 * l * n as f64, s)).sum()
}

/// `int int N_wrap(q - tau p; q0, sq) N(p; p0, sp) e^{i kappa q} g(p) dq dp`.
fn mixture_term(c: &GaussianComponent, kappa: f64, tau: f64, center: f64, width: f64) -> Complex64 {
    let damp = if kappa == 0.0 {
        1.0
    } else {
        (-0.5 * (kappa * c.sigma_q).powi(2)).exp()
    };
    if damp == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let var = c.sigma_p * c.sigma_p + width * width;
    let amp = width / var.sqrt() * (-(c.p - center).powi(2) / (2.0 * var)).exp();
    let mu = (c.p * width * width + center * c.sigma_p * c.sigma_p) / var;
    let s2 = c.sigma_p * c.sigma_p * width * width / var;
    let omega = kappa * tau;
    let phase = Complex64::new(-0.5 * omega * omega * s2, kappa * c.q + omega * mu).exp();
    c.weight * damp * amp * phase
}

fn grid_term(g: &PhaseGrid, kappa: f64, bump: impl Fn(f64) -> f64) -> Complex64 {
    let np = g.ps.len();
    let gp: Vec<f64> = g.ps.iter().zip(&g.wp).map(|(&p, &w)| bump(p) * w).collect();
    let mut s = Complex64::new(0.0, 0.0);
    for (iq, &q) in g.qs.iter().enumerate() {
        let row = &g.values[iq * np..(iq + 1) * np];
        let r: f64 = row.iter().zip(&gp).map(|(v, w)| v * w).sum();
        s += Complex64::from_polar(r, kappa * q);
    }
    s * g.dq()
}

/// Shifts each momentum slice by `p tau` with the Fourier shift theorem.
fn shift_slices(g: &PhaseGrid, tau: f64, cover: f64) -> PhaseGrid {
    let nq = g.qs.len();
    let np = g.ps.len();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(nq);
    let inv = planner.plan_fft_inverse(nq);
    let mut values = vec![0.0; g.values.len()];
    let mut buf = vec![Complex64::new(0.0, 0.0); nq];
    for ip in 0..np {
        for (iq, b) in buf.iter_mut().enumerate() {
            *b = Complex64::new(g.get(iq, ip), 0.0);
        }
        fwd.process(&mut buf);
        let shift = g.ps[ip] * tau;
        for (k, b) in buf.iter_mut().enumerate() {
            let signed = if 2 * k < nq { k as i64 } else { k as i64 - nq as i64 };
            let kappa = PI * signed as f64 / cover;
            if 2 * k == nq {
                *b *= (kappa * shift).cos();
            } else {
                *b *= Complex64::from_polar(1.0, -kappa * shift);
            }
        }
        inv.process(&mut buf);
        for iq in 0..nq {
            values[iq * np + ip] = buf[iq].re / nq as f64;
        }
    }
    PhaseGrid { values, ..g.clone() }
}

/// Free transport; see [`ClassicalDensity::transport`].
pub fn classical_transport(sigma: &ClassicalDensity, t: f64) -> Result<ClassicalDensity> {
    sigma.transport(t)
}

/// Position-averaged limit; see [`ClassicalDensity::kozlov_limit`].
pub fn kozlov_limit(sigma: &ClassicalDensity) -> ClassicalDensity {
    sigma.kozlov_limit()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blob(domain: Domain) -> ClassicalDensity {
        ClassicalDensity::gaussian_mixture(
            domain,
            1.0,
            1.0,
            &[GaussianComponent {
                weight: 1.0,
                q: 0.2,
                p: 1.0,
                sigma_q: 0.1,
                sigma_p: 0.1,
            }],
        )
        .unwrap()
    }

    fn sampled(domain: Domain) -> ClassicalDensity {
        let b = blob(domain);
        let ps: Vec<f64> = (0..201).map(|i| -2.0 + 0.02 * i as f64).collect();
        let wp = vec![0.02; ps.len()];
        ClassicalDensity::sample(domain, 1.0, 1.0, 128, ps, wp, |q, p| b.value(q, p).unwrap()).unwrap()
    }

    #[test]
    fn grid_and_mixture_pairings_agree() {
        let fam = TestFamily::standard(1.0).unwrap();
        for d in [Domain::Circle, Domain::Box] {
            let a = blob(d).transport(0.3).unwrap().pairings(&fam);
            let b = sampled(d).transport(0.3).unwrap().pairings(&fam);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-8, "{d:?}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn transport_conserves_marginals() {
        let s = sampled(Domain::Circle);
        let t = s.transport(3.7).unwrap();
        for (a, b) in s.momentum_marginal().unwrap().iter().zip(&t.momentum_marginal().unwrap()) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn kozlov_is_fixed_point() {
        let fam = TestFamily::standard(1.0).unwrap();
        let k = blob(Domain::Circle).kozlov_limit();
        let a = k.pairings(&fam);
        let b = k.kozlov_limit().transport(5.0).unwrap().pairings(&fam);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-15);
        }
    }
}
