//! Density-operator mixtures of coherent states and their Husimi functions.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::box_well::{box_norm_sq, box_overlap_unchecked, lifted_pair, ExclusionZone};
use crate::circle::{circle_coefficient, circle_norm_sq, circle_overlap, circle_window};
use crate::classical::{covering_half_length, ClassicalDensity, Representation};
use crate::error::{Error, Result};
use crate::numeric::{cis_turns, frac_product};
use crate::params::{Domain, PhasePoint, PhysicalParams};
use crate::quad::{periodic_trapezoid, CompositeRule};
use crate::scales::revival_time;
use crate::state::{EvalMethod, WaveState};
use crate::testfns::{unpack, TestFamily};

const PI: f64 = std::f64::consts::PI;
const CHUNK: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub weight: f64,
    pub phase: PhasePoint,
}

/// `rho = sum_i w_i P[upsilon_i] / ||upsilon_i||^2` (box: `omega_i`), evolved to `time`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperatorMixture {
    params: PhysicalParams,
    domain: Domain,
    atoms: Vec<Atom>,
    inv_norms: Vec<f64>,
    time: f64,
}

fn coherent_norm_sq(params: &PhysicalParams, domain: Domain, phase: PhasePoint) -> Result<f64> {
    match domain {
        Domain::Circle => circle_norm_sq(params, phase),
        Domain::Box => box_norm_sq(params, phase),
    }
}

fn coherent_overlap(params: &PhysicalParams, domain: Domain, a: PhasePoint, b: PhasePoint, t: f64) -> Result<Complex64> {
    match domain {
        Domain::Circle => circle_overlap(params, a, b, t),
        Domain::Box => box_overlap_unchecked(params, a, b, t),
    }
}

impl DensityOperatorMixture {
    /// Weights must be non-negative; they are rescaled to sum to one.
    pub fn new(params: &PhysicalParams, domain: Domain, atoms: Vec<Atom>) -> Result<Self> {
        let total: f64 = atoms.iter().map(|a| a.weight).sum();
        if atoms.is_empty() || !(total > 0.0) || atoms.iter().any(|a| !(a.weight >= 0.0)) {
            return Err(Error::contract("mixture weights must be non-negative with positive sum"));
        }
        let l = params.half_length();
        let zone = ExclusionZone::default_for(params);
        let atoms: Vec<Atom> = atoms
            .into_iter()
            .map(|a| Atom {
                weight: a.weight / total,
                ..a
            })
            .collect();
        let inv_norms = atoms
            .par_iter()
            .map(|a| {
                if domain == Domain::Box {
                    if !(a.phase.q >= -l && a.phase.q <= l) {
                        return Err(Error::invalid("q", format!("{} outside the box", a.phase.q)));
                    }
                    if zone.contains(a.phase, l) {
                        return Err(Error::Degenerate {
                            q: a.phase.q,
                            p: a.phase.p,
                        });
                    }
                }
                Ok(1.0 / coherent_norm_sq(params, domain, a.phase)?)
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(Self {
            params: *params,
            domain,
            atoms,
            inv_norms,
            time: 0.0,
        })
    }

    /// The pure state `P[upsilon / ||upsilon||]`.
    pub fn single(params: &PhysicalParams, domain: Domain, phase: PhasePoint) -> Result<Self> {
        Self::new(params, domain, vec![Atom { weight: 1.0, phase }])
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn evolve(&self, t: f64) -> Self {
        Self {
            time: self.time + t,
            ..self.clone()
        }
    }

    /// `(1 / 2 pi hbar) (upsilon_x, rho upsilon_x)`.
    pub fn husimi(&self, x: PhasePoint) -> Result<f64> {
        let mut s = 0.0;
        for (a, inv) in self.atoms.iter().zip(&self.inv_norms) {
            let o = coherent_overlap(&self.params, self.domain, x, a.phase, self.time)?;
            s += a.weight * inv * o.norm_sqr();
        }
        Ok(s / (2.0 * PI * self.params.hbar()))
    }

    /// Husimi values at every node of `quad`, row-major in `(q, p)`.
    pub fn husimi_grid(&self, quad: &PhaseQuadrature) -> Result<Vec<f64>> {
        let np = quad.ps.len();
        (0..quad.qs.len() * np)
            .into_par_iter()
            .map(|i| self.husimi(PhasePoint::new(quad.qs[i / np], quad.ps[i % np])))
            .collect()
    }

    /// Pairings of the Husimi function with every member of `family`, summed in mode space.
    pub fn pairings(&self, family: &TestFamily) -> Result<Vec<f64>> {
        let weighted: Vec<(PhasePoint, f64)> = self
            .atoms
            .iter()
            .zip(&self.inv_norms)
            .map(|(a, inv)| (a.phase, a.weight * inv))
            .collect();
        spectral_pairings(&self.params, self.domain, &weighted, self.time, family)
    }

    /// `int |rho(q, q)| dq` distance to the position marginal of the Husimi function.
    pub fn position_marginal_gap(&self, quad: &PhaseQuadrature) -> Result<f64> {
        let h = self.husimi_grid(quad)?;
        let np = quad.ps.len();
        let states = self
            .atoms
            .iter()
            .map(|a| {
                let s = match self.domain {
                    Domain::Circle => crate::circle::make_circle_state(&self.params, a.phase)?,
                    Domain::Box => crate::box_well::make_box_state_with(&self.params, a.phase, ExclusionZone::none())?,
                };
                Ok(s.evolve(self.time))
            })
            .collect::<Result<Vec<WaveState>>>()?;
        let mut gap = 0.0;
        for (iq, (&q, &wq)) in quad.qs.iter().zip(&quad.wq).enumerate() {
            let marginal: f64 = (0..np).map(|ip| h[iq * np + ip] * quad.wp[ip]).sum();
            let mut dens = 0.0;
            for ((s, a), inv) in states.iter().zip(&self.atoms).zip(&self.inv_norms) {
                dens += a.weight * inv * s.eval(q, EvalMethod::Spectral)?.norm_sqr();
            }
            gap += wq * (marginal - dens).abs();
        }
        Ok(gap)
    }
}

/// Free-function form of [`DensityOperatorMixture::husimi`].
pub fn husimi(rho: &DensityOperatorMixture, phase: PhasePoint) -> Result<f64> {
    rho.husimi(phase)
}

/// Tensor quadrature on phase space: positions times momenta.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseQuadrature {
    pub qs: Vec<f64>,
    pub wq: Vec<f64>,
    pub ps: Vec<f64>,
    pub wp: Vec<f64>,
}

impl PhaseQuadrature {
    /// Periodic trapezoid on the circle, Gauss-Legendre panels of 16 nodes in the box;
    /// Gauss-Legendre panels of 16 nodes on `[p_lo, p_hi]` in momentum.
    pub fn new(domain: Domain, l: f64, nq: usize, p_lo: f64, p_hi: f64, np: usize) -> Result<Self> {
        if nq < 2 || np < 2 || !(p_hi > p_lo) {
            return Err(Error::invalid("quadrature", "need nq, np >= 2 and p_hi > p_lo"));
        }
        let (qs, wq) = match domain {
            Domain::Circle => {
                let (qs, h) = periodic_trapezoid(-l, l, nq);
                let n = qs.len();
                (qs, vec![h; n])
            }
            Domain::Box => {
                let r = CompositeRule::new(-l, l, nq.div_ceil(16), 16);
                (r.nodes, r.weights)
            }
        };
        let r = CompositeRule::new(p_lo, p_hi, np.div_ceil(16), 16);
        Ok(Self {
            qs,
            wq,
            ps: r.nodes,
            wp: r.weights,
        })
    }

    pub fn len(&self) -> usize {
        self.qs.len() * self.ps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `sum w_q w_p f(q_i, p_j)` for row-major node values.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        let np = self.ps.len();
        let mut s = 0.0;
        for (iq, wq) in self.wq.iter().enumerate() {
            let row: f64 = (0..np).map(|ip| values[iq * np + ip] * self.wp[ip]).sum();
            s += wq * row;
        }
        s
    }
}

/// Discretizes `int sigma P[upsilon] / ||upsilon||^2` with one atom per quadrature node.
///
/// Sampled densities use their own nodes and ignore `quad`. Atoms carrying
/// less than `1e-15` of the mass are dropped before renormalization.
pub fn rho_from_classical(
    sigma: &ClassicalDensity,
    params: &PhysicalParams,
    quad: Option<&PhaseQuadrature>,
) -> Result<DensityOperatorMixture> {
    let domain = sigma.domain();
    let l = params.half_length();
    if (sigma.half_length() - l).abs() > 1e-12 * l {
        return Err(Error::contract("density and parameters describe different domains"));
    }
    let mut atoms = Vec::new();
    match sigma.representation() {
        Representation::Mixture(comps) if comps.iter().all(|c| c.sigma_q == 0.0 && c.sigma_p == 0.0) => {
            for c in comps {
                let ph = match domain {
                    Domain::Circle => PhasePoint::new(c.q, c.p),
                    Domain::Box => crate::box_well::uncover(PhasePoint::new(c.q, c.p), l),
                };
                atoms.push(Atom {
                    weight: c.weight,
                    phase: ph,
                });
            }
            if sigma.elapsed() != 0.0 {
                return Err(Error::contract("point densities are discretized before transport"));
            }
        }
        Representation::Mixture(_) => {
            let quad = quad.ok_or_else(|| Error::contract("analytic densities need a quadrature"))?;
            let np = quad.ps.len();
            for i in 0..quad.len() {
                let (q, p) = (quad.qs[i / np], quad.ps[i % np]);
                let w = sigma.value(q, p)? * quad.wq[i / np] * quad.wp[i % np];
                atoms.push(Atom {
                    weight: w,
                    phase: PhasePoint::new(q, p),
                });
            }
        }
        Representation::Grid(g) => {
            let dq = g.dq();
            for (iq, &q) in g.qs.iter().enumerate() {
                for (ip, (&p, &wp)) in g.ps.iter().zip(&g.wp).enumerate() {
                    let ph = match domain {
                        Domain::Circle => PhasePoint::new(q, p),
                        Domain::Box => crate::box_well::uncover(PhasePoint::new(q, p), l),
                    };
                    atoms.push(Atom {
                        weight: g.get(iq, ip) * dq * wp,
                        phase: ph,
                    });
                }
            }
        }
    }
    if atoms.iter().any(|a| !(a.weight >= 0.0)) {
        return Err(Error::contract("classical density has negative values"));
    }
    let total: f64 = atoms.iter().map(|a| a.weight).sum();
    let zone = ExclusionZone::default_for(params);
    let mut kept = Vec::with_capacity(atoms.len());
    for a in atoms {
        if a.weight <= 1e-15 * total {
            continue;
        }
        if domain == Domain::Box && zone.contains(a.phase, l) {
            return Err(Error::Degenerate {
                q: a.phase.q,
                p: a.phase.p,
            });
        }
        kept.push(a);
    }
    DensityOperatorMixture::new(params, domain, kept)
}

/// Husimi pairings of `rho = sum_i w_i |upsilon_i><upsilon_i|` evolved to `time`.
///
/// With `A_k(p)` the modulus of the coherent coefficient on mode `k`, pairing
/// with `e^{i pi j q / L} g(p)` is `(2L / 2 pi hbar) sum_k rho_{k,k+j}(t) int A_k A_{k+j} g dp`.
/// Box atoms are odd combinations on the doubled circle; their pairing is doubled.
pub(crate) fn spectral_pairings(
    params: &PhysicalParams,
    domain: Domain,
    atoms: &[(PhasePoint, f64)],
    time: f64,
    family: &TestFamily,
) -> Result<Vec<f64>> {
    let l = params.half_length();
    let cover_l = covering_half_length(domain, l);
    let cov = params.with_half_length(cover_l)?;
    let jn = family.j_max as usize + 1;

    let windows = atoms
        .iter()
        .map(|(ph, _)| atom_windows(&cov, domain, *ph))
        .collect::<Result<Vec<_>>>()?;
    let k_lo = windows.iter().flatten().map(|w| w.0).min().unwrap_or(0);
    let k_hi = windows.iter().flatten().map(|w| w.1).max().unwrap_or(0);
    let width = (k_hi - k_lo + 1) as usize;

    let partials: Vec<Vec<Complex64>> = atoms
        .par_chunks(CHUNK)
        .zip(windows.par_chunks(CHUNK))
        .map(|(chunk, wins)| {
            let mut rho = vec![Complex64::new(0.0, 0.0); jn * width];
            let mut coeff = vec![Complex64::new(0.0, 0.0); width + jn];
            for ((ph, w), win) in chunk.iter().zip(wins) {
                let lo = win.iter().map(|w| w.0).min().unwrap();
                let hi = win.iter().map(|w| w.1).max().unwrap();
                let span = (hi - lo + 1) as usize;
                coeff[..span + jn].iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
                fill_coefficients(&cov, domain, *ph, lo, win, &mut coeff[..span]);
                for i in 0..span {
                    let ck = coeff[i];
                    if ck == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let row = (lo - k_lo) as usize + i;
                    for j in 0..jn {
                        let cn = coeff[i + j];
                        rho[j * width + row] += ck * cn.conj() * *w;
                    }
                }
            }
            rho
        })
        .collect();
    let mut rho = vec![Complex64::new(0.0, 0.0); jn * width];
    for part in partials {
        for (a, b) in rho.iter_mut().zip(part) {
            *a += b;
        }
    }

    let s = time / revival_time(&cov, Domain::Circle);
    let hbar = params.hbar();
    let a2 = (params.alpha() / hbar).powi(2);
    let n2 = (2.0 * PI).sqrt() * params.alpha() / cover_l;
    let pref = 2.0 * cover_l / (2.0 * PI * hbar)
        * match domain {
            Domain::Circle => 1.0,
            Domain::Box => 2.0,
        };
    let complex: Vec<Vec<Complex64>> = family
        .bumps
        .iter()
        .map(|bump| {
            let b = 1.0 / (2.0 * bump.width * bump.width);
            let a = 2.0 * a2;
            let norm = n2 * (PI / (a + b)).sqrt();
            let rate = a * b / (a + b);
            (0..jn)
                .map(|j| {
                    let jf = j as f64;
                    let gap = (-a2 * (hbar * PI * jf / cover_l).powi(2) / 2.0).exp();
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in 0..width {
                        let r = rho[j * width + i];
                        if r == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        let k = k_lo + i as i64;
                        let mid = hbar * PI * (k as f64 + 0.5 * jf) / cover_l;
                        let bkj = norm * gap * (-rate * (mid - bump.center).powi(2)).exp();
                        let turns = frac_product((2 * k * j as i64 + (j * j) as i64) as f64, s);
                        acc += r * cis_turns(turns) * bkj;
                    }
                    acc * pref
                })
                .collect()
        })
        .collect();
    Ok(unpack(family, &complex))
}

type Window = (i64, i64);

fn atom_windows(cov: &PhysicalParams, domain: Domain, ph: PhasePoint) -> Result<Vec<Window>> {
    match domain {
        Domain::Circle => Ok(vec![circle_window(cov, ph.p)?]),
        Domain::Box => {
            let a = circle_window(cov, ph.p)?;
            let b = circle_window(cov, -ph.p)?;
            if a.0.max(b.0) <= a.1.min(b.1) + 1 {
                Ok(vec![(a.0.min(b.0), a.1.max(b.1))])
            } else {
                Ok(vec![a, b])
            }
        }
    }
}

fn fill_coefficients(cov: &PhysicalParams, domain: Domain, ph: PhasePoint, lo: i64, win: &[Window], out: &mut [Complex64]) {
    match domain {
        Domain::Circle => {
            let (a, b) = win[0];
            for k in a..=b {
                out[(k - lo) as usize] = circle_coefficient(cov, ph, k);
            }
        }
        Domain::Box => {
            // The reflected partner has c^B_k = c^A_{-k}, so one window of A suffices.
            let (pa, _) = lifted_pair(ph, cov.half_length() / 2.0);
            let (a0, a1) = circle_window(cov, ph.p).expect("window checked by caller");
            for k in a0..=a1 {
                let c = circle_coefficient(cov, pa, k) * std::f64::consts::FRAC_1_SQRT_2;
                out[(k - lo) as usize] += c;
                out[(-k - lo) as usize] -= c;
            }
        }
    }
}

/// Pairings of `b -> transition_density(a, b, t)` with every member of `family`.
pub fn transition_pairings(
    params: &PhysicalParams,
    a: PhasePoint,
    t: f64,
    domain: Domain,
    family: &TestFamily,
) -> Result<Vec<f64>> {
    // |(u_a, u_{b,t})|^2 = |(u_{a,-t}, u_b)|^2: the Husimi function of the unnormalized u_{a,-t}.
    spectral_pairings(params, domain, &[(a, 1.0)], -t, family)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectral_pairings_match_grid_quadrature() {
        let p = PhysicalParams::new(0.05, 1.0, 0.15, 1.0).unwrap();
        let fam = TestFamily::new(3, vec![crate::testfns::Bump { center: 1.0, width: 0.4 }]).unwrap();
        for (domain, ph) in [(Domain::Circle, PhasePoint::new(0.3, 1.0)), (Domain::Box, PhasePoint::new(0.3, 0.8))] {
            let rho = DensityOperatorMixture::single(&p, domain, ph).unwrap().evolve(0.9);
            let spec = rho.pairings(&fam).unwrap();
            let quad = PhaseQuadrature::new(domain, 1.0, 128, -3.0, 3.0, 192).unwrap();
            let h = rho.husimi_grid(&quad).unwrap();
            for (idx, want) in spec.iter().enumerate() {
                let vals: Vec<f64> = (0..quad.len())
                    .map(|i| {
                        let (q, pp) = (quad.qs[i / quad.ps.len()], quad.ps[i % quad.ps.len()]);
                        h[i] * fam.eval(idx, q, pp, domain, 1.0).unwrap()
                    })
                    .collect();
                let direct = quad.integrate(&vals);
                assert!((direct - want).abs() < 1e-9, "{domain:?} {idx}: {direct} vs {want}");
            }
        }
    }
}
