//! A box whose half-length is only known up to a random error.
//!
//! The half-length `l` is drawn from a density `f(l)` and each `l` carries its
//! own state `psi_l`. The mixed position density `P(x, t)` stops being periodic
//! in time and settles to a limit `P_inf(x)`, which splits into the uniform
//! part `int chi_l / 2l f dl` minus a correction `Delta(x)`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::box_well::{box_coefficient, box_window, ExclusionZone};
use crate::error::{Error, Result};
use crate::numeric::{cis_turns, frac_product, TWO_PI};
use crate::params::{PhasePoint, PhysicalParams};
use crate::quad::{gauss_legendre, CompositeRule};
use crate::sampled::SampledFunction;
use crate::tolerances::{L_BASE_ORDER, L_MAX_NODES, L_PHASE_STEP};

const PI: f64 = std::f64::consts::PI;

/// Modes with `|a_k|^2` below this are dropped from the ends of a window.
const MODE_TRIM: f64 = 1e-18;

/// Truncation of the length density, in units of its width.
const SUPPORT_WIDTHS: f64 = 4.0;

const PANEL_ORDER: usize = 32;

/// Truncated Gaussian density of the half-length, renormalized on its support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthDensity {
    center: f64,
    width: f64,
    norm: f64,
}

impl LengthDensity {
    pub fn truncated_gaussian(center: f64, width: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::invalid("width", format!("must be positive, got {width}")));
        }
        if !(center - SUPPORT_WIDTHS * width > 0.0) || !center.is_finite() {
            return Err(Error::invalid(
                "center",
                format!("support [{}, {}] must stay above l = 0", center - 4.0 * width, center + 4.0 * width),
            ));
        }
        let mut d = Self {
            center,
            width,
            norm: 1.0,
        };
        let (lo, hi) = d.support();
        let rule = CompositeRule::new(lo, hi, 8, PANEL_ORDER);
        d.norm = rule.integrate(|l| d.pdf(l));
        Ok(d)
    }

    /// Width `0.02 l0` around `l0`.
    pub fn default_for(center: f64) -> Result<Self> {
        Self::truncated_gaussian(center, 0.02 * center)
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn support(&self) -> (f64, f64) {
        (
            self.center - SUPPORT_WIDTHS * self.width,
            self.center + SUPPORT_WIDTHS * self.width,
        )
    }

    pub fn pdf(&self, l: f64) -> f64 {
        let (lo, hi) = self.support();
        if l < lo || l > hi {
            return 0.0;
        }
        let u = (l - self.center) / self.width;
        (-0.5 * u * u).exp() / self.norm
    }

    /// `int f dl` by an independent Gauss-Legendre rule.
    pub fn total(&self) -> f64 {
        let (lo, hi) = self.support();
        let (x, w) = gauss_legendre(L_BASE_ORDER);
        let h = 0.5 * (hi - lo);
        x.iter().zip(&w).map(|(x, w)| w * h * self.pdf(lo + h * (x + 1.0))).sum()
    }
}

/// How the state `psi_l` is chosen for each half-length.
#[derive(Debug, Clone, PartialEq)]
pub enum StateFamily {
    /// Box coherent state at `(q_rel * l, p)`.
    Coherent { q_rel: f64, p: f64 },
    /// Eigenfunction `sin(pi k (x - l) / 2l) / sqrt(l)`.
    Eigenstate { k: i64 },
    /// A fixed profile on the unit box, rescaled to every `l`; coefficients of modes `1..`.
    Profile { coefficients: Vec<Complex64> },
}

impl StateFamily {
    /// Projects a profile sampled on `[-1, 1]` onto the first `modes` box modes.
    pub fn from_profile(profile: &SampledFunction, modes: usize) -> Result<Self> {
        if (profile.start + 1.0).abs() > 1e-12 || (profile.end() - 1.0).abs() > 1e-12 {
            return Err(Error::contract("profile must be sampled on [-1, 1]"));
        }
        if modes == 0 || 4.0 / (modes as f64 * profile.step) < 8.0 {
            return Err(Error::contract(format!(
                "{} samples cannot resolve {modes} modes at 8 points per wavelength",
                profile.len()
            )));
        }
        let mut coefficients = Vec::with_capacity(modes);
        for k in 1..=modes as i64 {
            let basis = SampledFunction {
                start: profile.start,
                step: profile.step,
                values: profile
                    .xs()
                    .iter()
                    .map(|&u| Complex64::new((TWO_PI * frac_product(k as f64, (u - 1.0) / 4.0)).sin(), 0.0))
                    .collect(),
            };
            coefficients.push(basis.inner(profile)?);
        }
        let n: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(n > 0.0) {
            return Err(Error::contract("profile has no weight on the retained modes"));
        }
        coefficients.iter_mut().for_each(|c| *c /= n);
        Ok(StateFamily::Profile { coefficients })
    }
}

/// Normalized box coefficients `a_k` for `k = k_min..`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSet {
    pub k_min: i64,
    pub coeffs: Vec<Complex64>,
}

impl ModeSet {
    pub fn k_max(&self) -> i64 {
        self.k_min + self.coeffs.len() as i64 - 1
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `psi_l(y)` from the sine series; automatically the odd `4l`-periodic extension.
    pub fn eval(&self, y: f64, l: f64) -> Complex64 {
        let u = (y - l) / (4.0 * l);
        let mut s = Complex64::new(0.0, 0.0);
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = (self.k_min + i as i64) as f64;
            s += c * (TWO_PI * frac_product(k, u)).sin();
        }
        s / l.sqrt()
    }
}

/// The random-length box: `f(l)`, the state rule and the remaining constants.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomBoxModel {
    density: LengthDensity,
    family: StateFamily,
    params: PhysicalParams,
    k_lo: i64,
    k_hi: i64,
}

impl RandomBoxModel {
    /// `params` supplies `hbar`, `m` and `alpha`; its half-length is replaced per node.
    pub fn new(density: LengthDensity, family: StateFamily, params: PhysicalParams) -> Result<Self> {
        match &family {
            StateFamily::Coherent { q_rel, p } => {
                if !(q_rel.abs() < 1.0 && p.is_finite()) {
                    return Err(Error::invalid("q_rel", format!("must lie in (-1, 1), got {q_rel}")));
                }
                let (lo, hi) = density.support();
                params.with_half_length(lo)?.require_packet_fits()?;
                for l in [lo, hi] {
                    let pl = params.with_half_length(l)?;
                    let ph = PhasePoint::new(q_rel * l, *p);
                    if ExclusionZone::default_for(&pl).contains(ph, l) {
                        return Err(Error::Degenerate { q: ph.q, p: ph.p });
                    }
                }
            }
            StateFamily::Eigenstate { k } => {
                if *k < 1 {
                    return Err(Error::invalid("k", format!("eigenstate index must be >= 1, got {k}")));
                }
            }
            StateFamily::Profile { coefficients } => {
                if coefficients.is_empty() {
                    return Err(Error::invalid("coefficients", "profile family has no modes"));
                }
            }
        }
        let mut m = Self {
            density,
            family,
            params,
            k_lo: 1,
            k_hi: 1,
        };
        let (lo, hi) = density.support();
        let (a, b) = (m.modes(lo)?, m.modes(hi)?);
        m.k_lo = a.k_min.min(b.k_min);
        m.k_hi = a.k_max().max(b.k_max());
        Ok(m)
    }

    pub fn density(&self) -> &LengthDensity {
        &self.density
    }

    pub fn family(&self) -> &StateFamily {
        &self.family
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    /// Smallest and largest retained mode over the support.
    pub fn mode_range(&self) -> (i64, i64) {
        (self.k_lo, self.k_hi)
    }

    /// `16 m l^2 / (pi hbar)`.
    pub fn revival_time(&self, l: f64) -> f64 {
        16.0 * self.params.mass() * l * l / (PI * self.params.hbar())
    }

    /// Unit-norm coefficients of `psi_l`.
    pub fn modes(&self, l: f64) -> Result<ModeSet> {
        match &self.family {
            StateFamily::Eigenstate { k } => Ok(ModeSet {
                k_min: *k,
                coeffs: vec![Complex64::new(1.0, 0.0)],
            }),
            StateFamily::Profile { coefficients } => Ok(ModeSet {
                k_min: 1,
                coeffs: coefficients.clone(),
            }),
            StateFamily::Coherent { q_rel, p } => {
                let pl = self.params.with_half_length(l)?;
                let ph = PhasePoint::new(q_rel * l, *p);
                let (lo, hi) = box_window(&pl, ph.p)?;
                let mut coeffs: Vec<Complex64> = (lo..=hi).map(|k| box_coefficient(&pl, ph, k)).collect();
                let n = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                coeffs.iter_mut().for_each(|c| *c /= n);
                let first = coeffs.iter().position(|c| c.norm_sqr() >= MODE_TRIM).unwrap_or(0);
                let last = coeffs.iter().rposition(|c| c.norm_sqr() >= MODE_TRIM).unwrap_or(coeffs.len() - 1);
                let mut kept = coeffs[first..=last].to_vec();
                let n = kept.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                kept.iter_mut().for_each(|c| *c /= n);
                Ok(ModeSet {
                    k_min: lo + first as i64,
                    coeffs: kept,
                })
            }
        }
    }
}

/// Equally spaced sampling times `start + j * width / (samples - 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeWindow {
    pub start: f64,
    pub width: f64,
    pub samples: usize,
}

impl TimeWindow {
    /// `[10 T, 50 T]` with 4096 samples, `T` the revival time at the center length.
    pub fn standard(model: &RandomBoxModel) -> Self {
        let t = model.revival_time(model.density.center);
        Self {
            start: 10.0 * t,
            width: 40.0 * t,
            samples: 4096,
        }
    }

    /// The mirror window `[-start - width, -start]`.
    pub fn reversed(&self) -> Self {
        Self {
            start: -self.start - self.width,
            ..*self
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.samples).map(|j| self.start + self.step() * j as f64).collect()
    }

    fn step(&self) -> f64 {
        if self.samples > 1 {
            self.width / (self.samples - 1) as f64
        } else {
            0.0
        }
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 || !(self.width >= 0.0) || !self.start.is_finite() || !self.width.is_finite() {
            return Err(Error::invalid("window", "needs at least one sample and a finite non-negative width"));
        }
        Ok(())
    }

    fn latest(&self) -> f64 {
        self.start.abs().max((self.start + self.width).abs())
    }
}

/// Position density on a grid with quadrature weights; `time` is `None` for the limit.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionDensity {
    pub xs: Vec<f64>,
    pub weights: Vec<f64>,
    pub values: Vec<f64>,
    pub time: Option<f64>,
}

impl PositionDensity {
    pub fn mass(&self) -> f64 {
        self.weights.iter().zip(&self.values).map(|(w, v)| w * v).sum()
    }

    pub fn is_limit(&self) -> bool {
        self.time.is_none()
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

/// Positions with quadrature weights covering `[-l_max, l_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionGrid {
    pub xs: Vec<f64>,
    pub weights: Vec<f64>,
}

impl PositionGrid {
    /// Gauss-Legendre panels, split where the support of `f` starts.
    pub fn gauss(model: &RandomBoxModel, panels: usize) -> Self {
        let (lo, hi) = model.density.support();
        let inner = panels.max(1);
        let outer = (panels / 4).max(1);
        let mut xs = Vec::new();
        let mut weights = Vec::new();
        for (a, b, n) in [(-hi, -lo, outer), (-lo, lo, inner), (lo, hi, outer)] {
            let r = CompositeRule::new(a, b, n, 16);
            xs.extend(r.nodes);
            weights.extend(r.weights);
        }
        Self { xs, weights }
    }

    /// `n` equally spaced points with trapezoid weights.
    pub fn uniform(model: &RandomBoxModel, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("n", "uniform grid needs at least two points"));
        }
        let hi = model.density.support().1;
        let h = 2.0 * hi / (n - 1) as f64;
        let xs = (0..n).map(|i| -hi + h * i as f64).collect();
        let weights = (0..n)
            .map(|i| if i == 0 || i == n - 1 { 0.5 * h } else { h })
            .collect();
        Ok(Self { xs, weights })
    }
}

/// Extends a function on `[-l, l]` oddly about the walls and `4l`-periodically.
pub fn odd_periodic_extend(psi: impl Fn(f64) -> Complex64, x: f64, l: f64) -> Complex64 {
    let n = (x / (2.0 * l)).round();
    let y = x - 2.0 * l * n;
    if (n as i64).rem_euclid(2) == 0 {
        psi(y)
    } else {
        -psi(-y)
    }
}

#[derive(Debug, Clone, Copy)]
enum Kernel {
    Instant(f64),
    Limit,
    Delta,
    Window(TimeWindow),
}

impl Kernel {
    fn latest_time(&self) -> f64 {
        match self {
            Kernel::Instant(t) => t.abs(),
            Kernel::Window(w) => w.latest(),
            Kernel::Limit | Kernel::Delta => 0.0,
        }
    }
}

/// Per-node data shared by every position evaluated on that node.
struct NodeData {
    modes: ModeSet,
    phases: Vec<Complex64>,
    /// Upper triangle of `Re(a_i conj(a_j) D_ij)` with the diagonal, row-major.
    form: Vec<f64>,
}

fn node_data(model: &RandomBoxModel, l: f64, kernel: &Kernel) -> Result<NodeData> {
    let modes = model.modes(l)?;
    let t_rev = model.revival_time(l);
    let ks: Vec<f64> = (0..modes.coeffs.len()).map(|i| (modes.k_min + i as i64) as f64).collect();
    let mut phases = Vec::new();
    let mut form = Vec::new();
    match kernel {
        Kernel::Instant(t) => {
            let s = t / t_rev;
            phases = ks.iter().map(|k| cis_turns(-frac_product(k * k, s))).collect();
        }
        Kernel::Window(w) => {
            let n = w.samples as f64;
            let start = w.start / t_rev;
            let step = w.step() / t_rev;
            let kn = ks.len();
            let a = &modes.coeffs;
            form = vec![0.0; kn * kn];
            for i in 0..kn {
                form[i * kn + i] = a[i].norm_sqr();
                for j in i + 1..kn {
                    let d = ks[i] * ks[i] - ks[j] * ks[j];
                    let x = frac_product(d, step);
                    let x = if x >= 0.5 { x - 1.0 } else { x };
                    let ratio = if x.abs() < 1e-9 {
                        1.0 - (n * n - 1.0) * (PI * x).powi(2) / 6.0
                    } else {
                        (PI * n * x).sin() / (n * (PI * x).sin())
                    };
                    let phase = frac_product(d, start) + 0.5 * (n - 1.0) * x;
                    form[i * kn + j] = (a[i] * a[j].conj() * cis_turns(-phase)).re * ratio;
                }
            }
        }
        Kernel::Limit | Kernel::Delta => {}
    }
    Ok(NodeData { modes, phases, form })
}

/// `e^{i k theta}` for the retained modes, `theta = pi (x - l) / 2l` times `harmonic`.
fn rotations(modes: &ModeSet, x: f64, l: f64, harmonic: f64, out: &mut Vec<Complex64>) {
    out.clear();
    let z = cis_turns(harmonic * (x - l) / (4.0 * l));
    let mut w = cis_turns(frac_product(modes.k_min as f64, harmonic * (x - l) / (4.0 * l)));
    for _ in 0..modes.coeffs.len() {
        out.push(w);
        w *= z;
    }
}

fn integrand(data: &NodeData, kernel: &Kernel, x: f64, l: f64, rot: &mut Vec<Complex64>) -> f64 {
    let a = &data.modes.coeffs;
    match kernel {
        Kernel::Instant(_) => {
            rotations(&data.modes, x, l, 1.0, rot);
            let mut s = Complex64::new(0.0, 0.0);
            for ((c, e), r) in a.iter().zip(&data.phases).zip(rot.iter()) {
                s += c * e * r.im;
            }
            s.norm_sqr() / l
        }
        Kernel::Limit => {
            rotations(&data.modes, x, l, 1.0, rot);
            a.iter().zip(rot.iter()).map(|(c, r)| c.norm_sqr() * r.im * r.im).sum::<f64>() / l
        }
        Kernel::Delta => {
            rotations(&data.modes, x, l, 2.0, rot);
            a.iter().zip(rot.iter()).map(|(c, r)| c.norm_sqr() * r.re).sum::<f64>() / (2.0 * l)
        }
        Kernel::Window(_) => {
            rotations(&data.modes, x, l, 1.0, rot);
            let kn = rot.len();
            let mut acc = 0.0;
            for i in 0..kn {
                let row = &data.form[i * kn..(i + 1) * kn];
                let mut r = row[i] * rot[i].im;
                for j in i + 1..kn {
                    r += 2.0 * row[j] * rot[j].im;
                }
                acc += rot[i].im * r;
            }
            acc / l
        }
    }
}

/// Upper bound on how fast the integrand turns with `l`, in radians per unit length.
fn phase_rate(model: &RandomBoxModel, kernel: &Kernel, x_max: f64, l_min: f64) -> f64 {
    let (k_lo, k_hi) = (model.k_lo as f64, model.k_hi as f64);
    let spatial = PI * k_hi * x_max.abs() / (l_min * l_min);
    let temporal = TWO_PI * (k_hi * k_hi - k_lo * k_lo) * kernel.latest_time() * 2.0
        / (model.revival_time(l_min) * l_min);
    let coefficients = match model.family {
        StateFamily::Coherent { .. } => 10.0 * model.params.alpha() * PI * k_hi / (2.0 * l_min * l_min),
        _ => 0.0,
    };
    spatial + temporal + coefficients
}

/// Equal Gauss-Legendre panels on `[a, b]`: one 129-point panel when that
/// resolves `rate`, otherwise enough 32-point panels.
struct LRule {
    a: f64,
    h: f64,
    panels: usize,
    x: Vec<f64>,
    w: Vec<f64>,
}

impl LRule {
    fn new(a: f64, b: f64, rate: f64) -> Result<Self> {
        let width = b - a;
        let (panels, order) = if rate * width * PI / (2.0 * L_BASE_ORDER as f64) <= L_PHASE_STEP {
            (1, L_BASE_ORDER)
        } else {
            let p = (rate * width * PI / (2.0 * PANEL_ORDER as f64 * L_PHASE_STEP)).ceil() as usize;
            if p.saturating_mul(PANEL_ORDER) > L_MAX_NODES {
                return Err(Error::Accuracy {
                    suggested: p.saturating_mul(PANEL_ORDER),
                    limit: L_MAX_NODES,
                });
            }
            (p, PANEL_ORDER)
        };
        let (x, w) = gauss_legendre(order);
        Ok(Self {
            a,
            h: width / panels as f64,
            panels,
            x,
            w,
        })
    }

    fn edge(&self, p: usize) -> f64 {
        self.a + self.h * p as f64
    }

    /// Nodes and weights of the reference rule mapped onto `[a, b]`.
    fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let h = 0.5 * (b - a);
        self.x.iter().zip(&self.w).map(move |(x, w)| (a + h * (x + 1.0), w * h))
    }

    fn panel(&self, p: usize) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.mapped(self.edge(p), self.edge(p + 1))
    }

    fn all(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.panels).flat_map(move |p| self.panel(p))
    }
}

fn accumulate(
    model: &RandomBoxModel,
    kernel: &Kernel,
    nodes: impl Iterator<Item = (f64, f64)>,
    xs: &[f64],
    active: &[usize],
    acc: &mut [f64],
) -> Result<()> {
    let mut rot = Vec::new();
    for (l, w) in nodes {
        let fw = w * model.density.pdf(l);
        if fw == 0.0 {
            continue;
        }
        let data = node_data(model, l, kernel)?;
        for &i in active {
            acc[i] += fw * integrand(&data, kernel, xs[i], l, &mut rot);
        }
    }
    Ok(())
}

/// `int f(l) chi_l(x) K(x, l) dl` for every `x`; the panel holding `l = |x|` is cut there.
fn integrate_l(model: &RandomBoxModel, xs: &[f64], kernel: Kernel) -> Result<Vec<f64>> {
    if let Kernel::Window(w) = kernel {
        w.validate()?;
    }
    let (lo, hi) = model.density.support();
    let x_max = xs.iter().fold(0.0f64, |m, x| m.max(x.abs())).min(hi);
    let rule = LRule::new(lo, hi, phase_rate(model, &kernel, x_max, lo))?;
    let partials: Vec<Result<Vec<f64>>> = (0..rule.panels)
        .into_par_iter()
        .map(|p| {
            let start = rule.edge(p);
            let active: Vec<usize> = (0..xs.len()).filter(|&i| xs[i].abs() <= start).collect();
            let mut acc = vec![0.0; xs.len()];
            if !active.is_empty() {
                accumulate(model, &kernel, rule.panel(p), xs, &active, &mut acc)?;
            }
            Ok(acc)
        })
        .collect();
    let cut: Vec<Result<f64>> = xs
        .par_iter()
        .map(|&x| {
            let ax = x.abs();
            if ax <= lo || ax >= hi {
                return Ok(0.0);
            }
            let p = (((ax - lo) / rule.h).floor() as usize).min(rule.panels - 1);
            if ax <= rule.edge(p) {
                return Ok(0.0);
            }
            let mut acc = [0.0];
            accumulate(model, &kernel, rule.mapped(ax, rule.edge(p + 1)), &[x], &[0], &mut acc)?;
            Ok(acc[0])
        })
        .collect();
    let mut out = vec![0.0; xs.len()];
    for part in partials {
        for (o, v) in out.iter_mut().zip(part?) {
            *o += v;
        }
    }
    for (o, v) in out.iter_mut().zip(cut) {
        *o += v?;
    }
    Ok(out)
}

/// `P(x, t) = int chi_l(x) |psi_l(x, t)|^2 f(l) dl`.
pub fn p_xt(model: &RandomBoxModel, x: f64, t: f64) -> Result<f64> {
    Ok(integrate_l(model, &[x], Kernel::Instant(t))?[0])
}

/// `P_inf(x)` from the diagonal spectral sum `sum_k |a_k|^2 sin^2(pi k (x - l) / 2l) / l`.
pub fn p_inf(model: &RandomBoxModel, x: f64) -> Result<f64> {
    Ok(integrate_l(model, &[x], Kernel::Limit)?[0])
}

/// `Delta(x) = int chi_l / 4l (psi_l(y), psi_l(y + 2x - 2l) + psi_l(y - 2x + 2l)) f dl`.
pub fn delta_correction(model: &RandomBoxModel, x: f64) -> Result<f64> {
    Ok(integrate_l(model, &[x], Kernel::Delta)?[0])
}

/// `int chi_l(x) / 2l f(l) dl`.
pub fn uniform_part(model: &RandomBoxModel, x: f64) -> f64 {
    let (lo, hi) = model.density.support();
    let a = lo.max(x.abs());
    if a >= hi {
        return 0.0;
    }
    let rule = LRule::new(a, hi, 0.0).expect("base rule");
    rule.all().map(|(l, w)| w * model.density.pdf(l) / (2.0 * l)).sum()
}

/// Mean of `P(x, t_j)` over the window samples, with the time sum done in closed form.
pub fn time_average(model: &RandomBoxModel, x: f64, window: TimeWindow) -> Result<f64> {
    Ok(integrate_l(model, &[x], Kernel::Window(window))?[0])
}

/// `P_inf(x)` through shifted inner products of the odd-periodic extension.
pub fn p_inf_inner(model: &RandomBoxModel, x: f64) -> Result<f64> {
    let (lo, hi) = model.density.support();
    let a = lo.max(x.abs());
    if a >= hi {
        return Ok(0.0);
    }
    let rule = LRule::new(a, hi, phase_rate(model, &Kernel::Limit, x, a))?;
    let panels = (model.k_hi as usize).max(8);
    let mut total = 0.0;
    for (l, w) in rule.all() {
        let modes = model.modes(l)?;
        let psi = |y: f64| modes.eval(y, l);
        let d = 2.0 * x - 2.0 * l;
        let rule = CompositeRule::new(-l, l, panels, 16);
        let shifted: Complex64 = rule.integrate(|y| {
            psi(y).conj() * (odd_periodic_extend(psi, y + d, l) + odd_periodic_extend(psi, y - d, l))
        });
        total += w * model.density.pdf(l) / (2.0 * l) * (1.0 - 0.5 * shifted.re);
    }
    Ok(total)
}

/// `P(., t)` on a grid.
pub fn position_density(model: &RandomBoxModel, grid: &PositionGrid, t: f64) -> Result<PositionDensity> {
    Ok(PositionDensity {
        values: integrate_l(model, &grid.xs, Kernel::Instant(t))?,
        xs: grid.xs.clone(),
        weights: grid.weights.clone(),
        time: Some(t),
    })
}

/// `P_inf` on a grid.
pub fn limit_density(model: &RandomBoxModel, grid: &PositionGrid) -> Result<PositionDensity> {
    Ok(PositionDensity {
        values: integrate_l(model, &grid.xs, Kernel::Limit)?,
        xs: grid.xs.clone(),
        weights: grid.weights.clone(),
        time: None,
    })
}

/// `Delta` at every grid point.
pub fn delta_on_grid(model: &RandomBoxModel, grid: &PositionGrid) -> Result<Vec<f64>> {
    integrate_l(model, &grid.xs, Kernel::Delta)
}

/// The uniform part at every grid point.
pub fn uniform_on_grid(model: &RandomBoxModel, grid: &PositionGrid) -> Vec<f64> {
    grid.xs.par_iter().map(|&x| uniform_part(model, x)).collect()
}

/// Window average on a grid; `time` records the window start.
pub fn time_average_density(
    model: &RandomBoxModel,
    grid: &PositionGrid,
    window: TimeWindow,
) -> Result<PositionDensity> {
    Ok(PositionDensity {
        values: integrate_l(model, &grid.xs, Kernel::Window(window))?,
        xs: grid.xs.clone(),
        weights: grid.weights.clone(),
        time: Some(window.start),
    })
}

/// `int Delta(x) g(x) dx` by the grid weights.
pub fn delta_pairing(model: &RandomBoxModel, grid: &PositionGrid, g: impl Fn(f64) -> f64) -> Result<f64> {
    let d = delta_on_grid(model, grid)?;
    Ok(grid.xs.iter().zip(&grid.weights).zip(&d).map(|((x, w), d)| w * d * g(*x)).sum())
}
