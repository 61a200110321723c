use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use revival_core::classical::{ClassicalDensity, GaussianComponent};
use revival_core::husimi::{DensityOperatorMixture, PhaseQuadrature};
use revival_core::oracles::{quad_inner, resolution_residual, PhaseGridSpec, QuadratureSpec};
use revival_core::random_box::{
    delta_on_grid, limit_density, position_density, time_average_density, uniform_on_grid, LengthDensity, PositionGrid,
    RandomBoxModel, StateFamily, TimeWindow,
};
use revival_core::revival::{box_revival_structure, limit_profile, revival_structure, Spread};
use revival_core::schedule::{convergence_meter, is_converging, make_schedule, Regime, Scenario, ScheduleOptions, Target};
use revival_core::state::position_grid;
use revival_core::testfns::TestFamily;
use revival_core::theta::theta_direct;
use revival_core::tolerances::accept;
use revival_core::{
    box_norm_sq, box_overlap, circle_norm_sq, circle_overlap, make_box_state, make_circle_state, time_scales, Complex64,
    Domain, EvalMethod, PhasePoint, PhysicalParams, WaveState,
};

use crate::config::{
    parse_fraction, spread_value, ConfigError, Family, Method, ScenarioConfig, ScenarioKind, TargetKind, TimeUnit,
};
use crate::output::{num, Column, Table};

/// Failure classes, each tied to a process exit code.
#[derive(Debug)]
pub enum Failure {
    Verification(Vec<String>),
    Config(String),
    Numeric(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Config(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Verification(names) => write!(f, "verification failed: {}", names.join(", ")),
            Failure::Config(m) => write!(f, "invalid config: {m}"),
            Failure::Numeric(m) => write!(f, "numeric limit: {m}"),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.0)
    }
}

impl From<revival_core::Error> for Failure {
    fn from(e: revival_core::Error) -> Self {
        use revival_core::Error as E;
        match e {
            E::Capacity { .. } | E::Accuracy { .. } | E::Range { .. } => Failure::Numeric(e.to_string()),
            E::OracleFailure { .. } => Failure::Verification(vec![e.to_string()]),
            _ => Failure::Config(e.to_string()),
        }
    }
}

type Out = Result<Table, Failure>;

fn section<'a, T>(s: &'a Option<T>, name: &str) -> Result<&'a T, Failure> {
    s.as_ref().ok_or_else(|| Failure::Config(format!("{name}: section missing")))
}

fn initial_state(cfg: &ScenarioConfig, params: &PhysicalParams) -> Result<WaveState, Failure> {
    let ph = cfg.phase()?;
    Ok(match cfg.domain() {
        Domain::Circle => make_circle_state(params, ph)?,
        Domain::Box => make_box_state(params, ph)?,
    })
}

/// The standard grid, shifted by a seeded offset of under half a cell when a seed is set.
fn grid(cfg: &ScenarioConfig, n: usize) -> Vec<f64> {
    let (domain, l) = (cfg.domain(), cfg.params.l);
    let mut xs = position_grid(domain, l, n);
    if let Some(seed) = cfg.seed {
        let shift = StdRng::seed_from_u64(seed).gen::<f64>() * l / n as f64;
        let len = xs.len();
        let inner = match domain {
            Domain::Circle => 0..len,
            Domain::Box => 1..len.saturating_sub(1),
        };
        for x in &mut xs[inner] {
            *x = (*x + shift).min(l);
        }
    }
    xs
}

pub fn evolve(cfg: &ScenarioConfig) -> Out {
    let ev = section(&cfg.evolve, "evolve")?;
    let params = cfg.physical()?;
    let s0 = initial_state(cfg, &params)?;
    let ts = time_scales(&params, cfg.initial.p, cfg.domain());
    let unit = match ev.unit {
        TimeUnit::Absolute => 1.0,
        TimeUnit::TRev => ts.t_rev,
        TimeUnit::TCl => ts.t_cl,
        TimeUnit::TColl => ts.t_coll,
    };
    if !unit.is_finite() {
        return Err(Failure::Config("evolve.unit: the classical period is infinite at p = 0".into()));
    }
    let xs = grid(cfg, ev.grid);
    let mut table = Table::default();
    table.push(Column::num("x", "length", xs.clone()));
    for &t in &ev.times {
        let t = t * unit;
        let st = s0.evolve(t);
        let tag = num(t);
        let spectral = || st.density(&xs, EvalMethod::Spectral);
        let image = || st.density(&xs, EvalMethod::ImageSum);
        match ev.method {
            Method::Spectral => table.push(Column::num(format!("density@t={tag}"), "1/length", spectral()?)),
            Method::Image => table.push(Column::num(format!("density@t={tag}"), "1/length", image()?)),
            Method::Both => {
                let (a, b) = (spectral()?, image()?);
                let d = a.iter().zip(&b).map(|(a, b)| (a - b).abs()).collect();
                table.push(Column::num(format!("spectral@t={tag}"), "1/length", a));
                table.push(Column::num(format!("image@t={tag}"), "1/length", b));
                table.push(Column::num(format!("discrepancy@t={tag}"), "1/length", d));
            }
        }
    }
    Ok(table)
}

/// Indices of local maxima above a tenth of the largest value.
fn peak_positions(xs: &[f64], ys: &[f64], periodic: bool) -> Vec<f64> {
    let n = ys.len();
    let top = ys.iter().cloned().fold(0.0, f64::max);
    let at = |i: isize| -> f64 {
        if periodic {
            ys[i.rem_euclid(n as isize) as usize]
        } else if i < 0 || i >= n as isize {
            f64::NEG_INFINITY
        } else {
            ys[i as usize]
        }
    };
    (0..n)
        .filter(|&i| {
            let i = i as isize;
            at(i) > 0.1 * top && at(i) >= at(i - 1) && at(i) > at(i + 1)
        })
        .map(|i| xs[i])
        .collect()
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| num(*x)).collect::<Vec<_>>().join(";")
}

pub fn revival_map(cfg: &ScenarioConfig) -> Out {
    let rm = section(&cfg.revival_map, "revival_map")?;
    let params = cfg.physical()?;
    let (domain, l) = (cfg.domain(), params.half_length());
    let s0 = initial_state(cfg, &params)?;
    let t_rev = time_scales(&params, cfg.initial.p, domain).t_rev;
    let xs = position_grid(domain, l, rm.grid);
    let cell = 2.0 * l / rm.grid as f64;
    let fractions: Vec<(i64, i64)> = rm.fractions.iter().map(|f| parse_fraction(f)).collect::<Result<_, _>>()?;
    let rows: Vec<_> = fractions
        .par_iter()
        .map(|&(m, n)| -> Result<_, Failure> {
            let structure = match domain {
                Domain::Circle => revival_structure(m, n, l)?,
                Domain::Box => box_revival_structure(m, n, l)?,
            };
            let c = m as f64 / n as f64;
            let dens = s0.evolve(c * t_rev).density(&xs, EvalMethod::Spectral)?;
            let got = peak_positions(&xs, &dens, domain == Domain::Circle);
            let prof = limit_profile(&structure, s0.source().unwrap(), Spread::Finite(0.0), 0.0, params.mass(), l, domain);
            let mut want: Vec<f64> = prof.centers.iter().map(|p| p.q).collect();
            want.sort_by(f64::total_cmp);
            let dist = |x: f64, y: f64| match domain {
                Domain::Circle => {
                    let d = (x - y).rem_euclid(2.0 * l);
                    d.min(2.0 * l - d)
                }
                Domain::Box => (x - y).abs(),
            };
            let matched = got.len() == want.len() && want.iter().all(|w| got.iter().any(|g| dist(*g, *w) <= cell));
            Ok((c, structure.n_prime, structure.a, want, got, matched))
        })
        .collect::<Result<_, _>>()?;
    let mut t = Table::default();
    t.push(Column::text("fraction", rm.fractions.clone()));
    t.push(Column::num("t/T_rev", "1", rows.iter().map(|r| r.0).collect()));
    t.push(Column::int("predicted_peaks", rows.iter().map(|r| r.1).collect()));
    t.push(Column::num("offset_a", "length", rows.iter().map(|r| r.2).collect()));
    t.push(Column::text("predicted_positions", rows.iter().map(|r| join(&r.3)).collect()));
    t.push(Column::int("measured_peaks", rows.iter().map(|r| r.4.len() as i64).collect()));
    t.push(Column::text("measured_positions", rows.iter().map(|r| join(&r.4)).collect()));
    t.push(Column::text("match", rows.iter().map(|r| r.5.to_string()).collect()));
    Ok(t)
}

fn classical_density(cfg: &ScenarioConfig) -> Result<ClassicalDensity, Failure> {
    let comps: Vec<GaussianComponent> = cfg
        .density
        .iter()
        .map(|c| GaussianComponent {
            weight: c.weight,
            q: c.q,
            p: c.p,
            sigma_q: c.sigma_q,
            sigma_p: c.sigma_p,
        })
        .collect();
    Ok(ClassicalDensity::gaussian_mixture(cfg.domain(), cfg.params.l, 1.0, &comps)?)
}

pub fn sweep(cfg: &ScenarioConfig) -> Out {
    let sw = section(&cfg.sweep, "sweep")?;
    let base = cfg.physical()?;
    let (domain, l) = (cfg.domain(), base.half_length());
    let spread = spread_value(&sw.spread)?;
    let regime = Regime::new(sw.m, sw.n, spread)?;
    let pt = cfg.phase()?;
    let p_ref = sw.p_ref.unwrap_or(if pt.p != 0.0 { pt.p.abs() } else { 1.0 });
    let mut opts = ScheduleOptions::defaults(l, sw.p_scale.unwrap_or(p_ref));
    if let Some(h) = sw.hbar0 {
        opts.hbar0 = h;
    }
    if let Some(c) = sw.c_alpha {
        opts.c_alpha = c;
    }
    let sched = make_schedule(regime, &base, sw.levels, domain, opts)?;
    let family = TestFamily::standard(p_ref)?;
    let scenario = match sw.scenario {
        ScenarioKind::Transition => Scenario::Transition(pt),
        ScenarioKind::Atom => Scenario::Atom(pt),
        ScenarioKind::Density => {
            let quad = match &sw.quadrature {
                Some(q) => Some(PhaseQuadrature::new(domain, l, q.nq, q.p_lo, q.p_hi, q.np)?),
                None => None,
            };
            Scenario::Density {
                sigma: classical_density(cfg)?,
                quad,
            }
        }
    };
    let mut t = Table::default();
    t.push(Column::num("hbar", "action", sched.levels.iter().map(|l| l.params.hbar()).collect()));
    t.push(Column::num("alpha", "length", sched.levels.iter().map(|l| l.params.alpha()).collect()));
    t.push(Column::num("t", "time", sched.levels.iter().map(|l| l.t).collect()));
    for kind in &sw.targets {
        let (name, target) = match (kind, sw.scenario) {
            (TargetKind::Profile, _) => ("profile", Target::Profile(spread)),
            (TargetKind::Classical, ScenarioKind::Density) => ("classical", Target::Classical(classical_density(cfg)?)),
            (TargetKind::Classical, _) => ("delta", Target::Classical(ClassicalDensity::point(domain, l, 1.0, pt)?)),
        };
        let res: Vec<f64> = convergence_meter(&sched, &scenario, &target, &family)?.iter().map(|r| r.residual).collect();
        let verdict = if is_converging(&res) { "pass" } else { "fail" };
        t.push(Column::text(format!("verdict_{name}"), vec![verdict.to_string(); res.len()]));
        t.push(Column::num(format!("residual_{name}"), "1", res));
    }
    Ok(t)
}

pub fn husimi(cfg: &ScenarioConfig) -> Out {
    let h = section(&cfg.husimi, "husimi")?;
    let params = cfg.physical()?;
    let domain = cfg.domain();
    let rho = DensityOperatorMixture::single(&params, domain, cfg.phase()?)?.evolve(h.t);
    let qs = grid(cfg, h.nq);
    let ps: Vec<f64> = (0..h.np).map(|j| h.p_lo + (h.p_hi - h.p_lo) * j as f64 / (h.np - 1) as f64).collect();
    let points: Vec<PhasePoint> = qs.iter().flat_map(|&q| ps.iter().map(move |&p| PhasePoint::new(q, p))).collect();
    let values: Vec<f64> = points.par_iter().map(|x| rho.husimi(*x)).collect::<Result<_, _>>()?;
    let mut t = Table::default();
    t.push(Column::num("q", "length", points.iter().map(|x| x.q).collect()));
    t.push(Column::num("p", "momentum", points.iter().map(|x| x.p).collect()));
    t.push(Column::num("husimi", "1/action", values));
    Ok(t)
}

pub fn limitdist(cfg: &ScenarioConfig) -> Out {
    let d = section(&cfg.limitdist, "limitdist")?;
    let params = cfg.physical()?.with_half_length(d.center)?;
    let density = match d.width {
        Some(w) => LengthDensity::truncated_gaussian(d.center, w)?,
        None => LengthDensity::default_for(d.center)?,
    };
    let family = match d.family {
        Family::Coherent { q_rel, p } => StateFamily::Coherent { q_rel, p },
        Family::Eigenstate { k } => StateFamily::Eigenstate { k },
    };
    let model = RandomBoxModel::new(density, family, params)?;
    let grid = PositionGrid::gauss(&model, d.panels);
    let limit = limit_density(&model, &grid)?;
    let delta = delta_on_grid(&model, &grid)?;
    let uniform = uniform_on_grid(&model, &grid);
    let identity = limit.values.iter().zip(&delta).zip(&uniform).map(|((p, d), u)| p + d - u).collect();
    let mut t = Table::default();
    t.push(Column::num("x", "length", grid.xs.clone()));
    t.push(Column::num("weight", "length", grid.weights.clone()));
    t.push(Column::num("p_inf", "1/length", limit.values));
    t.push(Column::num("uniform", "1/length", uniform));
    t.push(Column::num("delta", "1/length", delta));
    t.push(Column::num("identity", "1/length", identity));
    for &time in &d.times {
        let p = position_density(&model, &grid, time)?;
        t.push(Column::num(format!("p@t={}", num(time)), "1/length", p.values));
    }
    if d.average {
        let window = match &d.window {
            Some(w) => {
                let tr = model.revival_time(d.center);
                TimeWindow {
                    start: w.start * tr,
                    width: w.width * tr,
                    samples: w.samples,
                }
            }
            None => TimeWindow::standard(&model),
        };
        t.push(Column::num("time_average", "1/length", time_average_density(&model, &grid, window)?.values));
    }
    Ok(t)
}

/// One oracle check: name, measured value, tolerance.
struct Check(&'static str, f64, f64);

pub fn verify(cfg: &ScenarioConfig) -> Result<(Table, Vec<String>), Failure> {
    let tol = cfg.verify.clone().unwrap_or_default();
    let mut rng = StdRng::seed_from_u64(cfg.seed.unwrap_or(55));
    let mut checks = Vec::new();

    let mut worst = 0.0f64;
    for _ in 0..50 {
        let tau = Complex64::new(rng.gen_range(0.2..5.0), rng.gen_range(-1.0..1.0));
        let z = Complex64::from_polar(rng.gen_range(0.0..1.5), rng.gen_range(0.0..std::f64::consts::TAU));
        let lhs = theta_direct(z / (Complex64::i() * tau), tau.inv())?;
        let rhs = tau.sqrt() * (std::f64::consts::PI * z * z / tau).exp() * theta_direct(z, tau)?;
        worst = worst.max((lhs - rhs).norm() / rhs.norm());
    }
    checks.push(Check("modular_identity", worst, tol.modular.unwrap_or(accept::MODULAR_REL)));

    let params = PhysicalParams::new(0.05, 1.0, 0.05, 1.0)?;
    let a = PhasePoint::new(0.2, 1.0);
    let mut dual = 0.0f64;
    let mut resolution = 0.0f64;
    for domain in [Domain::Circle, Domain::Box] {
        let s0 = match domain {
            Domain::Circle => make_circle_state(&params, a)?,
            Domain::Box => make_box_state(&params, a)?,
        };
        let ts = time_scales(&params, a.p, domain);
        let xs = position_grid(domain, 1.0, 2048);
        for t in [0.0, 0.3 * ts.t_cl, 0.7 * ts.t_coll] {
            let st = s0.evolve(t);
            let u = st.density(&xs, EvalMethod::Spectral)?;
            let v = st.density(&xs, EvalMethod::ImageSum)?;
            dual = dual.max(u.iter().zip(&v).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max));
        }
        resolution = resolution.max(resolution_residual(&s0, &PhaseGridSpec::default())?.residual);
    }
    checks.push(Check("dual_engine", dual, tol.dual_engine.unwrap_or(accept::DUAL_ENGINE_ABS)));
    checks.push(Check("resolution_of_unity", resolution, tol.resolution.unwrap_or(accept::RESOLUTION_REL)));

    let spec = QuadratureSpec::fine();
    let mut series = 0.0f64;
    let mut overlap = 0.0f64;
    for (alpha, x, y, t) in [
        (0.2, PhasePoint::new(0.1, 0.9), PhasePoint::new(-0.3, 1.1), 0.7),
        (0.08, PhasePoint::new(-0.7, 2.0), PhasePoint::new(0.5, -1.0), 2.3),
    ] {
        let p = PhysicalParams::new(0.05, 1.0, alpha, 1.0)?;
        for domain in [Domain::Circle, Domain::Box] {
            let f = |ph: PhasePoint, t: f64| {
                move |s: f64| match domain {
                    Domain::Circle => revival_core::circle::circle_image_sum(&p, ph, s, t).unwrap(),
                    Domain::Box => revival_core::box_well::box_image_sum(&p, ph, s, t).unwrap(),
                }
            };
            let nq = quad_inner(f(x, 0.0), f(x, 0.0), -1.0, 1.0, &spec)?.value.re;
            let oq = quad_inner(f(x, 0.0), f(y, t), -1.0, 1.0, &spec)?.value;
            let (ns, os) = match domain {
                Domain::Circle => (circle_norm_sq(&p, x)?, circle_overlap(&p, x, y, t)?),
                Domain::Box => (box_norm_sq(&p, x)?, box_overlap(&p, x, y, t)?),
            };
            series = series.max((nq - ns).abs());
            overlap = overlap.max((oq - os).norm());
        }
    }
    checks.push(Check("norm_series", series, tol.norm_series.unwrap_or(accept::NORM_SERIES_ABS)));
    checks.push(Check("closed_form_overlap", overlap, tol.overlap.unwrap_or(accept::OVERLAP_ABS)));

    let failed: Vec<String> = checks.iter().filter(|c| !(c.1 < c.2)).map(|c| c.0.to_string()).collect();
    let mut t = Table::default();
    t.push(Column::text("check", checks.iter().map(|c| c.0.to_string()).collect()));
    t.push(Column::num("value", "1", checks.iter().map(|c| c.1).collect()));
    t.push(Column::num("tolerance", "1", checks.iter().map(|c| c.2).collect()));
    t.push(Column::text("status", checks.iter().map(|c| if c.1 < c.2 { "pass" } else { "fail" }.to_string()).collect()));
    Ok((t, failed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_peaks_wrap() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        assert_eq!(peak_positions(&xs, &[5.0, 1.0, 0.0, 4.0], true), vec![0.0]);
        assert_eq!(peak_positions(&xs, &[1.0, 0.0, 0.0, 4.0], false), vec![0.0, 3.0]);
    }

    #[test]
    fn core_errors_map_to_exit_codes() {
        let cap = revival_core::Error::Capacity { requested: 2, limit: 1 };
        assert_eq!(Failure::from(cap).exit_code(), 3);
        assert_eq!(Failure::from(revival_core::Error::Contract("x".into())).exit_code(), 2);
    }
}
