//! One check per acceptance criterion. Each prints a single PASS/FAIL line.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use revival_core::box_well::{box_image_sum, ExclusionZone};
use revival_core::circle::{circle_image_sum, make_circle_state};
use revival_core::classical::{ClassicalDensity, GaussianComponent};
use revival_core::husimi::{DensityOperatorMixture, PhaseQuadrature};
use revival_core::oracles::{quad_inner, resolution_residual, PhaseGridSpec, QuadratureSpec};
use revival_core::random_box::{
    delta_pairing, limit_density, position_density, time_average_density, uniform_on_grid, LengthDensity,
    PositionGrid, RandomBoxModel, StateFamily, TimeWindow,
};
use revival_core::revival::{box_revival_structure, limit_profile, revival_structure, Spread};
use revival_core::scales::revival_time;
use revival_core::schedule::{
    convergence_meter, is_converging, make_schedule, Regime, Scenario, ScheduleOptions, Target,
};
use revival_core::state::position_grid;
use revival_core::testfns::TestFamily;
use revival_core::theta::theta_direct;
use revival_core::tolerances::accept;
use revival_core::{
    box_norm_sq, box_overlap, circle_norm_sq, circle_overlap, gaussian_overlap, gaussian_packet, make_box_state,
    time_scales, Complex64, Domain, EvalMethod, PhasePoint, PhysicalParams,
};

fn report(id: u32, name: &str, pass: bool, detail: String) {
    println!("criterion {id:>2} {name}: {} | {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

fn image_state(domain: Domain, params: PhysicalParams, ph: PhasePoint, t: f64) -> impl Fn(f64) -> Complex64 {
    move |x| match domain {
        Domain::Circle => circle_image_sum(&params, ph, x, t).unwrap(),
        Domain::Box => box_image_sum(&params, ph, x, t).unwrap(),
    }
}

fn sci(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.2e}")).collect::<Vec<_>>().join(" ")
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

#[test]
fn c01_modular_identity() {
    let mut rng = StdRng::seed_from_u64(55);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let tau = Complex64::new(rng.gen_range(0.2..5.0), rng.gen_range(-1.0..1.0));
        let z = Complex64::from_polar(rng.gen_range(0.0..1.5), rng.gen_range(0.0..std::f64::consts::TAU));
        let lhs = theta_direct(z / (Complex64::i() * tau), tau.inv()).unwrap();
        let rhs = tau.sqrt() * (std::f64::consts::PI * z * z / tau).exp() * theta_direct(z, tau).unwrap();
        worst = worst.max((lhs - rhs).norm() / rhs.norm());
    }
    report(
        1,
        "modular identity",
        worst < accept::MODULAR_REL,
        format!("max relative residual {worst:.2e} over 50 draws (tol {:.0e})", accept::MODULAR_REL),
    );
}

#[test]
fn c02_dual_engine() {
    let params = PhysicalParams::new(0.05, 1.0, 0.05, 1.0).unwrap();
    let ph = PhasePoint::new(0.3, 1.0);
    let mut worst = 0.0f64;
    for domain in [Domain::Circle, Domain::Box] {
        let s0 = match domain {
            Domain::Circle => make_circle_state(&params, ph).unwrap(),
            Domain::Box => make_box_state(&params, ph).unwrap(),
        };
        let ts = time_scales(&params, ph.p, domain);
        let xs = position_grid(domain, 1.0, 2048);
        for t in [0.0, 0.3 * ts.t_cl, 0.7 * ts.t_coll] {
            let st = s0.evolve(t);
            let a = st.density(&xs, EvalMethod::Spectral).unwrap();
            let b = st.density(&xs, EvalMethod::ImageSum).unwrap();
            let d = a.iter().zip(&b).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            worst = worst.max(d);
        }
    }
    report(
        2,
        "dual-engine equivalence",
        worst < accept::DUAL_ENGINE_ABS,
        format!("max density discrepancy {worst:.2e} on 2048 points, circle and box (tol {:.0e})", accept::DUAL_ENGINE_ABS),
    );
}

#[test]
fn c03_closed_form_overlaps() {
    let mut rng = StdRng::seed_from_u64(2103);
    let spec = QuadratureSpec::fine();
    let (mut line, mut circ, mut boxed) = (0.0f64, 0.0f64, 0.0f64);
    let mut draws = 0;
    while draws < 20 {
        let hbar = rng.gen_range(0.02..0.1);
        let alpha = rng.gen_range(0.05..0.2);
        let params = PhysicalParams::new(hbar, 1.0, alpha, 1.0).unwrap();
        let a = PhasePoint::new(rng.gen_range(-1.0..1.0), rng.gen_range(-2.0..2.0));
        let b = PhasePoint::new(rng.gen_range(-1.0..1.0), rng.gen_range(-2.0..2.0));
        let t = rng.gen_range(0.0..2.0);
        let zone = ExclusionZone::default_for(&params);
        if zone.contains(a, 1.0) || zone.contains(b, 1.0) {
            continue;
        }
        draws += 1;

        let width = alpha * (1.0 + params.gamma(t).powi(2)).sqrt();
        let lo = a.q.min(b.q + b.p * t) - 12.0 * width.max(alpha);
        let hi = a.q.max(b.q + b.p * t) + 12.0 * width.max(alpha);
        let oracle = quad_inner(
            |x| gaussian_packet(&params, a, x, 0.0),
            |x| gaussian_packet(&params, b, x, t),
            lo,
            hi,
            &spec,
        )
        .unwrap();
        line = line.max((oracle.value - gaussian_overlap(&params, a, b, t)).norm());

        for domain in [Domain::Circle, Domain::Box] {
            let oracle = quad_inner(
                image_state(domain, params, a, 0.0),
                image_state(domain, params, b, t),
                -1.0,
                1.0,
                &spec,
            )
            .unwrap();
            match domain {
                Domain::Circle => circ = circ.max((oracle.value - circle_overlap(&params, a, b, t).unwrap()).norm()),
                Domain::Box => boxed = boxed.max((oracle.value - box_overlap(&params, a, b, t).unwrap()).norm()),
            }
        }
    }
    let worst = line.max(circ).max(boxed);
    report(
        3,
        "closed-form overlaps",
        worst < accept::OVERLAP_ABS,
        format!("20 draws, max |closed - quadrature|: line {line:.2e}, circle {circ:.2e}, box {boxed:.2e} (tol {:.0e})", accept::OVERLAP_ABS),
    );
}

/// Local maxima above a tenth of the global maximum, on a periodic grid.
fn peaks(xs: &[f64], ys: &[f64], periodic: bool) -> Vec<f64> {
    let n = ys.len();
    let top = ys.iter().cloned().fold(0.0, f64::max);
    (0..n)
        .filter(|&i| {
            let (prev, next) = if periodic {
                (ys[(i + n - 1) % n], ys[(i + 1) % n])
            } else {
                (
                    if i == 0 { f64::NEG_INFINITY } else { ys[i - 1] },
                    if i + 1 == n { f64::NEG_INFINITY } else { ys[i + 1] },
                )
            };
            ys[i] > 0.1 * top && ys[i] >= prev && ys[i] > next
        })
        .map(|i| xs[i])
        .collect()
}

#[test]
fn c04_exact_and_fractional_revival() {
    let params = PhysicalParams::new(0.05, 1.0, 0.05, 1.0).unwrap();
    let a = PhasePoint::new(0.2, 1.0);
    let circ = (circle_overlap(&params, a, a, revival_time(&params, Domain::Circle)).unwrap().norm()
        - circle_norm_sq(&params, a).unwrap())
    .abs();
    let bx = (box_overlap(&params, a, a, revival_time(&params, Domain::Box)).unwrap().norm()
        - box_norm_sq(&params, a).unwrap())
    .abs();
    let exact_ok = circ < accept::REVIVAL_ABS && bx < accept::REVIVAL_ABS;

    let fine = PhysicalParams::new(0.01, 1.0, 0.02, 1.0).unwrap();
    let n_grid = 2048;
    let cell = 2.0 / n_grid as f64;
    let mut details = Vec::new();
    let mut frac_ok = true;
    for domain in [Domain::Circle, Domain::Box] {
        let s0 = match domain {
            Domain::Circle => make_circle_state(&fine, a).unwrap(),
            Domain::Box => make_box_state(&fine, a).unwrap(),
        };
        let xs = position_grid(domain, 1.0, n_grid);
        for (m, n) in [(1, 3), (1, 2), (1, 4)] {
            let t = m as f64 / n as f64 * revival_time(&fine, domain);
            let dens = s0.evolve(t).density(&xs, EvalMethod::Spectral).unwrap();
            let structure = match domain {
                Domain::Circle => revival_structure(m, n, 1.0).unwrap(),
                Domain::Box => box_revival_structure(m, n, 1.0).unwrap(),
            };
            let prof = limit_profile(&structure, a, Spread::Finite(0.0), 0.0, 1.0, 1.0, domain);
            let mut want: Vec<f64> = prof.centers.iter().map(|c| c.q).collect();
            want.sort_by(f64::total_cmp);
            let got = peaks(&xs, &dens, domain == Domain::Circle);
            let dist = |x: f64, y: f64| match domain {
                Domain::Circle => {
                    let d = (x - y).rem_euclid(2.0);
                    d.min(2.0 - d)
                }
                Domain::Box => (x - y).abs(),
            };
            let matched = got.len() == want.len()
                && want.iter().all(|w| got.iter().any(|g| dist(*g, *w) <= cell));
            frac_ok &= matched;
            details.push(format!(
                "{} {m}/{n}: {} peaks (want {}){}",
                domain.name(),
                got.len(),
                want.len(),
                if matched { "" } else { " MISMATCH" }
            ));
        }
    }
    report(
        4,
        "exact and fractional revival",
        exact_ok && frac_ok,
        format!("|autocorr| - norm: circle {circ:.1e}, box {bx:.1e}; {}", details.join(", ")),
    );
}

#[test]
fn c05_flattening() {
    let base = PhysicalParams::new(0.01, 1.0, 0.03, 1.0).unwrap();
    let a = PhasePoint::new(0.2, 1.0);
    let l = 1.0;
    let mut sups = Vec::new();
    let mut sign_split = (0.0, 0.0);
    for domain in [Domain::Circle, Domain::Box] {
        let sched = make_schedule(
            Regime::new(0, 1, Spread::Infinite).unwrap(),
            &base,
            4,
            domain,
            ScheduleOptions::defaults(l, 1.0),
        )
        .unwrap();
        let xs = position_grid(domain, l, 4096);
        let mut sup = Vec::new();
        for lv in &sched.levels {
            let s0 = match domain {
                Domain::Circle => make_circle_state(&lv.params, a).unwrap(),
                Domain::Box => make_box_state(&lv.params, a).unwrap(),
            };
            let norm = s0.norm_sq();
            let d = s0.evolve(lv.t).density(&xs, EvalMethod::Spectral).unwrap();
            sup.push(d.iter().map(|v| (v / norm - 1.0 / (2.0 * l)).abs()).fold(0.0, f64::max));
        }
        sups.push(sup);
        if domain == Domain::Box {
            let lv = sched.levels.last().unwrap();
            let rho = DensityOperatorMixture::single(&lv.params, domain, a).unwrap().evolve(lv.t);
            let half = a.p.abs() + 10.0 * lv.params.hbar() / lv.params.alpha();
            let mass = |lo: f64, hi: f64| {
                let q = PhaseQuadrature::new(domain, l, 512, lo, hi, 256).unwrap();
                q.integrate(&rho.husimi_grid(&q).unwrap())
            };
            sign_split = (mass(0.0, half), mass(-half, 0.0));
        }
    }
    let bound = accept::FLATTEN_FINAL_REL / (2.0 * l);
    let flat_ok = sups.iter().all(|s| strictly_decreasing(s) && *s.last().unwrap() < bound);
    let split_ok = (sign_split.0 - 0.5).abs() <= accept::SIGN_SPLIT_ABS && (sign_split.1 - 0.5).abs() <= accept::SIGN_SPLIT_ABS;
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(" ");
    report(
        5,
        "flattening",
        flat_ok && split_ok,
        format!(
            "sup|rho - 1/2l| circle [{}], box [{}] (final bound {bound:.3}); box sign masses +{:.4} / -{:.4}",
            fmt(&sups[0]),
            fmt(&sups[1]),
            sign_split.0,
            sign_split.1
        ),
    );
}

#[test]
fn c06_resolution_of_unity() {
    let params = PhysicalParams::new(0.05, 1.0, 0.05, 1.0).unwrap();
    let a = PhasePoint::new(0.2, 1.0);
    let grid = PhaseGridSpec::default();
    let rc = resolution_residual(&make_circle_state(&params, a).unwrap(), &grid).unwrap();
    let rb = resolution_residual(&make_box_state(&params, a).unwrap(), &grid).unwrap();
    let mut mass_gap = 0.0f64;
    for domain in [Domain::Circle, Domain::Box] {
        let rho = DensityOperatorMixture::single(&params, domain, a).unwrap().evolve(0.37);
        let half = 12.0 * params.hbar() / params.alpha();
        let (lo, hi) = match domain {
            Domain::Circle => (a.p - half, a.p + half),
            Domain::Box => (-a.p - half, a.p + half),
        };
        let np = if domain == Domain::Box { 512 } else { 256 };
        let q = PhaseQuadrature::new(domain, 1.0, 256, lo, hi, np).unwrap();
        mass_gap = mass_gap.max((q.integrate(&rho.husimi_grid(&q).unwrap()) - 1.0).abs());
    }
    let pass = rc.residual < accept::RESOLUTION_REL && rb.residual < accept::RESOLUTION_REL && mass_gap < accept::HUSIMI_MASS_ABS;
    report(
        6,
        "resolution of unity",
        pass,
        format!(
            "reconstruction residual circle {:.2e}, box {:.2e}; Husimi mass gap {mass_gap:.2e}",
            rc.residual, rb.residual
        ),
    );
}

#[test]
fn c07_norm_limits() {
    let spec = QuadratureSpec::fine();
    let mut series_gap = 0.0f64;
    for (alpha, ph) in [
        (0.5, PhasePoint::new(0.0, 0.0)),
        (0.2, PhasePoint::new(0.4, 0.3)),
        (0.05, PhasePoint::new(-0.7, 2.0)),
    ] {
        let params = PhysicalParams::new(0.05, 1.0, alpha, 1.0).unwrap();
        let f = image_state(Domain::Circle, params, ph, 0.0);
        let q = quad_inner(&f, &f, -1.0, 1.0, &spec).unwrap().value.re;
        series_gap = series_gap.max((q - circle_norm_sq(&params, ph).unwrap()).abs());
    }
    for (alpha, ph) in [
        (0.2, PhasePoint::new(0.9, 0.1)),
        (0.05, PhasePoint::new(0.0, 3.0)),
        (0.1, PhasePoint::new(-0.8, -0.2)),
    ] {
        let params = PhysicalParams::new(0.05, 1.0, alpha, 1.0).unwrap();
        let f = image_state(Domain::Box, params, ph, 0.0);
        let q = quad_inner(&f, &f, -1.0, 1.0, &spec).unwrap().value.re;
        series_gap = series_gap.max((q - box_norm_sq(&params, ph).unwrap()).abs());
    }

    let base = PhysicalParams::new(0.01, 1.0, 0.03, 1.0).unwrap();
    let sched = make_schedule(
        Regime::new(0, 1, Spread::Finite(0.0)).unwrap(),
        &base,
        4,
        Domain::Box,
        ScheduleOptions::defaults(1.0, 1.0),
    )
    .unwrap();
    let zone = ExclusionZone::default_for(&sched.levels[0].params);
    let points: Vec<PhasePoint> = (0..=40)
        .flat_map(|i| (0..=40).map(move |j| PhasePoint::new(-1.0 + 0.05 * i as f64, -2.0 + 0.1 * j as f64)))
        .collect();
    let (mut circ, mut bx) = (Vec::new(), Vec::new());
    for lv in &sched.levels {
        let p = &lv.params;
        circ.push(points.iter().map(|ph| (circle_norm_sq(p, *ph).unwrap() - 1.0).abs()).fold(0.0, f64::max));
        bx.push(
            points
                .iter()
                .filter(|ph| !zone.contains(**ph, 1.0))
                .map(|ph| (box_norm_sq(p, *ph).unwrap() - 1.0).abs())
                .fold(0.0, f64::max),
        );
    }
    let tail_monotone = |v: &[f64]| v[v.len() - 3..].windows(2).all(|w| w[1] <= w[0]);
    let pass = series_gap < accept::NORM_SERIES_ABS
        && tail_monotone(&circ)
        && tail_monotone(&bx)
        && circ.last() <= circ.first()
        && bx.last() < bx.first();
    report(
        7,
        "norm limits",
        pass,
        format!("series vs quadrature {series_gap:.2e}; sup|norm - 1| circle [{}], box [{}]", sci(&circ), sci(&bx)),
    );
}

fn residuals(r: &[revival_core::schedule::LevelResidual]) -> Vec<f64> {
    r.iter().map(|x| x.residual).collect()
}

#[test]
fn c08_functional_vs_newtonian() {
    let base = PhysicalParams::new(0.01, 1.0, 0.03, 1.0).unwrap();
    let fam = TestFamily::standard(1.5).unwrap();
    let pt = PhasePoint::new(0.2, 1.5);
    let opts = ScheduleOptions::defaults(1.0, 1.0);
    let mut ok = true;
    let mut details = Vec::new();
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(" ");
    for domain in [Domain::Circle, Domain::Box] {
        let sigma = ClassicalDensity::gaussian_mixture(
            domain,
            1.0,
            1.0,
            &[GaussianComponent {
                weight: 1.0,
                q: 0.2,
                p: 1.5,
                sigma_q: 0.15,
                sigma_p: 0.1,
            }],
        )
        .unwrap();
        let quad = PhaseQuadrature::new(domain, 1.0, 128, 1.0, 2.0, 384).unwrap();
        let dens = Scenario::Density {
            sigma: sigma.clone(),
            quad: Some(quad),
        };
        let d1 = make_schedule(Regime::new(0, 1, Spread::Finite(1.0)).unwrap(), &base, 4, domain, opts).unwrap();
        let half = make_schedule(Regime::new(1, 2, Spread::Finite(0.0)).unwrap(), &base, 4, domain, opts).unwrap();
        let functional = residuals(&convergence_meter(&d1, &dens, &Target::Classical(sigma.clone()), &fam).unwrap());
        let revived = residuals(&convergence_meter(&half, &dens, &Target::Classical(sigma.clone()), &fam).unwrap());
        let delta = ClassicalDensity::point(domain, 1.0, 1.0, pt).unwrap();
        let atom_delta = residuals(&convergence_meter(&d1, &Scenario::Atom(pt), &Target::Classical(delta), &fam).unwrap());
        let atom_phi = residuals(
            &convergence_meter(&d1, &Scenario::Atom(pt), &Target::Profile(Spread::Finite(1.0)), &fam).unwrap(),
        );
        let pass = is_converging(&functional)
            && !is_converging(&atom_delta)
            && is_converging(&atom_phi)
            && !is_converging(&revived)
            && revived.last().unwrap() >= revived.first().unwrap();
        ok &= pass;
        details.push(format!(
            "{}: sigma (0,D=1) [{}], atom vs delta [{}], atom vs phi_D [{}], sigma (1/2,0) [{}]",
            domain.name(),
            fmt(&functional),
            fmt(&atom_delta),
            fmt(&atom_phi),
            fmt(&revived)
        ));
    }
    report(8, "functional vs Newtonian dichotomy", ok, details.join("; "));
}

#[test]
fn c09_kozlov_flattening() {
    let fam = TestFamily::standard(1.5).unwrap();
    let mut worst = 0.0f64;
    for domain in [Domain::Circle, Domain::Box] {
        let sigma = ClassicalDensity::gaussian_mixture(
            domain,
            1.0,
            1.0,
            &[
                GaussianComponent {
                    weight: 0.6,
                    q: 0.3,
                    p: 1.4,
                    sigma_q: 0.2,
                    sigma_p: 0.12,
                },
                GaussianComponent {
                    weight: 0.4,
                    q: -0.5,
                    p: 1.7,
                    sigma_q: 0.1,
                    sigma_p: 0.1,
                },
            ],
        )
        .unwrap();
        let t_cl = time_scales(&PhysicalParams::new(1.0, 1.0, 0.1, 1.0).unwrap(), 1.5, domain).t_cl;
        let moved = sigma.transport(50.0 * t_cl).unwrap().pairings(&fam);
        let limit = sigma.kozlov_limit().pairings(&fam);
        for b in 0..5 {
            let combo = |v: &[f64]| v[fam.index(0, b)] + v[fam.index(1, b)] + v[fam.index(-1, b)];
            let (m, lim) = (combo(&moved), combo(&limit));
            worst = worst.max((m - lim).abs() / lim.abs());
        }
    }
    report(
        9,
        "Kozlov flattening",
        worst < accept::KOZLOV_REL,
        format!("max relative pairing gap at t = 50 T_cl over 5 test functions, circle and box: {worst:.2e}"),
    );
}

#[test]
fn c10_random_box() {
    let params = PhysicalParams::new(0.2, 1.0, 0.2, 1.0).unwrap();
    let f = LengthDensity::default_for(1.0).unwrap();
    let model = RandomBoxModel::new(f, StateFamily::Coherent { q_rel: -0.3, p: 1.0 }, params).unwrap();
    let grid = PositionGrid::gauss(&model, 8);
    let limit = limit_density(&model, &grid).unwrap();
    let delta = revival_core::random_box::delta_on_grid(&model, &grid).unwrap();
    let uniform = uniform_on_grid(&model, &grid);
    let identity = limit
        .values
        .iter()
        .zip(&delta)
        .zip(&uniform)
        .map(|((p, d), u)| (p + d - u).abs())
        .fold(0.0, f64::max);

    let avg = time_average_density(&model, &grid, TimeWindow::standard(&model)).unwrap();
    let sup = limit.values.iter().cloned().fold(0.0, f64::max);
    let avg_gap = avg
        .values
        .iter()
        .zip(&limit.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / sup;

    let eigen = RandomBoxModel::new(f, StateFamily::Eigenstate { k: 1 }, params).unwrap();
    let p0 = position_density(&eigen, &grid, 0.0).unwrap();
    let mut stationary = 0.0f64;
    for t in [0.77, 13.1, 250.0] {
        let pt = position_density(&eigen, &grid, t).unwrap();
        stationary = stationary.max(p0.values.iter().zip(&pt.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
    }

    let g = |x: f64| (-x * x / 0.5).exp();
    let mut pairings = Vec::new();
    for n in 0..3 {
        let hbar = 0.1 * 0.5f64.powi(n);
        let p = PhysicalParams::new(hbar, 1.0, 0.3 * hbar.sqrt(), 1.0).unwrap();
        let m = RandomBoxModel::new(f, StateFamily::Coherent { q_rel: -0.3, p: 1.0 }, p).unwrap();
        pairings.push(delta_pairing(&m, &PositionGrid::gauss(&m, 64), g).unwrap().abs());
    }
    let pass = identity < accept::RANDOM_BOX_IDENTITY_ABS
        && avg_gap < accept::TIME_AVERAGE_REL
        && stationary < accept::STATIONARY_ABS
        && strictly_decreasing(&pairings);
    report(
        10,
        "random box",
        pass,
        format!(
            "identity {identity:.1e}; window average vs limit {avg_gap:.1e} (rel sup); eigenstate drift {stationary:.1e}; |Delta pairings| [{}]", sci(&pairings)
        ),
    );
}
