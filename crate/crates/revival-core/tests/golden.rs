//! Frozen reference values computed at 30 digits by `python/make_golden.py`.

use std::collections::HashMap;
use std::path::PathBuf;

use sha2::{Digest, Sha256};

use revival_core::theta::{theta_direct, theta_modular};
use revival_core::{
    box_norm_sq, box_overlap, circle_norm_sq, circle_overlap, make_box_state, make_circle_state, theta, Complex64,
    Domain, EvalMethod, PhasePoint, PhysicalParams,
};

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

struct Table {
    rows: Vec<HashMap<String, String>>,
}

impl Table {
    fn load(name: &str) -> Self {
        let text = std::fs::read_to_string(dir().join(name)).unwrap();
        let mut lines = text.lines();
        let header: Vec<String> = lines.next().unwrap().split(',').map(str::to_string).collect();
        let rows = lines
            .map(|l| header.iter().cloned().zip(l.split(',').map(str::to_string)).collect())
            .collect();
        Self { rows }
    }
}

fn f(row: &HashMap<String, String>, key: &str) -> f64 {
    row[key].parse().unwrap_or_else(|_| panic!("column {key}"))
}

fn params(row: &HashMap<String, String>) -> PhysicalParams {
    PhysicalParams::new(f(row, "hbar"), f(row, "mass"), f(row, "alpha"), f(row, "l")).unwrap()
}

fn domain(row: &HashMap<String, String>) -> Domain {
    match row["domain"].as_str() {
        "circle" => Domain::Circle,
        "box" => Domain::Box,
        d => panic!("unknown domain {d}"),
    }
}

#[test]
fn checksums_match() {
    let sums = std::fs::read_to_string(dir().join("SHA256SUMS")).unwrap();
    let mut n = 0;
    for line in sums.lines() {
        let (hash, name) = line.split_once("  ").unwrap();
        let bytes = std::fs::read(dir().join(name)).unwrap();
        let got: String = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
        assert_eq!(got, hash, "{name} was modified");
        n += 1;
    }
    assert_eq!(n, 3);
}

#[test]
fn theta_values() {
    let t = Table::load("theta.csv");
    assert_eq!(t.rows.len(), 40);
    for r in &t.rows {
        let z = Complex64::new(f(r, "z_re"), f(r, "z_im"));
        let tau = Complex64::new(f(r, "tau_re"), f(r, "tau_im"));
        let want = Complex64::new(f(r, "theta_re"), f(r, "theta_im"));
        for (name, got) in [
            ("theta", theta(z, tau).unwrap()),
            ("direct", theta_direct(z, tau).unwrap()),
            ("modular", theta_modular(z, tau).unwrap()),
        ] {
            let err = (got - want).norm() / want.norm().max(1.0);
            assert!(err < 1e-12, "{name} at z = {z}, tau = {tau}: {err:e}");
        }
    }
}

#[test]
fn overlaps_and_norms() {
    let t = Table::load("overlaps.csv");
    assert_eq!(t.rows.len(), 24);
    for r in &t.rows {
        let p = params(r);
        let a = PhasePoint::new(f(r, "qa"), f(r, "pa"));
        let b = PhasePoint::new(f(r, "qb"), f(r, "pb"));
        let time = f(r, "t");
        let (ov, nrm) = match domain(r) {
            Domain::Circle => (circle_overlap(&p, a, b, time).unwrap(), circle_norm_sq(&p, a).unwrap()),
            Domain::Box => (box_overlap(&p, a, b, time).unwrap(), box_norm_sq(&p, a).unwrap()),
        };
        let want = Complex64::new(f(r, "overlap_re"), f(r, "overlap_im"));
        assert!((ov - want).norm() < 1e-12, "{:?} overlap {ov} vs {want}", r);
        assert!((nrm - f(r, "norm_sq_a")).abs() < 1e-12, "{:?} norm {nrm}", r);
    }
}

#[test]
fn densities_at_revival_fractions() {
    let t = Table::load("densities.csv");
    assert_eq!(t.rows.len(), 2 * 5 * 17);
    for r in &t.rows {
        let p = params(r);
        let ph = PhasePoint::new(f(r, "q"), f(r, "p"));
        let s = match domain(r) {
            Domain::Circle => make_circle_state(&p, ph).unwrap(),
            Domain::Box => make_box_state(&p, ph).unwrap(),
        };
        let x = f(r, "x");
        let st = s.evolve(f(r, "t"));
        for method in [EvalMethod::Spectral, EvalMethod::ImageSum] {
            let got = st.density(&[x], method).unwrap()[0];
            let want = f(r, "density");
            assert!(
                (got - want).abs() < 1e-10,
                "{} c = {} x = {x} {method:?}: {got} vs {want}",
                r["domain"],
                r["fraction"]
            );
        }
    }
}
