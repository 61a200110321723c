//! Scenario configuration: one TOML file, validated up front, flags applied on top.

use std::path::Path;

use serde::{Deserialize, Serialize};

use revival_core::{Domain, PhasePoint, PhysicalParams};

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn bad<T>(field: &str, msg: impl std::fmt::Display) -> Result<T, ConfigError> {
    Err(ConfigError(format!("{field}: {msg}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum DomainName {
    #[default]
    Circle,
    Box,
}

impl From<DomainName> for Domain {
    fn from(d: DomainName) -> Self {
        match d {
            DomainName::Circle => Domain::Circle,
            DomainName::Box => Domain::Box,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub hbar: f64,
    #[serde(default = "one")]
    pub mass: f64,
    pub alpha: f64,
    #[serde(default = "one")]
    pub l: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for Params {
    fn default() -> Self {
        Self {
            hbar: 0.05,
            mass: 1.0,
            alpha: 0.05,
            l: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Initial {
    pub q: f64,
    pub p: f64,
}

impl Default for Initial {
    fn default() -> Self {
        Self { q: 0.2, p: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Component {
    #[serde(default = "one")]
    pub weight: f64,
    pub q: f64,
    pub p: f64,
    pub sigma_q: f64,
    pub sigma_p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Spectral,
    Image,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TimeUnit {
    #[default]
    Absolute,
    TRev,
    TCl,
    TColl,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Evolve {
    pub times: Vec<f64>,
    #[serde(default)]
    pub unit: TimeUnit,
    #[serde(default)]
    pub method: Method,
    #[serde(default = "default_grid")]
    pub grid: usize,
}

fn default_grid() -> usize {
    512
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RevivalMap {
    pub fractions: Vec<String>,
    #[serde(default = "default_map_grid")]
    pub grid: usize,
}

fn default_map_grid() -> usize {
    2048
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    Transition,
    Atom,
    Density,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetKind {
    /// The regime's limit profile.
    Profile,
    /// Classical transport of the scenario's own density (a delta for point scenarios).
    Classical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseGrid {
    pub nq: usize,
    pub p_lo: f64,
    pub p_hi: f64,
    pub np: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub m: i64,
    pub n: i64,
    /// A number, or the string "inf".
    pub spread: toml::Value,
    #[serde(default = "default_levels")]
    pub levels: usize,
    pub scenario: ScenarioKind,
    pub targets: Vec<TargetKind>,
    /// Center of the test-function bumps in momentum.
    pub p_ref: Option<f64>,
    pub hbar0: Option<f64>,
    pub c_alpha: Option<f64>,
    pub p_scale: Option<f64>,
    pub quadrature: Option<PhaseGrid>,
}

fn default_levels() -> usize {
    4
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Husimi {
    pub t: f64,
    pub nq: usize,
    pub p_lo: f64,
    pub p_hi: f64,
    pub np: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Family {
    Coherent { q_rel: f64, p: f64 },
    Eigenstate { k: i64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    /// Start and width in units of the revival time at the center length.
    pub start: f64,
    pub width: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitDist {
    pub center: f64,
    pub width: Option<f64>,
    pub family: Family,
    #[serde(default)]
    pub times: Vec<f64>,
    #[serde(default)]
    pub average: bool,
    pub window: Option<Window>,
    /// Gauss panels per unit of the support split; the point count is `16 * (panels + panels / 2)`.
    #[serde(default = "default_panels")]
    pub panels: usize,
}

fn default_panels() -> usize {
    8
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Verify {
    pub modular: Option<f64>,
    pub dual_engine: Option<f64>,
    pub overlap: Option<f64>,
    pub resolution: Option<f64>,
    pub norm_series: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub dir: Option<String>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub domain: DomainName,
    /// Seeds random draws and, when set, a sub-cell jitter of position grids.
    pub seed: Option<u64>,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub initial: Initial,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub density: Vec<Component>,
    pub evolve: Option<Evolve>,
    pub revival_map: Option<RevivalMap>,
    pub sweep: Option<Sweep>,
    pub husimi: Option<Husimi>,
    pub limitdist: Option<LimitDist>,
    pub verify: Option<Verify>,
    #[serde(default)]
    pub output: Output,
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError(e.message().to_string() + &span_hint(text, e.span())))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn emit(&self) -> String {
        toml::to_string(self).expect("config is always representable as TOML")
    }

    pub fn domain(&self) -> Domain {
        self.domain.into()
    }

    pub fn physical(&self) -> Result<PhysicalParams, ConfigError> {
        let p = &self.params;
        PhysicalParams::new(p.hbar, p.mass, p.alpha, p.l).or_else(|e| bad("params", e))
    }

    pub fn phase(&self) -> Result<PhasePoint, ConfigError> {
        let i = self.initial;
        if !(i.q.is_finite() && i.p.is_finite()) {
            return bad("initial", "q and p must be finite");
        }
        Ok(PhasePoint::new(i.q, i.p))
    }

    /// Checks shared by every command; command sections are checked when run.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.physical()?;
        self.phase()?;
        for (i, c) in self.density.iter().enumerate() {
            if !(c.weight > 0.0 && c.sigma_q > 0.0 && c.sigma_p > 0.0) {
                return bad(&format!("density[{i}]"), "weight, sigma_q and sigma_p must be positive");
            }
        }
        if let Some(e) = &self.evolve {
            if e.times.is_empty() {
                return bad("evolve.times", "at least one time is required");
            }
            if e.times.iter().any(|t| !t.is_finite()) {
                return bad("evolve.times", "times must be finite");
            }
            if e.grid < 2 {
                return bad("evolve.grid", "need at least 2 points");
            }
        }
        if let Some(r) = &self.revival_map {
            if r.fractions.is_empty() {
                return bad("revival_map.fractions", "at least one fraction is required");
            }
            for f in &r.fractions {
                parse_fraction(f)?;
            }
            if r.grid < 16 {
                return bad("revival_map.grid", "need at least 16 points");
            }
        }
        if let Some(s) = &self.sweep {
            if s.levels < 3 {
                return bad("sweep.levels", format!("need at least 3 levels, got {}", s.levels));
            }
            if s.targets.is_empty() {
                return bad("sweep.targets", "at least one target is required");
            }
            spread_value(&s.spread)?;
            if s.scenario == ScenarioKind::Density && self.density.is_empty() {
                return bad("density", "the density scenario needs at least one component");
            }
            if s.scenario == ScenarioKind::Density && s.targets.contains(&TargetKind::Profile) {
                return bad("sweep.targets", "profile targets need a point scenario");
            }
        }
        if let Some(h) = &self.husimi {
            if h.nq < 2 || h.np < 2 || !(h.p_hi > h.p_lo) || !h.t.is_finite() {
                return bad("husimi", "need nq, np >= 2, p_hi > p_lo and a finite t");
            }
        }
        if let Some(d) = &self.limitdist {
            if !(d.center > 0.0) {
                return bad("limitdist.center", "must be positive");
            }
            if d.panels < 4 {
                return bad("limitdist.panels", "need at least 4 panels");
            }
            if let Some(w) = &d.window {
                if !(w.width > 0.0 && w.samples >= 1 && w.start.is_finite()) {
                    return bad("limitdist.window", "need a positive width and at least one sample");
                }
            }
        }
        if let Some(v) = &self.verify {
            for (name, tol) in [
                ("modular", v.modular),
                ("dual_engine", v.dual_engine),
                ("overlap", v.overlap),
                ("resolution", v.resolution),
                ("norm_series", v.norm_series),
            ] {
                if tol.is_some_and(|t| !(t >= 0.0)) {
                    return bad(&format!("verify.{name}"), "tolerance must be non-negative");
                }
            }
        }
        Ok(())
    }
}

fn span_hint(text: &str, span: Option<std::ops::Range<usize>>) -> String {
    match span {
        Some(r) => {
            let line = text[..r.start.min(text.len())].matches('\n').count() + 1;
            format!(" (line {line})")
        }
        None => String::new(),
    }
}

pub fn parse_fraction(s: &str) -> Result<(i64, i64), ConfigError> {
    let parts: Vec<&str> = s.split('/').map(str::trim).collect();
    let parsed = match parts.as_slice() {
        [m] => m.parse().ok().map(|m| (m, 1)),
        [m, n] => m.parse().ok().zip(n.parse().ok()),
        _ => None,
    };
    let Some((m, n)) = parsed else {
        return bad("fraction", format!("`{s}` is not of the form M/N"));
    };
    revival_core::revival::revival_structure(m, n, 1.0).or_else(|e| bad("fraction", e))?;
    Ok((m, n))
}

pub fn spread_value(v: &toml::Value) -> Result<revival_core::revival::Spread, ConfigError> {
    let d = match v {
        toml::Value::String(s) if s == "inf" => f64::INFINITY,
        toml::Value::Float(x) => *x,
        toml::Value::Integer(i) => *i as f64,
        _ => return bad("sweep.spread", "expected a non-negative number or \"inf\""),
    };
    revival_core::revival::Spread::new(d).or_else(|e| bad("sweep.spread", e))
}
