//! Python bindings: parameters, coherent states, closed-form overlaps, theta and the random box.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use revival_core::random_box::{
    delta_on_grid, limit_density, uniform_on_grid, LengthDensity, PositionGrid, RandomBoxModel, StateFamily,
};
use revival_core::revival::{box_revival_structure, revival_structure};
use revival_core::scales::revival_time;
use revival_core::{Domain, EvalMethod, PhasePoint, WaveState};

fn err(e: revival_core::Error) -> PyErr {
    use revival_core::Error as E;
    match e {
        E::Capacity { .. } | E::Accuracy { .. } | E::Range { .. } | E::OracleFailure { .. } => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn domain(name: &str) -> PyResult<Domain> {
    match name {
        "circle" => Ok(Domain::Circle),
        "box" => Ok(Domain::Box),
        _ => Err(PyValueError::new_err(format!("domain must be 'circle' or 'box', got '{name}'"))),
    }
}

fn method(name: &str) -> PyResult<EvalMethod> {
    match name {
        "spectral" => Ok(EvalMethod::Spectral),
        "image" => Ok(EvalMethod::ImageSum),
        _ => Err(PyValueError::new_err(format!("method must be 'spectral' or 'image', got '{name}'"))),
    }
}

#[pyclass(name = "PhysicalParams", frozen, from_py_object)]
#[derive(Clone, Copy)]
pub struct PyParams(pub revival_core::PhysicalParams);

#[pymethods]
impl PyParams {
    #[new]
    #[pyo3(signature = (hbar, alpha, mass = 1.0, l = 1.0))]
    fn new(hbar: f64, alpha: f64, mass: f64, l: f64) -> PyResult<Self> {
        revival_core::PhysicalParams::new(hbar, mass, alpha, l).map(Self).map_err(err)
    }

    #[getter]
    fn hbar(&self) -> f64 {
        self.0.hbar()
    }

    #[getter]
    fn mass(&self) -> f64 {
        self.0.mass()
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha()
    }

    #[getter]
    fn l(&self) -> f64 {
        self.0.half_length()
    }

    fn revival_time(&self, domain_name: &str) -> PyResult<f64> {
        Ok(revival_time(&self.0, domain(domain_name)?))
    }

    /// `t_cl`, `t_coll` and `t_rev` for a packet of momentum `p`.
    fn time_scales<'py>(&self, py: Python<'py>, p: f64, domain_name: &str) -> PyResult<Bound<'py, PyDict>> {
        let ts = revival_core::time_scales(&self.0, p, domain(domain_name)?);
        let d = PyDict::new(py);
        d.set_item("t_cl", ts.t_cl)?;
        d.set_item("t_coll", ts.t_coll)?;
        d.set_item("t_rev", ts.t_rev)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "PhysicalParams(hbar={}, alpha={}, mass={}, l={})",
            self.0.hbar(),
            self.0.alpha(),
            self.0.mass(),
            self.0.half_length()
        )
    }
}

/// A coherent state on the circle or in the box, stored in the energy eigenbasis.
#[pyclass(name = "CoherentState", frozen)]
pub struct PyState(WaveState);

#[pymethods]
impl PyState {
    #[new]
    fn new(domain_name: &str, params: PyParams, q: f64, p: f64) -> PyResult<Self> {
        let ph = PhasePoint::new(q, p);
        let s = match domain(domain_name)? {
            Domain::Circle => revival_core::make_circle_state(&params.0, ph),
            Domain::Box => revival_core::make_box_state(&params.0, ph),
        };
        s.map(Self).map_err(err)
    }

    #[getter]
    fn time(&self) -> f64 {
        self.0.time()
    }

    #[getter]
    fn k_min(&self) -> i64 {
        self.0.k_min()
    }

    fn coefficients(&self) -> Vec<Complex64> {
        self.0.coefficients().to_vec()
    }

    fn norm_sq(&self) -> f64 {
        self.0.norm_sq()
    }

    fn evolve(&self, t: f64) -> Self {
        Self(self.0.evolve(t))
    }

    #[pyo3(signature = (x, method_name = "spectral"))]
    fn eval(&self, x: f64, method_name: &str) -> PyResult<Complex64> {
        self.0.eval(x, method(method_name)?).map_err(err)
    }

    #[pyo3(signature = (xs, method_name = "spectral"))]
    fn density(&self, xs: Vec<f64>, method_name: &str) -> PyResult<Vec<f64>> {
        self.0.density(&xs, method(method_name)?).map_err(err)
    }

    fn inner(&self, other: &PyState) -> PyResult<Complex64> {
        self.0.inner(&other.0).map_err(err)
    }
}

#[pyfunction]
fn theta(z: Complex64, tau: Complex64) -> PyResult<Complex64> {
    revival_core::theta(z, tau).map_err(err)
}

#[pyfunction]
fn gaussian_overlap(params: PyParams, a: (f64, f64), b: (f64, f64), t: f64) -> Complex64 {
    revival_core::gaussian_overlap(&params.0, PhasePoint::new(a.0, a.1), PhasePoint::new(b.0, b.1), t)
}

/// `(upsilon_a, upsilon_{b,t})` on the circle or in the box.
#[pyfunction]
fn overlap(domain_name: &str, params: PyParams, a: (f64, f64), b: (f64, f64), t: f64) -> PyResult<Complex64> {
    let (a, b) = (PhasePoint::new(a.0, a.1), PhasePoint::new(b.0, b.1));
    match domain(domain_name)? {
        Domain::Circle => revival_core::circle_overlap(&params.0, a, b, t),
        Domain::Box => revival_core::box_overlap(&params.0, a, b, t),
    }
    .map_err(err)
}

#[pyfunction]
fn norm_sq(domain_name: &str, params: PyParams, a: (f64, f64)) -> PyResult<f64> {
    let a = PhasePoint::new(a.0, a.1);
    match domain(domain_name)? {
        Domain::Circle => revival_core::circle_norm_sq(&params.0, a),
        Domain::Box => revival_core::box_norm_sq(&params.0, a),
    }
    .map_err(err)
}

/// `(n_prime, a)` for the fractional revival at `(m/n) T_rev`.
#[pyfunction]
#[pyo3(signature = (m, n, domain_name = "circle", l = 1.0))]
fn revival_copies(m: i64, n: i64, domain_name: &str, l: f64) -> PyResult<(i64, f64)> {
    let s = match domain(domain_name)? {
        Domain::Circle => revival_structure(m, n, l),
        Domain::Box => box_revival_structure(m, n, l),
    }
    .map_err(err)?;
    Ok((s.n_prime, s.a))
}

type Columns = (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>);

/// Random-box limit density: returns `(x, weights, p_inf, delta, uniform)` on a Gauss grid.
#[pyfunction]
#[pyo3(signature = (params, q_rel, p, width = None, panels = 8))]
fn random_box_limit(
    params: PyParams,
    q_rel: f64,
    p: f64,
    width: Option<f64>,
    panels: usize,
) -> PyResult<Columns> {
    let l = params.0.half_length();
    let density = match width {
        Some(w) => LengthDensity::truncated_gaussian(l, w),
        None => LengthDensity::default_for(l),
    }
    .map_err(err)?;
    let model = RandomBoxModel::new(density, StateFamily::Coherent { q_rel, p }, params.0).map_err(err)?;
    let grid = PositionGrid::gauss(&model, panels);
    let limit = limit_density(&model, &grid).map_err(err)?;
    let delta = delta_on_grid(&model, &grid).map_err(err)?;
    let uniform = uniform_on_grid(&model, &grid);
    Ok((grid.xs, grid.weights, limit.values, delta, uniform))
}

#[pymodule]
pub fn revival_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParams>()?;
    m.add_class::<PyState>()?;
    m.add_function(wrap_pyfunction!(theta, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_overlap, m)?)?;
    m.add_function(wrap_pyfunction!(overlap, m)?)?;
    m.add_function(wrap_pyfunction!(norm_sq, m)?)?;
    m.add_function(wrap_pyfunction!(revival_copies, m)?)?;
    m.add_function(wrap_pyfunction!(random_box_limit, m)?)?;
    Ok(())
}
