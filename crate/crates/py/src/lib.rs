//! Python bindings for the operator algebra, the amplitude equations and
//! the convergence studies.

use std::fmt::Display;

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use spingp::continuum::{continuum_observables, ContinuumField, Grid1D, PotentialField, SplitStepGp};
use spingp::latticedyn::{drift_summary, integrate, IntegratorConfig, LatticeState, Scheme, SymbolMode, XxzLattice};
use spingp::limitlab::{self, AMode, ContinuumLimitSetup, ConvergenceReport, InitialScaling, TruncationSetup};
use spingp::models::{self, CouplingMode, HubbardSectors, Perturbation, XxzSectors};
use spingp::opalg::{ModeSpace, OperatorExpr, Statistics};
use spingp::symbolmap;

create_exception!(spingp_py, SpinGpError, PyException);

fn err<E: Display>(e: E) -> PyErr {
    SpinGpError::new_err(e.to_string())
}

fn statistics(name: &str) -> PyResult<Statistics> {
    match name {
        "bose" => Ok(Statistics::Bose),
        "fermi" => Ok(Statistics::Fermi),
        other => Err(PyValueError::new_err(format!("statistics must be 'bose' or 'fermi', got {other:?}"))),
    }
}

/// A polynomial in ladder operators with exact rational coefficients.
#[pyclass(name = "Operator", module = "spingp_py", frozen)]
struct PyOperator(OperatorExpr);

#[pymethods]
impl PyOperator {
    #[staticmethod]
    #[pyo3(signature = (sites, site, flavor=0, flavors=1, statistics="bose"))]
    fn annihilator(sites: usize, site: i64, flavor: usize, flavors: usize, statistics: &str) -> PyResult<Self> {
        let space = ModeSpace::new(sites, flavors);
        Ok(Self(OperatorExpr::annihilator(space, self::statistics(statistics)?, site, flavor)))
    }

    #[staticmethod]
    #[pyo3(signature = (sites, site, flavor=0, flavors=1, statistics="bose"))]
    fn creator(sites: usize, site: i64, flavor: usize, flavors: usize, statistics: &str) -> PyResult<Self> {
        let space = ModeSpace::new(sites, flavors);
        Ok(Self(OperatorExpr::creator(space, self::statistics(statistics)?, site, flavor)))
    }

    #[staticmethod]
    #[pyo3(signature = (sites, site, flavor=0, flavors=1, statistics="bose"))]
    fn number(sites: usize, site: i64, flavor: usize, flavors: usize, statistics: &str) -> PyResult<Self> {
        let space = ModeSpace::new(sites, flavors);
        Ok(Self(OperatorExpr::number(space, self::statistics(statistics)?, site, flavor)))
    }

    #[getter]
    fn statistics(&self) -> String {
        self.0.statistics().to_string()
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        self.0.add(&other.0).map(Self).map_err(err)
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        self.0.sub(&other.0).map(Self).map_err(err)
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.0.multiply(&other.0).map(Self).map_err(err)
    }

    fn __neg__(&self) -> Self {
        Self(self.0.neg())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0.sub(&other.0).is_ok_and(|d| d.normal_order().is_zero())
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Operator({})", self.0)
    }

    fn commutator(&self, other: &Self) -> PyResult<Self> {
        self.0.commutator(&other.0).map(Self).map_err(err)
    }

    fn anticommutator(&self, other: &Self) -> PyResult<Self> {
        self.0.anticommutator(&other.0).map(Self).map_err(err)
    }

    fn normal_order(&self) -> Self {
        Self(self.0.normal_order())
    }

    fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    fn is_zero(&self) -> bool {
        self.0.normal_order().is_zero()
    }
}

#[pyfunction]
#[pyo3(signature = (sites, statistics="bose", expanded=false))]
fn xxz_hamiltonian(sites: usize, statistics: &str, expanded: bool) -> PyResult<PyOperator> {
    let mode = if expanded { CouplingMode::Expanded } else { CouplingMode::Symbolic };
    models::xxz_hamiltonian(sites, self::statistics(statistics)?, mode, XxzSectors::ALL).map(PyOperator).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (sites, statistics="bose"))]
fn hubbard_hamiltonian(sites: usize, statistics: &str) -> PyResult<PyOperator> {
    models::hubbard_hamiltonian(sites, self::statistics(statistics)?, HubbardSectors::ALL)
        .map(PyOperator)
        .map_err(err)
}

/// `[H, a_site]`, normal ordered.
#[pyfunction]
#[pyo3(signature = (h, site, flavor=0))]
fn derive_eom(h: &PyOperator, site: usize, flavor: usize) -> PyResult<PyOperator> {
    models::derive_eom(&h.0, site, flavor).map(PyOperator).map_err(err)
}

#[pyfunction]
fn naive_symbol(op: &PyOperator) -> String {
    symbolmap::naive_symbol(&op.0).to_string()
}

#[pyfunction]
fn ordering_correction(op: &PyOperator) -> PyResult<String> {
    symbolmap::ordering_correction(&op.0).map(|p| p.to_string()).map_err(err)
}

type CheckRow = (String, usize, bool, String);

/// Runs every symbolic check; returns `(passed, [(name, site, passed, residual)])`.
#[pyfunction]
#[pyo3(signature = (sites, fault_site=None))]
fn verify_derivation(sites: usize, fault_site: Option<usize>) -> PyResult<(bool, Vec<CheckRow>)> {
    let r = models::verify_derivation(sites, fault_site.map(|site| Perturbation { site })).map_err(err)?;
    let rows = r.checks.iter().map(|c| (c.name.clone(), c.site, c.passed, c.residual.clone())).collect();
    Ok((r.passed(), rows))
}

/// Couplings of the strained XXZ chain with a uniform field.
#[pyclass(name = "XxzParams", module = "spingp_py", get_all, set_all)]
struct PyXxzParams {
    sites: usize,
    j0: f64,
    j1: f64,
    r0: f64,
    r1: f64,
    s: f64,
    h: f64,
    hbar: f64,
    x_xi: f64,
}

#[pymethods]
impl PyXxzParams {
    #[new]
    #[pyo3(signature = (sites=7, j0=1.0, r0=0.5, h=0.0, j1=0.0, r1=0.0, s=1.0, hbar=1.0, x_xi=0.0))]
    #[allow(clippy::too_many_arguments)]
    fn new(sites: usize, j0: f64, r0: f64, h: f64, j1: f64, r1: f64, s: f64, hbar: f64, x_xi: f64) -> Self {
        Self { sites, j0, j1, r0, r1, s, h, hbar, x_xi }
    }

    fn __repr__(&self) -> String {
        format!(
            "XxzParams(sites={}, j0={}, r0={}, h={}, j1={}, r1={}, s={}, hbar={}, x_xi={})",
            self.sites, self.j0, self.r0, self.h, self.j1, self.r1, self.s, self.hbar, self.x_xi
        )
    }
}

impl PyXxzParams {
    fn core(&self) -> models::XxzParams {
        let mut p = models::XxzParams::uniform(self.sites, self.j0, self.r0, self.h);
        p.j1 = self.j1;
        p.r1 = self.r1;
        p.s = self.s;
        p.hbar = self.hbar;
        p.x_xi = self.x_xi;
        p
    }
}

/// Rescaling coefficients; `a_squared` and `b_squared` are exact fractions.
#[pyclass(name = "Transform", module = "spingp_py", frozen)]
struct PyTransform(limitlab::TransformCoefficients);

#[pymethods]
impl PyTransform {
    #[getter]
    fn a_squared(&self) -> String {
        self.0.a_squared.to_string()
    }

    #[getter]
    fn b_squared(&self) -> String {
        self.0.b_squared.to_string()
    }

    #[getter]
    fn a_squared_float(&self) -> f64 {
        self.0.a_squared_f64()
    }

    #[getter]
    fn b_squared_float(&self) -> f64 {
        self.0.b_squared_f64()
    }

    #[getter]
    fn time_scale(&self) -> Option<f64> {
        self.0.time_scale_f64()
    }

    #[getter]
    fn degenerate(&self) -> bool {
        self.0.degenerate
    }

    /// `A`; imaginary for negative `A²` unless `mode="modulus"`.
    #[pyo3(signature = (mode="signed"))]
    fn amplitude(&self, mode: &str) -> PyResult<Complex64> {
        let mode = match mode {
            "signed" => AMode::Signed,
            "modulus" => AMode::Modulus,
            other => return Err(PyValueError::new_err(format!("mode must be 'signed' or 'modulus', got {other:?}"))),
        };
        self.0.amplitude(mode).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Transform(a_squared={}, b_squared={}, degenerate={})", self.0.a_squared, self.0.b_squared, self.0.degenerate)
    }
}

#[pyfunction]
fn compute_transform(params: &PyXxzParams) -> PyResult<PyTransform> {
    limitlab::compute_transform(&params.core()).map(PyTransform).map_err(err)
}

/// Integrates the XXZ amplitude equation; returns the final amplitudes and
/// the largest norm and energy drifts.
#[pyfunction]
#[pyo3(signature = (params, initial, dt, t_end, wick=false, adaptive=false, tolerance=1e-10))]
#[allow(clippy::too_many_arguments)]
fn evolve_xxz_lattice(
    py: Python<'_>,
    params: &PyXxzParams,
    initial: Vec<Complex64>,
    dt: f64,
    t_end: f64,
    wick: bool,
    adaptive: bool,
    tolerance: f64,
) -> PyResult<(Vec<Complex64>, f64, f64)> {
    let mode = if wick { SymbolMode::Wick } else { SymbolMode::Naive };
    let model = XxzLattice::from_params(&params.core(), mode).map_err(err)?;
    let state = LatticeState::new(ModeSpace::spinless(params.sites), initial).map_err(err)?;
    let cfg = IntegratorConfig {
        dt,
        t_end,
        scheme: if adaptive { Scheme::Rk45 } else { Scheme::Rk4 },
        tolerance,
        snapshot_interval: None,
    };
    let traj = py.detach(|| integrate(&state, &model, &cfg)).map_err(err)?;
    let drift = drift_summary(&traj, &model);
    let last = traj.snapshots.last().expect("trajectory keeps its endpoint");
    Ok((last.amplitudes.clone(), drift.max_norm_drift, drift.max_energy_drift))
}

fn grid(length: f64, points: usize) -> PyResult<Grid1D> {
    Grid1D::new(length, points).map_err(err)
}

fn potential(g: &Grid1D, v: Option<Vec<f64>>) -> PyResult<PotentialField> {
    match v {
        Some(v) if v.len() != g.points() => {
            Err(PyValueError::new_err(format!("potential has {} samples for {} points", v.len(), g.points())))
        }
        Some(v) => PotentialField::new(v).map_err(err),
        None => Ok(PotentialField::zeros(g)),
    }
}

/// Grid coordinates `ξ_m = −L/2 + mL/M`.
#[pyfunction]
fn grid_coordinates(length: f64, points: usize) -> PyResult<Vec<f64>> {
    Ok(grid(length, points)?.points_iter().collect())
}

/// Split-step evolution of `iφ_t = −φ_ξξ − 2|φ|²φ + Vφ` on a periodic grid
/// (`reduced` drops the `−2φ` gauge term).
#[pyfunction]
#[pyo3(signature = (initial, length, dt, t_end, potential=None, reduced=false))]
fn evolve_gp(
    py: Python<'_>,
    initial: Vec<Complex64>,
    length: f64,
    dt: f64,
    t_end: f64,
    potential: Option<Vec<f64>>,
    reduced: bool,
) -> PyResult<Vec<Complex64>> {
    let g = grid(length, initial.len())?;
    let v = self::potential(&g, potential)?;
    let field = ContinuumField::new(g, initial).map_err(err)?;
    let stepper = if reduced { SplitStepGp::reduced(&field, &v) } else { SplitStepGp::new(&field, &v) }.map_err(err)?;
    py.detach(|| stepper.run(&field, dt, t_end)).map(|f| f.values).map_err(err)
}

/// `(norm, energy, momentum)` of a GP field.
#[pyfunction]
#[pyo3(signature = (values, length, potential=None))]
fn gp_observables(values: Vec<Complex64>, length: f64, potential: Option<Vec<f64>>) -> PyResult<(f64, f64, f64)> {
    let g = grid(length, values.len())?;
    let v = self::potential(&g, potential)?;
    let o = continuum_observables(&ContinuumField::new(g, values).map_err(err)?, Some(&v));
    Ok((o.norm, o.energy, o.momentum))
}

fn report_dict<'py>(py: Python<'py>, r: &ConvergenceReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("parameters", r.parameters.clone())?;
    d.set_item("errors", r.errors.clone())?;
    d.set_item("slope", r.slope)?;
    d.set_item("half_width", r.half_width)?;
    let skipped: Vec<(usize, String)> = r
        .status
        .iter()
        .enumerate()
        .filter_map(|(i, s)| match s {
            limitlab::PointStatus::Skipped(m) => Some((i, m.clone())),
            limitlab::PointStatus::Ok => None,
        })
        .collect();
    d.set_item("skipped", skipped)?;
    Ok(d)
}

/// Lattice against continuum error over a sweep of site counts.
#[pyfunction]
#[pyo3(signature = (sites=None, t_end=None))]
fn continuum_limit_study<'py>(
    py: Python<'py>,
    sites: Option<Vec<usize>>,
    t_end: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let mut setup = ContinuumLimitSetup::default();
    if let Some(s) = sites {
        setup.sites = s;
    }
    if let Some(t) = t_end {
        setup.t_end = t;
    }
    let r = py.detach(|| limitlab::lattice_vs_continuum(&setup));
    report_dict(py, &r)
}

/// Precursor against GP error over a sweep of spin magnitudes.
#[pyfunction]
#[pyo3(signature = (spins=None, rescaled=false))]
fn truncation_study<'py>(py: Python<'py>, spins: Option<Vec<f64>>, rescaled: bool) -> PyResult<Bound<'py, PyDict>> {
    let mut setup = TruncationSetup::default();
    if let Some(s) = spins {
        setup.spins = s;
    }
    setup.scaling = if rescaled { InitialScaling::Rescaled } else { InitialScaling::Physical };
    let r = py.detach(|| limitlab::truncation_study(&setup));
    report_dict(py, &r)
}

#[pymodule]
fn spingp_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SpinGpError", m.py().get_type::<SpinGpError>())?;
    m.add_class::<PyOperator>()?;
    m.add_class::<PyXxzParams>()?;
    m.add_class::<PyTransform>()?;
    m.add_function(wrap_pyfunction!(xxz_hamiltonian, m)?)?;
    m.add_function(wrap_pyfunction!(hubbard_hamiltonian, m)?)?;
    m.add_function(wrap_pyfunction!(derive_eom, m)?)?;
    m.add_function(wrap_pyfunction!(naive_symbol, m)?)?;
    m.add_function(wrap_pyfunction!(ordering_correction, m)?)?;
    m.add_function(wrap_pyfunction!(verify_derivation, m)?)?;
    m.add_function(wrap_pyfunction!(compute_transform, m)?)?;
    m.add_function(wrap_pyfunction!(evolve_xxz_lattice, m)?)?;
    m.add_function(wrap_pyfunction!(grid_coordinates, m)?)?;
    m.add_function(wrap_pyfunction!(evolve_gp, m)?)?;
    m.add_function(wrap_pyfunction!(gp_observables, m)?)?;
    m.add_function(wrap_pyfunction!(continuum_limit_study, m)?)?;
    m.add_function(wrap_pyfunction!(truncation_study, m)?)?;
    Ok(())
}
