//! Python module `hqa`: the production-planning program, its exact oracle,
//! ground-state decoding, annealing runs and the preset experiments.

use hqa_core::dynamics::{
    evolve, ground_state, standard_observables, uniform_times, AnnealRun, HamiltonianSource,
};
use hqa_core::mip::{self, DecodedSolution, MipDriver};
use hqa_core::oracle;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_err(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(format!("{e:#}"))
}

#[pyclass(name = "MipInstance", module = "hqa", from_py_object)]
#[derive(Clone)]
struct PyMipInstance {
    inner: mip::MipInstance,
}

#[pymethods]
impl PyMipInstance {
    #[new]
    fn new(
        total: f64,
        investment: Vec<f64>,
        unit_cost: Vec<f64>,
        cost_reduction: Vec<f64>,
        quadratic: Vec<f64>,
        penalty_weight: f64,
    ) -> PyResult<Self> {
        let inner = mip::MipInstance {
            total,
            investment,
            unit_cost,
            cost_reduction,
            quadratic,
            penalty_weight,
        };
        inner.validate().map_err(value_err)?;
        Ok(Self { inner })
    }

    /// The two-line reference instance.
    #[staticmethod]
    fn production_planning() -> Self {
        Self {
            inner: mip::MipInstance::production_planning(),
        }
    }

    #[getter]
    fn lines(&self) -> usize {
        self.inner.lines()
    }

    #[getter]
    fn total(&self) -> f64 {
        self.inner.total
    }

    #[getter]
    fn penalty_weight(&self) -> f64 {
        self.inner.penalty_weight
    }

    /// Penalized cost at binary `y` and continuous `x`.
    fn cost(&self, y: Vec<bool>, x: Vec<f64>) -> PyResult<f64> {
        mip::penalized_cost(&self.inner, &y, &x).map_err(value_err)
    }

    fn __repr__(&self) -> String {
        let m = &self.inner;
        format!(
            "MipInstance(total={}, investment={:?}, unit_cost={:?}, cost_reduction={:?}, quadratic={:?}, penalty_weight={})",
            m.total, m.investment, m.unit_cost, m.cost_reduction, m.quadratic, m.penalty_weight
        )
    }
}

fn decoded_dict<'py>(py: Python<'py>, d: &DecodedSolution) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    out.set_item("y", d.y.clone())?;
    out.set_item("x", d.x.clone())?;
    out.set_item("y_rounded", d.y_rounded.clone())?;
    out.set_item("cost", d.cost)?;
    out.set_item("nonnegative", d.nonnegative)?;
    Ok(out)
}

/// Exact minimizer over all binary sectors: `{"y", "x", "cost"}`.
#[pyfunction]
fn solve<'py>(py: Python<'py>, instance: &PyMipInstance) -> PyResult<Bound<'py, PyDict>> {
    let sol = oracle::solve(&instance.inner).map_err(value_err)?;
    let out = PyDict::new(py);
    out.set_item("y", sol.best.y.clone())?;
    out.set_item("x", sol.best.x.clone())?;
    out.set_item("cost", sol.best.cost)?;
    Ok(out)
}

/// Hybrid encoding of an instance, ready to be truncated and diagonalized or annealed.
#[pyclass(name = "Encoded", module = "hqa")]
struct PyEncoded {
    inner: mip::EncodedMip,
}

#[pyfunction]
#[pyo3(signature = (instance, transverse_field = 1.0, resonator_frequency = 1.0))]
fn encode(
    instance: &PyMipInstance,
    transverse_field: f64,
    resonator_frequency: f64,
) -> PyResult<PyEncoded> {
    let driver = MipDriver::uniform(instance.inner.lines(), transverse_field, resonator_frequency);
    let inner = mip::encode(&instance.inner, &driver).map_err(value_err)?;
    Ok(PyEncoded { inner })
}

#[pymethods]
impl PyEncoded {
    #[getter]
    fn lines(&self) -> usize {
        self.inner.lines()
    }

    /// Ground energy of the problem Hamiltonian at `truncation` and its decoded solution.
    fn ground_state<'py>(
        &self,
        py: Python<'py>,
        truncation: usize,
    ) -> PyResult<(f64, Bound<'py, PyDict>)> {
        let (e0, d) = py
            .detach(|| -> hqa_core::Result<_> {
                let space = self.inner.space(truncation)?;
                let hp = self.inner.problem_hamiltonian(&space)?;
                let (e0, psi) = ground_state(&hp)?;
                Ok((e0, mip::decode(&self.inner.instance, &psi)?))
            })
            .map_err(value_err)?;
        Ok((e0, decoded_dict(py, &d)?))
    }

    /// Integrate the linear schedule from the driver ground state.
    ///
    /// Returns the sampled observables (`t`, `H_P`, `y1..`, `x1..`, `norm`),
    /// the final decoded solution and the problem ground energy.
    #[pyo3(signature = (truncation, total_time, tol = 1e-8, samples = 101))]
    fn anneal<'py>(
        &self,
        py: Python<'py>,
        truncation: usize,
        total_time: f64,
        tol: f64,
        samples: usize,
    ) -> PyResult<Bound<'py, PyDict>> {
        let (traj, e0, d) = py
            .detach(|| -> hqa_core::Result<_> {
                let space = self.inner.space(truncation)?;
                let problem = self.inner.problem_hamiltonian(&space)?;
                let driver = self.inner.driver_hamiltonian(&space)?;
                let (e0, _) = ground_state(&problem)?;
                let (_, psi0) = ground_state(&driver)?;
                let observables = standard_observables(&problem)?;
                let mut run = AnnealRun::new(
                    total_time,
                    HamiltonianSource::Standard { driver, problem },
                    uniform_times(total_time, samples),
                    tol,
                )?
                .with_observables(observables);
                run.keep_states = false;
                let traj = evolve(&run, &psi0)?;
                let d = mip::decode(&self.inner.instance, &traj.final_state)?;
                Ok((traj, e0, d))
            })
            .map_err(value_err)?;
        let series = PyDict::new(py);
        series.set_item("t", traj.times.clone())?;
        for (name, values) in &traj.observables {
            series.set_item(name, values.clone())?;
        }
        let out = PyDict::new(py);
        out.set_item("series", series)?;
        out.set_item("ground_energy", e0)?;
        out.set_item("final", decoded_dict(py, &d)?)?;
        out.set_item("steps", traj.stats.accepted_steps)?;
        Ok(out)
    }
}

/// Names of the built-in experiment presets.
#[pyfunction]
fn presets() -> Vec<&'static str> {
    hqa_cli::PRESETS.to_vec()
}

/// Run a preset (optionally overriding truncation and tolerance) and return its summary.
///
/// With `out`, the artifacts (CSV tables, plots, summary.json) are also written there.
#[pyfunction]
#[pyo3(signature = (name, truncation = None, tol = None, out = None))]
fn run_preset<'py>(
    py: Python<'py>,
    name: &str,
    truncation: Option<usize>,
    tol: Option<f64>,
    out: Option<std::path::PathBuf>,
) -> PyResult<Bound<'py, PyAny>> {
    let mut cfg = hqa_cli::preset(name).map_err(value_err)?;
    if let Some(n) = truncation {
        cfg.truncation = n;
    }
    if let Some(t) = tol {
        cfg.integrator_tol = t;
    }
    cfg.validate().map_err(value_err)?;
    let summary = py
        .detach(|| -> anyhow::Result<String> {
            let report = match &out {
                Some(dir) => hqa_cli::run(&cfg, dir)?.0,
                None => hqa_cli::execute(&cfg)?,
            };
            Ok(report.summary(&cfg)?.to_string())
        })
        .map_err(runtime_err)?;
    py.import("json")?.call_method1("loads", (summary,))
}

#[pymodule]
fn hqa(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMipInstance>()?;
    m.add_class::<PyEncoded>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(encode, m)?)?;
    m.add_function(wrap_pyfunction!(presets, m)?)?;
    m.add_function(wrap_pyfunction!(run_preset, m)?)?;
    Ok(())
}
