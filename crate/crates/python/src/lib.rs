//! Python bindings: parameter types, samplers, estimators, asymptotic
//! covariances, moment catalogs and simulation sweeps.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use momentype::avar;
use momentype::estimators::{self, Method, SolverConfig};
use momentype::model::{self, Family, RngSpec, SampleMatrix};
use momentype::moments;
use momentype::montecarlo::{self, SweepConfig};
use momentype::specialfn::{self, PolyOrder};

fn err(e: momentype::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn family(s: &str) -> PyResult<Family> {
    s.parse().map_err(err)
}

fn method(s: &str) -> PyResult<Method> {
    s.parse().map_err(err)
}

fn rows(sample: &SampleMatrix) -> Vec<Vec<f64>> {
    sample.rows().map(<[f64]>::to_vec).collect()
}

fn matrix(family: Family, data: Vec<Vec<f64>>, renormalize: bool) -> PyResult<SampleMatrix> {
    let k = data.first().map_or(0, Vec::len);
    if data.iter().any(|r| r.len() != k) {
        return Err(PyValueError::new_err("rows have different lengths"));
    }
    let flat = data.concat();
    match (family, renormalize) {
        (Family::Dirichlet, true) => SampleMatrix::dirichlet_renormalized(k, flat),
        (Family::MGamma, true) => return Err(PyValueError::new_err("renormalize applies to Dirichlet samples only")),
        _ => SampleMatrix::new(family, k, flat),
    }
    .map_err(err)
}

#[pyclass(name = "DirichletParams", frozen)]
struct PyDirichlet(model::DirichletParams);

#[pymethods]
impl PyDirichlet {
    #[new]
    fn new(alpha: Vec<f64>) -> PyResult<Self> {
        model::DirichletParams::new(alpha).map(Self).map_err(err)
    }

    #[getter]
    fn alpha(&self) -> Vec<f64> {
        self.0.alpha().to_vec()
    }

    #[getter]
    fn alpha0(&self) -> f64 {
        self.0.alpha0()
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k()
    }

    #[pyo3(signature = (n, seed, stream = 0))]
    fn sample(&self, py: Python<'_>, n: usize, seed: u64, stream: u64) -> PyResult<Vec<Vec<f64>>> {
        let s = py.detach(|| model::sample_dirichlet(&self.0, n, RngSpec::new(seed, stream))).map_err(err)?;
        Ok(rows(&s))
    }

    fn log_density(&self, x: Vec<f64>) -> PyResult<f64> {
        model::log_density_dirichlet(&self.0, &x).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("DirichletParams(alpha={:?})", self.0.alpha())
    }
}

#[pyclass(name = "MGammaParams", frozen)]
struct PyMGamma(model::MGammaParams);

#[pymethods]
impl PyMGamma {
    #[new]
    fn new(alpha: Vec<f64>, beta: f64) -> PyResult<Self> {
        model::MGammaParams::new(alpha, beta).map(Self).map_err(err)
    }

    #[getter]
    fn alpha(&self) -> Vec<f64> {
        self.0.alpha().to_vec()
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.0.beta()
    }

    #[getter]
    fn alpha0(&self) -> f64 {
        self.0.alpha0()
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k()
    }

    #[pyo3(signature = (n, seed, stream = 0))]
    fn sample(&self, py: Python<'_>, n: usize, seed: u64, stream: u64) -> PyResult<Vec<Vec<f64>>> {
        let s = py.detach(|| model::sample_mgamma(&self.0, n, RngSpec::new(seed, stream))).map_err(err)?;
        Ok(rows(&s))
    }

    fn log_density(&self, x: Vec<f64>) -> PyResult<f64> {
        model::log_density_mgamma(&self.0, &x).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("MGammaParams(alpha={:?}, beta={})", self.0.alpha(), self.0.beta())
    }
}

#[pyclass(name = "EstimateReport", frozen, get_all)]
struct PyReport {
    family: String,
    method: String,
    estimate: Option<Vec<f64>>,
    exists: bool,
    reason: Option<String>,
    iterations: Option<usize>,
    score_norm: Option<f64>,
    n: usize,
}

#[pymethods]
impl PyReport {
    fn __repr__(&self) -> String {
        format!(
            "EstimateReport(method={}, estimate={:?}, exists={}, n={})",
            self.method, self.estimate, self.exists, self.n
        )
    }
}

/// Fits `method` to rows of observations.
#[pyfunction]
#[pyo3(signature = (family, method, data, renormalize = false, tolerance = 1e-10, max_iter = 100))]
fn fit(
    py: Python<'_>,
    family: &str,
    method: &str,
    data: Vec<Vec<f64>>,
    renormalize: bool,
    tolerance: f64,
    max_iter: usize,
) -> PyResult<PyReport> {
    let sample = matrix(self::family(family)?, data, renormalize)?;
    let method = self::method(method)?;
    let solver = SolverConfig { tolerance, max_iter, ..SolverConfig::default() };
    solver.validate().map_err(err)?;
    let r = py.detach(|| estimators::estimate(method, &sample, &solver)).map_err(err)?;
    Ok(PyReport {
        family: r.family.to_string(),
        method: r.method.to_string(),
        estimate: r.estimate,
        exists: r.exists,
        reason: r.reason.map(|f| f.to_string()),
        iterations: r.iterations,
        score_norm: r.score_norm,
        n: r.n,
    })
}

/// Asymptotic covariance matrix at `theta` (`α`, or `α` then `β`).
#[pyfunction]
fn asymptotic_covariance(family: &str, method: &str, theta: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
    let p = model::Params::from_vec(self::family(family)?, &theta).map_err(err)?;
    avar::avar(self::method(method)?, &p).map(|a| a.rows()).map_err(err)
}

/// Catalog entries as `(name, printed, derived)`.
#[pyfunction]
fn moment_catalog(family: &str, theta: Vec<f64>) -> PyResult<Vec<(String, Option<f64>, f64)>> {
    let p = model::Params::from_vec(self::family(family)?, &theta).map_err(err)?;
    let entries = moments::catalog(&p).map_err(err)?;
    Ok(entries.iter().map(|e| (e.name(), e.printed, e.derived)).collect())
}

/// Monte Carlo sweep; one dict per output row.
#[pyfunction]
#[pyo3(signature = (family, base, param_index, grid, ns, m, methods, seed = 0))]
#[allow(clippy::too_many_arguments)]
fn metric_sweep<'py>(
    py: Python<'py>,
    family: &str,
    base: Vec<f64>,
    param_index: usize,
    grid: Vec<f64>,
    ns: Vec<usize>,
    m: usize,
    methods: Vec<String>,
    seed: u64,
) -> PyResult<Vec<Bound<'py, pyo3::types::PyDict>>> {
    let config = SweepConfig {
        family: self::family(family)?,
        base,
        param_index,
        grid,
        ns,
        m,
        methods: methods.iter().map(|s| self::method(s)).collect::<PyResult<_>>()?,
        seed,
        solver: SolverConfig::default(),
    };
    let rows = py.detach(|| montecarlo::run_metric_sweep(&config)).map_err(err)?;
    rows.into_iter()
        .map(|r| {
            let d = pyo3::types::PyDict::new(py);
            d.set_item("family", r.family.to_string())?;
            d.set_item("estimator", r.estimator.to_string())?;
            d.set_item("param_index", r.param_index)?;
            d.set_item("sweep_value", r.sweep_value)?;
            d.set_item("n", r.n)?;
            d.set_item("m_effective", r.m_effective)?;
            d.set_item("failures", r.failures)?;
            d.set_item("bias", r.bias)?;
            d.set_item("variance", r.variance)?;
            d.set_item("rmse", r.rmse)?;
            Ok(d)
        })
        .collect()
}

#[pyfunction]
fn ln_gamma(x: f64) -> PyResult<f64> {
    specialfn::ln_gamma(x).map_err(err)
}

#[pyfunction]
fn digamma(x: f64) -> PyResult<f64> {
    specialfn::digamma(x).map_err(err)
}

#[pyfunction]
fn trigamma(x: f64) -> PyResult<f64> {
    specialfn::trigamma(x).map_err(err)
}

#[pyfunction]
fn polygamma(order: u32, x: f64) -> PyResult<f64> {
    specialfn::polygamma(PolyOrder(order), x).map_err(err)
}

/// Adds every class and function to `m`.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDirichlet>()?;
    m.add_class::<PyMGamma>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(fit, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotic_covariance, m)?)?;
    m.add_function(wrap_pyfunction!(moment_catalog, m)?)?;
    m.add_function(wrap_pyfunction!(metric_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(ln_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(digamma, m)?)?;
    m.add_function(wrap_pyfunction!(trigamma, m)?)?;
    m.add_function(wrap_pyfunction!(polygamma, m)?)?;
    Ok(())
}

#[pymodule]
fn momentype_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}
