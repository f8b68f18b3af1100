//! Python bindings: batch variance by algorithm name, the exact oracle,
//! mergeable streaming states, dataset generation and the t-test.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use varlab::harness::{generate as generate_data, DatasetSpec};
use varlab::inference::{self, FailureMode};
use varlab::oracle;
use varlab::parallel::{parallel_variance, plan_chunks};
use varlab::{AlgorithmId, ShiftPolicy, Summation, VarianceOptions};

create_exception!(pyvarlab, VarlabError, PyValueError);

fn err(e: varlab::Error) -> PyErr {
    VarlabError::new_err(e.to_string())
}

fn algorithm(name: &str) -> PyResult<AlgorithmId> {
    name.parse().map_err(err)
}

#[pyclass(frozen, get_all, skip_from_py_object, name = "VarianceResult")]
#[derive(Clone)]
struct PyVarianceResult {
    count: u64,
    mean: f64,
    sum_sq_dev: f64,
    sample_variance: f64,
    negative_clamped: bool,
    /// `None` when the variance is negative.
    stddev: Option<f64>,
}

impl From<varlab::VarianceResult> for PyVarianceResult {
    fn from(r: varlab::VarianceResult) -> Self {
        PyVarianceResult {
            count: r.count,
            mean: r.mean,
            sum_sq_dev: r.sum_sq_dev,
            sample_variance: r.sample_variance,
            negative_clamped: r.negative_clamped,
            stddev: r.stddev(),
        }
    }
}

#[pymethods]
impl PyVarianceResult {
    fn __repr__(&self) -> String {
        format!(
            "VarianceResult(count={}, mean={:?}, sum_sq_dev={:?}, sample_variance={:?}, negative_clamped={})",
            self.count,
            self.mean,
            self.sum_sq_dev,
            self.sample_variance,
            if self.negative_clamped { "True" } else { "False" }
        )
    }
}

/// Names accepted by `variance`.
#[pyfunction]
fn algorithms() -> Vec<&'static str> {
    AlgorithmId::ALL.iter().map(|a| a.as_str()).collect()
}

#[allow(clippy::too_many_arguments)]
#[pyfunction]
#[pyo3(signature = (
    data, algorithm="two-pass", *, clamp=false, compensated=false,
    shift_policy="prefix:1000", leaf_size=128, group_size=10, inner="updating-wwh", threads=1
))]
fn variance(
    py: Python<'_>,
    data: Vec<f64>,
    algorithm: &str,
    clamp: bool,
    compensated: bool,
    shift_policy: &str,
    leaf_size: usize,
    group_size: usize,
    inner: &str,
    threads: usize,
) -> PyResult<PyVarianceResult> {
    let id = self::algorithm(algorithm)?;
    let options = VarianceOptions {
        clamp_negative: clamp,
        summation: if compensated { Summation::Compensated } else { Summation::Naive },
        shift_policy: shift_policy.parse::<ShiftPolicy>().map_err(err)?,
        leaf_size,
        group_size,
        inner: self::algorithm(inner)?,
    };
    let result = py.detach(|| {
        if threads <= 1 {
            varlab::compute(id, &data, &options)
        } else {
            parallel_variance(&data, id, &plan_chunks(data.len(), threads), &options)
        }
    });
    result.map(Into::into).map_err(err)
}

/// Exact sample variance of the stored doubles as a `fractions.Fraction`.
#[pyfunction]
fn exact_variance<'py>(py: Python<'py>, data: Vec<f64>) -> PyResult<Bound<'py, PyAny>> {
    let v = oracle::exact_variance(&data).map_err(err)?;
    let fraction = py.import("fractions")?.getattr("Fraction")?;
    fraction.call1((v.numer().clone(), v.denom().clone()))
}

/// Correct decimal digits of `computed` against the exact variance of `data`.
#[pyfunction]
fn correct_digits(computed: f64, data: Vec<f64>) -> PyResult<f64> {
    let truth = oracle::exact_variance(&data).map_err(err)?;
    Ok(oracle::correct_digits(computed, &truth).digits)
}

/// Shifted-uniform dataset, reproducible from `(size, shift_exponent, seed)`.
#[pyfunction]
#[pyo3(signature = (size, shift_exponent=None, seed=42))]
fn generate(size: usize, shift_exponent: Option<i32>, seed: u64) -> Vec<f64> {
    generate_data(&DatasetSpec::new(size, shift_exponent, seed))
}

/// Two-tailed Student t critical value.
#[pyfunction]
fn t_quantile(alpha: f64, df: u64) -> PyResult<f64> {
    inference::t_quantile(alpha, df).map_err(err)
}

/// One-sample t-test with the variance taken from `algorithm`. `mu0`
/// defaults to the sample mean.
#[pyfunction]
#[pyo3(signature = (data, mu0=None, alpha=0.05, algorithm="two-pass", clamp=false))]
fn ttest<'py>(
    py: Python<'py>,
    data: Vec<f64>,
    mu0: Option<f64>,
    alpha: f64,
    algorithm: &str,
    clamp: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let options = VarianceOptions { clamp_negative: clamp, ..Default::default() };
    let r = varlab::compute(self::algorithm(algorithm)?, &data, &options).map_err(err)?;
    let stats = inference::summarize(&r).map_err(err)?;
    let t = inference::one_sample_ttest(&stats, mu0.unwrap_or(stats.mean), alpha).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("mean", stats.mean)?;
    out.set_item("variance", stats.variance)?;
    out.set_item("stderr", stats.stderr)?;
    out.set_item("t_statistic", t.t_statistic)?;
    out.set_item("critical_value", t.critical_value)?;
    out.set_item("reject", t.reject)?;
    out.set_item("acceptance_interval", t.acceptance_interval)?;
    out.set_item("acceptance_width", t.acceptance_width())?;
    out.set_item("loud_failure", t.failure_mode == FailureMode::LoudZeroStddev)?;
    Ok(out)
}

/// Textbook one-pass S₁/S₂ fraction bits for the data and each shift.
#[pyfunction]
fn mantissa_table<'py>(py: Python<'py>, data: Vec<f64>, shifts: Vec<i32>) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let rows = oracle::mantissa_table(&data, &shifts).map_err(err)?;
    rows.into_iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("shift_exponent", r.shift_exponent)?;
            d.set_item("s1_mantissa", &r.s1_mantissa_hex)?;
            d.set_item("s2_mantissa", &r.s2_mantissa_hex)?;
            d.set_item("s", r.s)?;
            d.set_item("variance", r.variance)?;
            Ok(d)
        })
        .collect()
}

/// Mergeable (count, total, S) state updated with Youngs-Cramer.
#[pyclass(skip_from_py_object, name = "PairState")]
#[derive(Clone, Default)]
struct PyPairState(varlab::PairState);

#[pymethods]
impl PyPairState {
    #[new]
    fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, x: f64) -> PyResult<()> {
        self.0.push(x).map_err(err)
    }

    fn extend(&mut self, xs: Vec<f64>) -> PyResult<()> {
        xs.into_iter().try_for_each(|x| self.0.push(x)).map_err(err)
    }

    fn merge(&self, other: &PyPairState) -> PyPairState {
        PyPairState(self.0.merge(&other.0))
    }

    fn result(&self) -> PyResult<PyVarianceResult> {
        self.0.finish().map(Into::into).map_err(err)
    }

    #[getter]
    fn count(&self) -> u64 {
        self.0.count
    }

    #[getter]
    fn total(&self) -> f64 {
        self.0.total
    }

    #[getter]
    fn s(&self) -> f64 {
        self.0.s
    }
}

/// Running (count, mean, S) state updated with Welford's recurrence.
#[pyclass(skip_from_py_object, name = "WelfordState")]
#[derive(Clone, Default)]
struct PyWelfordState(varlab::WelfordState);

#[pymethods]
impl PyWelfordState {
    #[new]
    fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, x: f64) -> PyResult<()> {
        self.0.push(x).map_err(err)
    }

    fn extend(&mut self, xs: Vec<f64>) -> PyResult<()> {
        xs.into_iter().try_for_each(|x| self.0.push(x)).map_err(err)
    }

    fn result(&self) -> PyResult<PyVarianceResult> {
        self.0.finish().map(Into::into).map_err(err)
    }

    #[getter]
    fn count(&self) -> u64 {
        self.0.count
    }

    #[getter]
    fn mean(&self) -> f64 {
        self.0.mean
    }

    #[getter]
    fn s(&self) -> f64 {
        self.0.s
    }
}

#[pymodule]
fn pyvarlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("VarlabError", m.py().get_type::<VarlabError>())?;
    m.add_class::<PyVarianceResult>()?;
    m.add_class::<PyPairState>()?;
    m.add_class::<PyWelfordState>()?;
    m.add_function(wrap_pyfunction!(algorithms, m)?)?;
    m.add_function(wrap_pyfunction!(variance, m)?)?;
    m.add_function(wrap_pyfunction!(exact_variance, m)?)?;
    m.add_function(wrap_pyfunction!(correct_digits, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(t_quantile, m)?)?;
    m.add_function(wrap_pyfunction!(ttest, m)?)?;
    m.add_function(wrap_pyfunction!(mantissa_table, m)?)?;
    Ok(())
}
