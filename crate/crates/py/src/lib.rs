//! Python bindings. Results with structure come back as JSON strings.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use gaplab::experiment::{run_experiment, verify_kernels, ExperimentConfig};
use gaplab::kernel::ginibre_kernel_scaled;
use gaplab::laws::{kth_gap_cdf, poisson_intensity, IntensityQuery, LimitLaw};
use gaplab::GapError;

fn to_py(e: GapError) -> PyErr {
    match e {
        GapError::InvalidArgument(_) | GapError::SchemaMismatch { .. } | GapError::Json(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn json<T: serde::Serialize>(v: &T) -> PyResult<String> {
    serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// Scaled Ginibre kernel `S_n(z, w)`.
#[pyfunction]
fn ginibre_kernel(z: Complex64, w: Complex64, n: usize) -> PyResult<Complex64> {
    Ok(ginibre_kernel_scaled(z, w, n).map_err(to_py)?.get())
}

/// `P(tau_k <= x)` for the law with exponent `q`.
#[pyfunction]
fn gap_cdf(q: u32, k: u32, x: f64) -> PyResult<f64> {
    let law = LimitLaw::new(q, k).map_err(to_py)?;
    kth_gap_cdf(&law, x).map_err(to_py)
}

/// Poisson intensity from a JSON query such as
/// `{"ensemble": "ginibre", "a": [[0, 1]], "region": {"shape": "plane"}}`.
#[pyfunction]
fn intensity(query: &str) -> PyResult<f64> {
    let q: IntensityQuery = serde_json::from_str(query).map_err(|e| PyValueError::new_err(e.to_string()))?;
    poisson_intensity(&q).map_err(to_py)
}

/// Runs an experiment from a JSON config and returns run metadata as JSON.
#[pyfunction]
#[pyo3(signature = (config, out_dir=None))]
fn run(py: Python<'_>, config: &str, out_dir: Option<std::path::PathBuf>) -> PyResult<String> {
    let cfg = ExperimentConfig::from_json(config).map_err(to_py)?;
    let result = py.allow_threads(|| run_experiment(&cfg, out_dir.as_deref()));
    json(&result.map_err(to_py)?.meta)
}

/// Deterministic kernel checks as JSON.
#[pyfunction]
fn verify(py: Python<'_>) -> PyResult<String> {
    json(&py.allow_threads(verify_kernels))
}

#[pymodule]
#[pyo3(name = "gaplab")]
fn gaplab_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(ginibre_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(gap_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(intensity, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
