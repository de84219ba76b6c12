//! Python bindings for the `zsnft` scattering library.

#![allow(non_snake_case)]

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use zsnft::fastlayer::{fast_scatter, MobiusMap, Targets};
use zsnft::propagator::{self, PotentialGrid, Prepared, ScatteringData};
use zsnft::schemes::SchemeKind;
use zsnft::signals::{self, SignalSpec};
use zsnft::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(_) | Error::Reference(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn scheme(name: &str) -> PyResult<SchemeKind> {
    name.parse().map_err(to_py)
}

fn mobius(kind: SchemeKind, h: Option<f64>) -> PyResult<MobiusMap> {
    match h {
        Some(h) => MobiusMap::new(h).map_err(to_py),
        None => MobiusMap::default_for(kind).ok_or_else(|| to_py(Error::UnsupportedFastScheme(kind.name()))),
    }
}

/// Uniformly sampled potential on `[-L, L]`.
#[pyclass(name = "Potential", frozen)]
struct PyPotential {
    grid: PotentialGrid,
}

#[pymethods]
impl PyPotential {
    #[new]
    #[pyo3(signature = (samples, L, sigma = 1.0))]
    fn new(samples: Vec<Complex64>, L: f64, sigma: f64) -> PyResult<Self> {
        Ok(Self { grid: PotentialGrid::symmetric(samples, L, sigma).map_err(to_py)? })
    }

    /// Built-in signal: "chirped_sech", "sech" or "rectangle".
    #[staticmethod]
    #[pyo3(signature = (kind = "chirped_sech", A = 5.2, C = 4.0, L = 32.0, M = 4096, sigma = 1.0))]
    fn signal(kind: &str, A: f64, C: f64, L: f64, M: usize, sigma: f64) -> PyResult<Self> {
        let spec = SignalSpec {
            kind: kind.parse().map_err(to_py)?,
            amplitude: A,
            chirp: C,
            l: L,
            m: M,
            sigma,
            path: None,
        };
        Ok(Self { grid: signals::generate(&spec).map_err(to_py)? })
    }

    /// Potential from a `t,re_q,im_q` CSV file.
    #[staticmethod]
    #[pyo3(signature = (path, sigma = 1.0))]
    fn from_file(path: std::path::PathBuf, sigma: f64) -> PyResult<Self> {
        Ok(Self { grid: signals::load_file(&path, sigma).map_err(to_py)? })
    }

    #[getter]
    fn samples(&self) -> Vec<Complex64> {
        self.grid.samples().to_vec()
    }

    #[getter]
    fn t(&self) -> Vec<f64> {
        (0..=self.grid.m()).map(|n| self.grid.t(n)).collect()
    }

    #[getter]
    fn tau(&self) -> f64 {
        self.grid.tau()
    }

    #[getter]
    fn M(&self) -> usize {
        self.grid.m()
    }

    #[getter]
    fn sigma(&self) -> f64 {
        self.grid.sigma()
    }

    fn __repr__(&self) -> String {
        format!(
            "Potential(M={}, t=[{}, {}], sigma={})",
            self.grid.m(),
            self.grid.t_first(),
            self.grid.t_last(),
            self.grid.sigma()
        )
    }
}

/// Continuous spectrum on a list of real `xi`.
#[pyclass(name = "Spectrum", frozen, get_all)]
struct PySpectrum {
    xi: Vec<f64>,
    a: Vec<Complex64>,
    b: Vec<Complex64>,
    r: Vec<Complex64>,
    H: Vec<f64>,
    E_c: f64,
}

impl From<ScatteringData> for PySpectrum {
    fn from(d: ScatteringData) -> Self {
        Self { xi: d.xi, a: d.a, b: d.b, r: d.r, H: d.h, E_c: d.e_c }
    }
}

#[pymethods]
impl PySpectrum {
    fn __len__(&self) -> usize {
        self.xi.len()
    }
}

/// Norming data at a discrete eigenvalue.
#[pyclass(name = "PhaseCoefficient", frozen, get_all)]
struct PyPhaseCoefficient {
    zeta: Complex64,
    a: Complex64,
    a_prime: Complex64,
    b: Complex64,
    r: Complex64,
    residual: f64,
    ill_conditioned: bool,
}

/// Names of the available schemes.
#[pyfunction]
fn schemes() -> Vec<&'static str> {
    SchemeKind::ALL.iter().map(|k| k.name()).collect()
}

/// Continuous spectrum; `fast=True` uses the polynomial product form.
#[pyfunction]
#[pyo3(signature = (potential, scheme_name, xi, fast = false, h = None))]
fn scatter(
    py: Python<'_>,
    potential: &PyPotential,
    scheme_name: &str,
    xi: Vec<f64>,
    fast: bool,
    h: Option<f64>,
) -> PyResult<PySpectrum> {
    let kind = scheme(scheme_name)?;
    let grid = potential.grid.clone();
    let map = if fast { Some(mobius(kind, h)?) } else { None };
    let data = py.detach(move || match map {
        Some(map) => fast_scatter(&grid, kind, &map, &Targets::Points(xi)),
        None => Prepared::new(&grid, kind).and_then(|p| propagator::scatter_grid(&p, &xi)),
    });
    Ok(data.map_err(to_py)?.into())
}

/// Fast spectrum on the equispaced circle grid restricted to the window,
/// about `n` points.
#[pyfunction]
#[pyo3(signature = (potential, scheme_name, xi_min, xi_max, n, h = None))]
fn fast_window(
    py: Python<'_>,
    potential: &PyPotential,
    scheme_name: &str,
    xi_min: f64,
    xi_max: f64,
    n: usize,
    h: Option<f64>,
) -> PyResult<PySpectrum> {
    let kind = scheme(scheme_name)?;
    let map = mobius(kind, h)?;
    let grid = potential.grid.clone();
    let targets = Targets::window(xi_min, xi_max, n, grid.tau(), &map);
    Ok(py.detach(move || fast_scatter(&grid, kind, &map, &targets)).map_err(to_py)?.into())
}

/// `(a, b, a')` at a single complex `zeta`; `a'` is `None` unless requested.
#[pyfunction]
#[pyo3(signature = (potential, scheme_name, zeta, derivative = false))]
fn scatter_point(
    potential: &PyPotential,
    scheme_name: &str,
    zeta: Complex64,
    derivative: bool,
) -> PyResult<(Complex64, Complex64, Option<Complex64>)> {
    let prep = Prepared::new(&potential.grid, scheme(scheme_name)?).map_err(to_py)?;
    let s = propagator::scatter(&prep, zeta, derivative).map_err(to_py)?;
    Ok((s.a, s.b, s.a_prime))
}

/// `b`, `a'` and `r = b/a'` at an eigenvalue via the bidirectional scan.
#[pyfunction]
#[pyo3(signature = (potential, scheme_name, zeta, threshold = propagator::DEFAULT_RESIDUAL_THRESHOLD))]
fn phase_coefficient(
    potential: &PyPotential,
    scheme_name: &str,
    zeta: Complex64,
    threshold: f64,
) -> PyResult<PyPhaseCoefficient> {
    let prep = Prepared::new(&potential.grid, scheme(scheme_name)?).map_err(to_py)?;
    let p = propagator::phase_coefficient(&prep, zeta, threshold).map_err(to_py)?;
    Ok(PyPhaseCoefficient {
        zeta: p.zeta,
        a: p.a,
        a_prime: p.a_prime,
        b: p.b,
        r: p.r,
        residual: p.residual,
        ill_conditioned: p.ill_conditioned,
    })
}

/// Root-mean-square of the relative error.
#[pyfunction]
fn rmse(computed: Vec<Complex64>, exact: Vec<Complex64>) -> PyResult<f64> {
    if computed.len() != exact.len() {
        return Err(PyValueError::new_err("length mismatch"));
    }
    Ok(zsnft::metrics::rmse(&computed, &exact))
}

#[pymodule]
fn pyzsnft(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPotential>()?;
    m.add_class::<PySpectrum>()?;
    m.add_class::<PyPhaseCoefficient>()?;
    m.add_function(wrap_pyfunction!(schemes, m)?)?;
    m.add_function(wrap_pyfunction!(scatter, m)?)?;
    m.add_function(wrap_pyfunction!(fast_window, m)?)?;
    m.add_function(wrap_pyfunction!(scatter_point, m)?)?;
    m.add_function(wrap_pyfunction!(phase_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(rmse, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
