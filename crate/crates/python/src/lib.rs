//! Python bindings for the `primcw` crate. Endomorphism indices are 0-based
//! here, with the `E⁺` basis first.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use primcw::harness::scenario::{parse_coeffs, parse_shape};
use primcw::harness::{gen_scenario, run_suite, Check, GenOptions, Scenario, ScenarioFile, SuiteOptions};
use primcw::oracle::power_equivalence;
use primcw::primitive::{
    a_hat, a_hat_log_series, bianchi_residual, boundary_partial, chern_character,
    closedness_residual, prim_power, transgress_between,
};
use primcw::syntax::parse_form;
use primcw::{Chart, EndForm, Form, Parity, PrimSuperConn, Rational, ScalarPair, SuperBundle, SuperConn, SymplecticForm};

fn err(e: primcw::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn chart(m: usize) -> PyResult<Chart> {
    Chart::new(m).map_err(err)
}

fn coeffs(items: &Bound<'_, PyAny>) -> PyResult<Vec<Rational>> {
    let mut text = Vec::new();
    for item in items.try_iter()? {
        text.push(item?.str()?.to_string());
    }
    parse_coeffs(&text).map_err(err)
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((r.to_string(),))
}

/// A differential form with polynomial coefficients on a chart of dimension `m`.
#[pyclass(name = "Form", module = "primcw_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyForm {
    inner: Form,
}

#[pymethods]
impl PyForm {
    #[new]
    fn new(m: usize, text: &str) -> PyResult<Self> {
        Ok(PyForm {
            inner: parse_form(chart(m)?, text).map_err(err)?,
        })
    }

    /// The standard symplectic form `Σ dx_{2i-1}∧dx_{2i}`.
    #[staticmethod]
    fn standard_symplectic(m: usize) -> PyResult<Self> {
        Ok(PyForm {
            inner: SymplecticForm::standard(chart(m)?).map_err(err)?.form().clone(),
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.chart().dim()
    }

    fn d(&self) -> Self {
        PyForm { inner: self.inner.d() }
    }

    fn wedge(&self, other: &PyForm) -> PyResult<Self> {
        Ok(PyForm {
            inner: self.inner.checked_wedge(&other.inner).map_err(err)?,
        })
    }

    fn degree_part(&self, k: usize) -> Self {
        PyForm {
            inner: self.inner.degree_part(k),
        }
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn __add__(&self, other: &PyForm) -> PyResult<Self> {
        self.inner.chart().check(other.inner.chart()).map_err(err)?;
        Ok(PyForm {
            inner: &self.inner + &other.inner,
        })
    }

    fn __sub__(&self, other: &PyForm) -> PyResult<Self> {
        self.inner.chart().check(other.inner.chart()).map_err(err)?;
        Ok(PyForm {
            inner: &self.inner - &other.inner,
        })
    }

    fn __neg__(&self) -> Self {
        PyForm { inner: -&self.inner }
    }

    fn __eq__(&self, other: &PyForm) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Form({}, {:?})", self.dim(), self.inner.to_string())
    }
}

/// An End(E)-valued form on the superbundle with ranks `(r_plus, r_minus)`.
#[pyclass(name = "EndForm", module = "primcw_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyEndForm {
    inner: EndForm,
}

#[pymethods]
impl PyEndForm {
    /// `entries` is a list of `(row, col, form text)`.
    #[new]
    #[pyo3(signature = (r_plus, r_minus, m, entries = Vec::new()))]
    fn new(r_plus: usize, r_minus: usize, m: usize, entries: Vec<(usize, usize, String)>) -> PyResult<Self> {
        let e = SuperBundle::new(r_plus, r_minus).map_err(err)?;
        let c = chart(m)?;
        let mut out = EndForm::zero(e, c);
        for (r, col, text) in entries {
            let f = parse_form(c, &text).map_err(err)?;
            out += &EndForm::entry(e, r, col, &f).map_err(err)?;
        }
        Ok(PyEndForm { inner: out })
    }

    #[staticmethod]
    fn identity(r_plus: usize, r_minus: usize, m: usize) -> PyResult<Self> {
        let e = SuperBundle::new(r_plus, r_minus).map_err(err)?;
        Ok(PyEndForm {
            inner: EndForm::identity(e, chart(m)?),
        })
    }

    /// Composition with the Koszul sign.
    fn mul(&self, other: &PyEndForm) -> PyResult<Self> {
        Ok(PyEndForm {
            inner: self.inner.checked_mul(&other.inner).map_err(err)?,
        })
    }

    fn supertrace(&self) -> PyForm {
        PyForm {
            inner: self.inner.supertrace(),
        }
    }

    /// `"even"`, `"odd"` or `None` for a mixed element.
    fn parity(&self) -> Option<&'static str> {
        self.inner.parity().map(Parity::name)
    }

    fn entry(&self, row: usize, col: usize) -> PyForm {
        PyForm {
            inner: self.inner.form_at(row, col),
        }
    }

    fn entries(&self) -> Vec<(usize, usize, String)> {
        self.inner
            .entries()
            .into_iter()
            .map(|(r, c, f)| (r, c, f.to_string()))
            .collect()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn __add__(&self, other: &PyEndForm) -> PyResult<Self> {
        self.compatible(other)?;
        Ok(PyEndForm {
            inner: &self.inner + &other.inner,
        })
    }

    fn __sub__(&self, other: &PyEndForm) -> PyResult<Self> {
        self.compatible(other)?;
        Ok(PyEndForm {
            inner: &self.inner - &other.inner,
        })
    }

    fn __eq__(&self, other: &PyEndForm) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("EndForm({})", self.inner)
    }
}

impl PyEndForm {
    fn compatible(&self, other: &PyEndForm) -> PyResult<()> {
        self.inner.bundle().check(other.inner.bundle()).map_err(err)?;
        self.inner.chart().check(other.inner.chart()).map_err(err)
    }
}

/// A pair `(α, β)` of scalar forms.
#[pyclass(name = "ScalarPair", module = "primcw_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyScalarPair {
    inner: ScalarPair,
}

#[pymethods]
impl PyScalarPair {
    #[new]
    fn new(first: &PyForm, second: &PyForm) -> PyResult<Self> {
        Ok(PyScalarPair {
            inner: ScalarPair::new(first.inner.clone(), second.inner.clone()).map_err(err)?,
        })
    }

    #[getter]
    fn first(&self) -> PyForm {
        PyForm {
            inner: self.inner.first.clone(),
        }
    }

    #[getter]
    fn second(&self) -> PyForm {
        PyForm {
            inner: self.inner.second.clone(),
        }
    }

    /// `∂(α, β) = (dα + ω∧β, -dβ)`.
    fn boundary(&self, omega: &PyForm) -> PyResult<Self> {
        let w = SymplecticForm::new(omega.inner.clone()).map_err(err)?;
        Ok(PyScalarPair {
            inner: boundary_partial(&self.inner, &w).map_err(err)?,
        })
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn __eq__(&self, other: &PyScalarPair) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        format!("({}, {})", self.inner.first, self.inner.second)
    }

    fn __repr__(&self) -> String {
        format!("ScalarPair({:?}, {:?})", self.inner.first.to_string(), self.inner.second.to_string())
    }
}

fn pair(p: ScalarPair) -> PyScalarPair {
    PyScalarPair { inner: p }
}

/// A primitive superconnection `(A = d + θ, B, ω)`.
#[pyclass(name = "PrimSuperConn", module = "primcw_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPrimSuperConn {
    inner: PrimSuperConn,
}

#[pymethods]
impl PyPrimSuperConn {
    /// `omega` defaults to the standard symplectic form.
    #[new]
    #[pyo3(signature = (theta, b, omega = None, koszul = false))]
    fn new(theta: &PyEndForm, b: &PyEndForm, omega: Option<&PyForm>, koszul: bool) -> PyResult<Self> {
        let c = theta.inner.chart();
        let w = match omega {
            Some(w) => SymplecticForm::new(w.inner.clone()),
            None => SymplecticForm::standard(c),
        }
        .map_err(err)?;
        let conn = if koszul {
            SuperConn::koszul(theta.inner.clone())
        } else {
            SuperConn::new(theta.inner.clone())
        }
        .map_err(err)?;
        Ok(PyPrimSuperConn {
            inner: PrimSuperConn::new(conn, b.inner.clone(), w).map_err(err)?,
        })
    }

    /// Loads the first endpoint of a scenario file.
    #[staticmethod]
    fn from_scenario(path: &str) -> PyResult<Self> {
        let s = Scenario::read(std::path::Path::new(path)).map_err(err)?;
        Ok(PyPrimSuperConn { inner: s.p0 })
    }

    /// `𝔸^{2k}` as `(first, second)`.
    fn power(&self, k: usize) -> PyResult<(PyEndForm, PyEndForm)> {
        let (a, b) = prim_power(&self.inner, k).map_err(err)?.into_parts();
        Ok((PyEndForm { inner: a }, PyEndForm { inner: b }))
    }

    /// Number of terms in `⟦𝔸, 𝔸^{2k}⟧`.
    fn bianchi_residual_terms(&self, k: usize) -> PyResult<usize> {
        Ok(bianchi_residual(&self.inner, k).map_err(err)?.term_count())
    }

    /// `∂ Str f(𝔸²)` for coefficients `f_0, f_1, ...` (ints, strings or Fractions).
    fn closedness_residual(&self, f: &Bound<'_, PyAny>) -> PyResult<PyScalarPair> {
        Ok(pair(closedness_residual(&coeffs(f)?, &self.inner).map_err(err)?))
    }

    fn chern_character(&self) -> PyResult<PyScalarPair> {
        Ok(pair(chern_character(&self.inner).map_err(err)?))
    }

    fn a_hat(&self) -> PyResult<PyScalarPair> {
        Ok(pair(a_hat(&self.inner).map_err(err)?))
    }

    #[pyo3(signature = (k, samples = 10, seed = 0))]
    fn power_equivalence(&self, k: usize, samples: usize, seed: u64) -> PyResult<bool> {
        power_equivalence(&self.inner, k, samples, seed).map_err(err)
    }
}

/// `(Str f(𝔸₁²) - Str f(𝔸₀²), ∂ ∫₀¹ ...)` along the affine family.
#[pyfunction]
fn transgress(
    f: &Bound<'_, PyAny>,
    p0: &PyPrimSuperConn,
    p1: &PyPrimSuperConn,
) -> PyResult<(PyScalarPair, PyScalarPair)> {
    let (l, r) = transgress_between(&coeffs(f)?, &p0.inner, &p1.inner).map_err(err)?;
    Ok((pair(l), pair(r)))
}

/// Coefficients of `½ ln((z/2)/sinh(z/2))` up to `z^order` as Fractions.
#[pyfunction]
fn a_hat_series<'py>(py: Python<'py>, order: usize) -> PyResult<Vec<Bound<'py, PyAny>>> {
    let s = a_hat_log_series(order).map_err(err)?;
    s.coeffs().iter().map(|c| fraction(py, c)).collect()
}

/// A reproducible random scenario as JSON text.
#[pyfunction]
#[pyo3(signature = (m, r_plus, r_minus, seed, shape = "general", endpoint = false))]
fn generate_scenario(m: usize, r_plus: usize, r_minus: usize, seed: u64, shape: &str, endpoint: bool) -> PyResult<String> {
    let mut o = GenOptions::new(m, (r_plus, r_minus), seed);
    o.shape = parse_shape(shape).map_err(err)?;
    o.endpoint = endpoint;
    Ok(gen_scenario(&o).map_err(err)?.to_json())
}

/// Runs checks on a scenario given as JSON text and returns the report lines.
#[pyfunction]
#[pyo3(signature = (scenario_json, checks = "all", seed = None))]
fn verify(scenario_json: &str, checks: &str, seed: Option<u64>) -> PyResult<Vec<String>> {
    let s = ScenarioFile::from_json(scenario_json).and_then(ScenarioFile::load).map_err(err)?;
    let opts = SuiteOptions {
        checks: Check::parse_list(checks).map_err(err)?,
        seed,
        timing: false,
        ..SuiteOptions::default()
    };
    let report = run_suite(&[s], &opts);
    Ok(report.to_jsonl().lines().map(str::to_string).collect())
}

#[pymodule]
fn primcw_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyForm>()?;
    m.add_class::<PyEndForm>()?;
    m.add_class::<PyScalarPair>()?;
    m.add_class::<PyPrimSuperConn>()?;
    m.add_function(wrap_pyfunction!(transgress, m)?)?;
    m.add_function(wrap_pyfunction!(a_hat_series, m)?)?;
    m.add_function(wrap_pyfunction!(generate_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
