//! Python bindings. Structured results cross the boundary as JSON text.

use num_rational::BigRational;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use superfock_core::algebra::{verify_algebra as verify, AlgebraKind};
use superfock_core::fock::{FockLayout, FockVector, LinearOp, TruncatedSpace};
use superfock_core::scalar::{parse_rational, ExactScalar};
use superfock_core::series::FracExp;
use superfock_core::twisted::{character_identity_check, MirrorTwistedModule};
use superfock_core::{cli, delta, suites, twisted, vosa};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rational(s: &str) -> PyResult<BigRational> {
    parse_rational(s).map_err(value_err)
}

fn json_text(v: impl serde::Serialize) -> String {
    serde_json::to_string(&v).expect("json")
}

/// An element of ℚ(i, √2), written `a + b·i + c·√2 + d·i√2`.
#[pyclass(name = "Scalar", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyScalar(ExactScalar);

#[pymethods]
impl PyScalar {
    #[new]
    #[pyo3(signature = (a = "0", b = "0", c = "0", d = "0"))]
    fn new(a: &str, b: &str, c: &str, d: &str) -> PyResult<Self> {
        Ok(PyScalar(ExactScalar::new(rational(a)?, rational(b)?, rational(c)?, rational(d)?)))
    }

    #[staticmethod]
    fn i() -> Self {
        PyScalar(ExactScalar::i())
    }

    #[staticmethod]
    fn sqrt2() -> Self {
        PyScalar(ExactScalar::sqrt2())
    }

    fn components(&self) -> Vec<String> {
        self.0.components().iter().map(|r| r.to_string()).collect()
    }

    fn inv(&self) -> PyResult<Self> {
        self.0.inv().map(PyScalar).map_err(value_err)
    }

    fn __add__(&self, o: &Self) -> Self {
        PyScalar(self.0.clone() + o.0.clone())
    }

    fn __sub__(&self, o: &Self) -> Self {
        PyScalar(self.0.clone() - o.0.clone())
    }

    fn __mul__(&self, o: &Self) -> Self {
        PyScalar(self.0.clone() * o.0.clone())
    }

    fn __truediv__(&self, o: &Self) -> PyResult<Self> {
        self.0.div(&o.0).map(PyScalar).map_err(value_err)
    }

    fn __neg__(&self) -> Self {
        PyScalar(-&self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Scalar({})", self.0)
    }
}

/// A truncated series in `q` or `x` with exact coefficients.
#[pyclass(name = "Series", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PySeries(superfock_core::Series);

#[pymethods]
impl PySeries {
    fn terms(&self) -> Vec<(String, PyScalar)> {
        self.0.terms().iter().map(|(e, c)| (e.to_string(), PyScalar(c.clone()))).collect()
    }

    fn coeff(&self, exp: &str) -> PyResult<PyScalar> {
        Ok(PyScalar(self.0.coeff(FracExp::parse(exp).map_err(value_err)?)))
    }

    fn truncation(&self) -> String {
        self.0.truncation().to_string()
    }

    fn valuation(&self) -> String {
        self.0.valuation().to_string()
    }

    fn dilate(&self, m: i64) -> Self {
        PySeries(self.0.dilate(m))
    }

    fn to_json(&self) -> String {
        json_text(self.0.to_json())
    }

    fn __repr__(&self) -> String {
        format!("Series({})", self.to_json())
    }
}

/// A weight-truncated Fock space: `boson`, `fermion-ns`, `fermion-r` or `vosa`.
#[pyclass(name = "FockSpace", frozen)]
struct PyFockSpace(TruncatedSpace);

#[pymethods]
impl PyFockSpace {
    #[new]
    #[pyo3(signature = (kind, truncation, ground_weight = "0"))]
    fn new(kind: &str, truncation: &str, ground_weight: &str) -> PyResult<Self> {
        let layout = match kind {
            "boson" => FockLayout::boson(),
            "fermion-ns" => FockLayout::fermion_ns(),
            "fermion-r" => FockLayout::fermion_r(),
            "vosa" => FockLayout::vosa(),
            "ramond" => FockLayout::ramond(),
            _ => return Err(value_err(format!("unknown space {kind:?}"))),
        };
        Ok(PyFockSpace(TruncatedSpace::new(layout, rational(ground_weight)?, rational(truncation)?)))
    }

    fn basis(&self) -> Vec<String> {
        self.0.basis().iter().map(|m| self.0.layout().format_monomial(m)).collect()
    }

    fn layer_dimensions(&self) -> Vec<(String, usize)> {
        self.0.layer_dimensions().into_iter().map(|(w, d)| (w.to_string(), d)).collect()
    }

    fn dump(&self) -> String {
        self.0.dump()
    }

    /// Apply the mode of `species` with index `index` to a basis state.
    fn mode_apply(&self, species: usize, index: &str, state: &str) -> PyResult<String> {
        let layout = self.0.layout();
        let m = layout.parse_monomial(state).map_err(value_err)?;
        let n = FracExp::parse(index).map_err(value_err)?;
        let v = self.0.mode_apply(species, n, &m).map_err(value_err)?;
        Ok(layout.format_vector(&v))
    }
}

/// The free-field N=1 vertex operator superalgebra `V`.
#[pyclass(name = "Vosa", frozen)]
struct PyVosa(vosa::VosaStructure);

#[pymethods]
impl PyVosa {
    #[new]
    fn new() -> Self {
        PyVosa(vosa::VosaStructure::free_field())
    }

    fn central_charge(&self) -> String {
        self.0.central_charge().to_string()
    }

    fn omega(&self) -> String {
        self.0.layout().format_vector(self.0.omega())
    }

    fn tau(&self) -> String {
        self.0.layout().format_vector(self.0.tau())
    }

    /// `v_n w` for basis states `v` and `w`.
    fn mode(&self, v: &str, n: &str, w: &str) -> PyResult<String> {
        let layout = self.0.layout();
        let v = FockVector::basis(layout.parse_monomial(v).map_err(value_err)?);
        let w = layout.parse_monomial(w).map_err(value_err)?;
        let op = self.0.vertex_mode(&v, FracExp::parse(n).map_err(value_err)?).map_err(value_err)?;
        Ok(layout.format_vector(&op.apply_monomial(&w)))
    }

    fn verify_jacobi(&self, window: i64, max_weight: i64) -> String {
        json_text(self.0.verify_generator_jacobi(window, 2 * max_weight).to_json())
    }

    fn verify_n1(&self, window: i64, max_weight: i64) -> String {
        json_text(self.0.n1_structure(window, 2 * max_weight).to_json())
    }
}

/// The parity-twisted module `M_σ` through a given level above the ground.
#[pyclass(name = "SigmaModule", frozen)]
struct PySigmaModule(twisted::SigmaModule);

#[pymethods]
impl PySigmaModule {
    #[new]
    fn new(max_level: i64) -> PyResult<Self> {
        twisted::SigmaModule::new(max_level).map(PySigmaModule).map_err(value_err)
    }

    fn ground_weight(&self) -> String {
        self.0.ground_weight().to_string()
    }

    fn basis(&self) -> Vec<String> {
        self.0.space().basis().iter().map(|m| self.0.layout().format_monomial(m)).collect()
    }

    /// `v^σ_n w` for a basis state `v` of `V` and a basis state `w` of `M_σ`.
    fn mode(&self, v: &str, n: &str, w: &str) -> PyResult<String> {
        let v = FockVector::basis(self.0.vosa().layout().parse_monomial(v).map_err(value_err)?);
        let w = self.0.layout().parse_monomial(w).map_err(value_err)?;
        let op = self
            .0
            .sigma_twisted_mode(&v, FracExp::parse(n).map_err(value_err)?)
            .map_err(value_err)?;
        Ok(self.0.layout().format_vector(&op.apply_monomial(&w)))
    }

    fn character(&self) -> PyResult<PySeries> {
        self.0.character().map(PySeries).map_err(value_err)
    }

    fn verify_virasoro(&self, window: i64, max_level: i64) -> String {
        json_text(self.0.verify_virasoro(window, max_level).to_json())
    }

    fn verify_ramond(&self, window: i64, max_level: i64) -> String {
        json_text(self.0.verify_ramond(window, max_level).to_json())
    }
}

/// The mirror-twisted module of `V⊗V`, on the space of `M_σ`.
#[pyclass(name = "MirrorTwistedModule", frozen)]
struct PyMirrorTwisted(MirrorTwistedModule);

#[pymethods]
impl PyMirrorTwisted {
    #[new]
    fn new(max_level: i64) -> PyResult<Self> {
        suites::build_module(max_level, None).map(PyMirrorTwisted).map_err(PyRuntimeError::new_err)
    }

    fn ground_l0(&self) -> String {
        self.0.ground_l0().to_string()
    }

    fn character(&self) -> PyResult<PySeries> {
        self.0.character().map(PySeries).map_err(value_err)
    }

    fn calibration(&self) -> String {
        json_text(self.0.calibration().to_json())
    }

    fn verify_relations(&self, window: i64, max_weight: i64) -> String {
        json_text(self.0.verify_relations(window, 2 * max_weight).to_json())
    }

    fn character_identity(&self) -> PyResult<String> {
        character_identity_check(&self.0).map(|r| json_text(r.to_json())).map_err(value_err)
    }
}

#[pyfunction]
fn delta_coefficients(k: i64, terms: usize) -> Vec<String> {
    delta::delta_coefficients(k, terms).a.iter().map(|a| a.to_string()).collect()
}

#[pyfunction]
fn delta_residual(k: i64, terms: usize, order: usize) -> PyResult<PySeries> {
    delta::verify_delta_equation(k, terms, order).map(PySeries).map_err(value_err)
}

#[pyfunction]
fn verify_algebra(name: &str, window: i64) -> PyResult<String> {
    let kind = AlgebraKind::parse(name).ok_or_else(|| value_err(format!("unknown algebra {name:?}")))?;
    Ok(json_text(verify(&kind, window).to_json()))
}

#[pyfunction]
#[pyo3(signature = (window = 2, max_weight = 2))]
fn calibrate_n2(window: i64, max_weight: i64) -> PyResult<String> {
    vosa::TensorVosa::new()
        .calibrate_n2(window, 2 * max_weight)
        .map(|c| json_text(c.to_json()))
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// Run the command-line front end in-process; returns `(exit_code, output)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String) {
    let out = cli::run_args(std::iter::once("superfock".to_string()).chain(args));
    (out.code, out.output)
}

#[pymodule]
fn superfock(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScalar>()?;
    m.add_class::<PySeries>()?;
    m.add_class::<PyFockSpace>()?;
    m.add_class::<PyVosa>()?;
    m.add_class::<PySigmaModule>()?;
    m.add_class::<PyMirrorTwisted>()?;
    m.add_function(wrap_pyfunction!(delta_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(delta_residual, m)?)?;
    m.add_function(wrap_pyfunction!(verify_algebra, m)?)?;
    m.add_function(wrap_pyfunction!(calibrate_n2, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
