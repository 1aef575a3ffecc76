use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use fusion6j_core::builtin::{builtin, BUILTIN_NAMES};
use fusion6j_core::duality::{choose_mu, dimensions, MuPolicy};
use fusion6j_core::pivotal::fp_dimensions;
use fusion6j_core::report::{render_json, render_text, run, GaugeMode, Options, Report, Section};
use fusion6j_core::{io, CategoryData, CodualConvention, Exact, Field, Float, RootChoice, Scalar};

create_exception!(fusion6j, Fusion6jError, PyException);

fn err(e: fusion6j_core::Error) -> PyErr {
    Fusion6jError::new_err(e.to_string())
}

fn bad(msg: String) -> PyErr {
    Fusion6jError::new_err(msg)
}

enum Inner {
    Exact(CategoryData<Exact>),
    Float(CategoryData<Float>),
}

/// Runs `$body` with `$c` bound to the category of either backend.
macro_rules! with {
    ($inner:expr, $c:ident => $body:expr) => {
        match $inner {
            Inner::Exact($c) => $body,
            Inner::Float($c) => $body,
        }
    };
}

/// F-symbol data of a fusion category with one of two scalar backends.
#[pyclass(module = "fusion6j", frozen)]
struct Category {
    inner: Inner,
}

fn label<S: Scalar>(c: &CategoryData<S>, name: &str) -> PyResult<usize> {
    c.ring().label(name).ok_or_else(|| bad(format!("unknown label {name:?}")))
}

fn report_for<S: Scalar>(c: &CategoryData<S>, command: &str, mu: &str, gauge: &str, seed: u64) -> PyResult<Report> {
    let sections = Section::for_command(command).ok_or_else(|| bad(format!("unknown command {command:?}")))?;
    let mu = MuPolicy::parse(mu).filter(|m| *m != MuPolicy::UserSupplied).ok_or_else(|| bad(format!("mu must be 'ones' or 'balanced', got {mu:?}")))?;
    let gauge = GaugeMode::parse(gauge).ok_or_else(|| bad(format!("gauge must be 'raw' or 'eigen', got {gauge:?}")))?;
    Ok(run(c, &sections, &Options { mu, gauge, seed, pentagon_labels: None }))
}

fn dims_for<S: Scalar>(c: &CategoryData<S>, mu: &str) -> PyResult<Vec<(String, String, String)>> {
    let policy = MuPolicy::parse(mu).filter(|m| *m != MuPolicy::UserSupplied).ok_or_else(|| bad(format!("bad mu {mu:?}")))?;
    let mut rc = match S::BACKEND {
        fusion6j_core::Backend::Exact => RootChoice::new(Field::Tower, 0.0),
        fusion6j_core::Backend::Float => RootChoice::new(Field::C, c.tol),
    };
    let m = choose_mu(c, policy, &mut rc).map_err(err)?;
    let d = dimensions(c, &m).map_err(err)?;
    Ok(c.ring().labels().map(|i| (c.ring().name(i).to_string(), d.dim_l[i].to_string(), d.dim_r[i].to_string())).collect())
}

fn json_to_py(py: Python<'_>, text: &str) -> PyResult<Py<PyAny>> {
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

#[pymethods]
impl Category {
    /// Built-in data: "vec", "fib", "yanglee" or "pointed:Z<n>:<s>".
    #[staticmethod]
    #[pyo3(signature = (name, backend = "exact", b = None))]
    fn builtin(name: &str, backend: &str, b: Option<&str>) -> PyResult<Self> {
        let inner = match backend {
            "exact" => Inner::Exact(builtin(name, b).map_err(err)?),
            "float" => Inner::Float(builtin(name, b).map_err(err)?),
            _ => return Err(bad(format!("backend must be 'exact' or 'float', got {backend:?}"))),
        };
        Ok(Category { inner })
    }

    /// Reads a JSON category file.
    #[staticmethod]
    #[pyo3(signature = (path, backend = "exact"))]
    fn load(path: &str, backend: &str) -> PyResult<Self> {
        let inner = match backend {
            "exact" => Inner::Exact(io::load(path).map_err(err)?),
            "float" => Inner::Float(io::load(path).map_err(err)?),
            _ => return Err(bad(format!("backend must be 'exact' or 'float', got {backend:?}"))),
        };
        Ok(Category { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (text, backend = "exact"))]
    fn from_json(text: &str, backend: &str) -> PyResult<Self> {
        let inner = match backend {
            "exact" => Inner::Exact(io::from_str(text).map_err(err)?),
            "float" => Inner::Float(io::from_str(text).map_err(err)?),
            _ => return Err(bad(format!("backend must be 'exact' or 'float', got {backend:?}"))),
        };
        Ok(Category { inner })
    }

    fn to_json(&self) -> String {
        with!(&self.inner, c => io::to_string(c))
    }

    fn save(&self, path: &str) -> PyResult<()> {
        with!(&self.inner, c => io::save(c, path).map_err(err))
    }

    /// A float copy of exact data.
    fn to_float(&self) -> Self {
        let c = with!(&self.inner, c => c.to_float());
        Category { inner: Inner::Float(c) }
    }

    #[getter]
    fn name(&self) -> String {
        with!(&self.inner, c => c.name.clone())
    }

    #[getter]
    fn backend(&self) -> &'static str {
        match self.inner {
            Inner::Exact(_) => "exact",
            Inner::Float(_) => "float",
        }
    }

    #[getter]
    fn field(&self) -> String {
        with!(&self.inner, c => c.field().to_string())
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        with!(&self.inner, c => c.ring().names().to_vec())
    }

    #[getter]
    fn rank(&self) -> usize {
        with!(&self.inner, c => c.ring().rank())
    }

    fn dual(&self, i: &str) -> PyResult<String> {
        with!(&self.inner, c => Ok(c.ring().name(c.ring().dual(label(c, i)?)).to_string()))
    }

    /// Fusion multiplicity `N_{ij}^k`.
    fn n(&self, i: &str, j: &str, k: &str) -> PyResult<usize> {
        with!(&self.inner, c => Ok(c.ring().n(label(c, i)?, label(c, j)?, label(c, k)?)))
    }

    /// `F^{(ijk)l}_{(p,a,b),(q,c,d)}` as a string in the backend's scalar grammar.
    #[pyo3(signature = (i, j, k, l, p, q, a = 0, b = 0, c_ = 0, d = 0))]
    #[allow(clippy::too_many_arguments)]
    fn f(&self, i: &str, j: &str, k: &str, l: &str, p: &str, q: &str, a: usize, b: usize, c_: usize, d: usize) -> PyResult<String> {
        with!(&self.inner, c => {
            let [i, j, k, l, p, q] = [i, j, k, l, p, q].map(|x| label(c, x));
            Ok(c.f(i?, j?, k?, l?, (p?, a, b), (q?, c_, d)).to_string())
        })
    }

    /// `F°_i`.
    fn fo(&self, i: &str) -> PyResult<String> {
        with!(&self.inner, c => Ok(c.fo(label(c, i)?).to_string()))
    }

    /// `G°_i`.
    fn go(&self, i: &str) -> PyResult<String> {
        with!(&self.inner, c => Ok(c.go(label(c, i)?).to_string()))
    }

    /// `(label, dim_L, dim_R)` for every label.
    #[pyo3(signature = (mu = "balanced"))]
    fn dimensions(&self, mu: &str) -> PyResult<Vec<(String, String, String)>> {
        with!(&self.inner, c => dims_for(c, mu))
    }

    fn fp_dimensions(&self) -> PyResult<Vec<f64>> {
        with!(&self.inner, c => fp_dimensions(c.ring()).map(|t| t.dims).map_err(err))
    }

    /// `(passed, max_residual, equations)`.
    fn check_pentagon(&self) -> (bool, f64, usize) {
        with!(&self.inner, c => {
            let p = c.check_pentagon(None);
            (p.passed, p.max_residual, p.checked)
        })
    }

    /// Sets the codual convention: "unit" or "dimweighted".
    fn with_convention(&self, convention: &str) -> PyResult<Self> {
        let conv = CodualConvention::parse(convention).ok_or_else(|| bad(format!("bad convention {convention:?}")))?;
        Ok(Category {
            inner: match &self.inner {
                Inner::Exact(c) => Inner::Exact(c.clone().with_convention(conv)),
                Inner::Float(c) => Inner::Float(c.clone().with_convention(conv)),
            },
        })
    }

    /// Runs a pipeline command and returns the report as a dict.
    #[pyo3(signature = (command = "report", mu = "balanced", gauge = "eigen", seed = 0))]
    fn report(&self, py: Python<'_>, command: &str, mu: &str, gauge: &str, seed: u64) -> PyResult<Py<PyAny>> {
        let r = with!(&self.inner, c => report_for(c, command, mu, gauge, seed))?;
        json_to_py(py, &render_json(&r))
    }

    /// The text rendering of a pipeline command.
    #[pyo3(signature = (command = "report", mu = "balanced", gauge = "eigen", seed = 0))]
    fn report_text(&self, command: &str, mu: &str, gauge: &str, seed: u64) -> PyResult<String> {
        let r = with!(&self.inner, c => report_for(c, command, mu, gauge, seed))?;
        Ok(render_text(&r))
    }

    fn __repr__(&self) -> String {
        format!("Category(name={:?}, backend={:?}, field={:?}, labels={:?})", self.name(), self.backend(), self.field(), self.labels())
    }
}

#[pyfunction]
fn builtin_names() -> Vec<&'static str> {
    BUILTIN_NAMES.to_vec()
}

#[pymodule]
fn fusion6j(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Category>()?;
    m.add_function(wrap_pyfunction!(builtin_names, m)?)?;
    m.add("Fusion6jError", m.py().get_type::<Fusion6jError>())?;
    Ok(())
}
