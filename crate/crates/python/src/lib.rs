use num_rational::BigRational;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use pretzel_fal::classify::{self, PretzelFal};
use pretzel_fal::crushtacean::{build_pretzel_crushtacean, cdw_criterion, EmbeddedGraph};
use pretzel_fal::exactfield::{self, parse_rational, CycloElement, CyclotomicField};
use pretzel_fal::hypgeom::{self, BigReal, Geometry, DEFAULT_PRECISION};
use pretzel_fal::{report, tracefield};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn geometry(precision: usize) -> PyResult<Geometry> {
    Geometry::new(precision).map_err(err)
}

fn real(s: &str, precision: usize) -> PyResult<BigReal> {
    BigReal::parse(s, precision).map_err(err)
}

fn digits(x: &BigReal, precision: usize) -> String {
    x.to_decimal(hypgeom::decimal_digits(precision))
}

/// Element of the cyclotomic field ℚ(ζ_N).
#[pyclass(name = "CycloElement", module = "pretzel_fal", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyCyclo {
    inner: CycloElement,
}

#[pymethods]
impl PyCyclo {
    /// Coefficients are rational strings such as `"-3/4"`, lowest power first.
    #[new]
    fn new(modulus: u64, coefficients: Vec<String>) -> PyResult<Self> {
        let field = CyclotomicField::new(modulus).map_err(err)?;
        let coeffs: Vec<BigRational> = coefficients
            .iter()
            .map(|c| parse_rational(c))
            .collect::<Result<_, _>>()
            .map_err(err)?;
        let inner = CycloElement::from_coefficients(&field, &coeffs).map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn root_of_unity(modulus: u64, k: i64) -> PyResult<Self> {
        let field = CyclotomicField::new(modulus).map_err(err)?;
        Ok(Self {
            inner: CycloElement::root_of_unity(&field, k),
        })
    }

    #[getter]
    fn modulus(&self) -> u64 {
        self.inner.modulus()
    }

    /// Coefficients in the power basis, as rational strings.
    #[getter]
    fn coefficients(&self) -> Vec<String> {
        self.inner
            .coefficients()
            .iter()
            .map(exactfield::format_rational)
            .collect()
    }

    fn galois(&self, a: i64) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.galois(a).map_err(err)?,
        })
    }

    fn inverse(&self) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.inverse().map_err(err)?,
        })
    }

    fn embed(&self, level: u64) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.embed(level).map_err(err)?,
        })
    }

    fn minimal_polynomial(&self) -> String {
        exactfield::minimal_polynomial(&self.inner).render("x")
    }

    /// Residues `a` with `σ_a(x) = x`.
    fn stabilizer(&self) -> Vec<u64> {
        exactfield::stabilizer(&self.inner).members().to_vec()
    }

    fn to_complex(&self) -> (f64, f64) {
        self.inner.to_complex_f64()
    }

    fn __add__(&self, o: &Self) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.try_add(&o.inner).map_err(err)?,
        })
    }

    fn __sub__(&self, o: &Self) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.try_sub(&o.inner).map_err(err)?,
        })
    }

    fn __mul__(&self, o: &Self) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.try_mul(&o.inner).map_err(err)?,
        })
    }

    fn __truediv__(&self, o: &Self) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.try_div(&o.inner).map_err(err)?,
        })
    }

    fn __neg__(&self) -> Self {
        Self {
            inner: -self.inner.clone(),
        }
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("CycloElement(N={}, {})", self.inner.modulus(), self.inner)
    }
}

/// Invariant trace field of `M_n`, with its generator `2cos(π/n)i`.
#[pyclass(name = "TraceField", module = "pretzel_fal", frozen)]
struct PyTraceField {
    inner: tracefield::TraceFieldDescriptor,
}

#[pymethods]
impl PyTraceField {
    #[new]
    fn new(n: u64) -> PyResult<Self> {
        Ok(Self {
            inner: tracefield::build_trace_field(n).map_err(err)?,
        })
    }

    #[getter]
    fn n(&self) -> u64 {
        self.inner.n
    }

    #[getter]
    fn conductor(&self) -> u64 {
        self.inner.conductor
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree
    }

    #[getter]
    fn min_poly(&self) -> String {
        self.inner.min_poly.render("x")
    }

    #[getter]
    fn generator(&self) -> PyCyclo {
        PyCyclo {
            inner: self.inner.generator.clone(),
        }
    }

    #[getter]
    fn stabilizer(&self) -> Vec<u64> {
        self.inner.stabilizer.members().to_vec()
    }

    fn contains(&self, x: &PyCyclo) -> PyResult<bool> {
        self.inner.contains(&x.inner).map_err(err)
    }

    fn verify(&self) -> bool {
        self.inner.verify().is_ok()
    }

    fn __eq__(&self, o: &Self) -> bool {
        tracefield::descriptors_equal(&self.inner, &o.inner)
    }

    fn to_json(&self) -> String {
        serde_json_string(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("TraceField(n={}, {})", self.inner.n, self.min_poly())
    }
}

fn serde_json_string<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

/// `M(n, ε)`; `twists` is a bit string such as `"01111"`.
#[pyclass(name = "PretzelFal", module = "pretzel_fal", frozen)]
struct PyPretzel {
    inner: PretzelFal,
}

#[pymethods]
impl PyPretzel {
    #[new]
    #[pyo3(signature = (n, twists=None))]
    fn new(n: u64, twists: Option<&str>) -> PyResult<Self> {
        Ok(Self {
            inner: PretzelFal::from_bits(n, twists).map_err(err)?,
        })
    }

    #[getter]
    fn n(&self) -> u64 {
        self.inner.n()
    }

    #[getter]
    fn twists(&self) -> String {
        self.inner.twist_string()
    }

    #[getter]
    fn is_prime_family(&self) -> bool {
        self.inner.is_prime_family()
    }

    /// `(sym_plus, sym, hidden, cover_degree)` as strings.
    fn symmetry(&self) -> PyResult<(String, String, String, String)> {
        let mut g = geometry(128)?;
        let d = classify::symmetry_data(&self.inner, &mut g).map_err(err)?;
        Ok((
            d.sym_plus.to_string(),
            d.sym.to_string(),
            d.hidden.to_string(),
            d.cover_degree.to_string(),
        ))
    }

    fn crushtacean_criterion(&self) -> PyResult<bool> {
        let g = build_pretzel_crushtacean(self.inner.n() as usize).map_err(err)?;
        Ok(cdw_criterion(&g, self.inner.twists()).map_err(err)?.holds)
    }

    #[pyo3(signature = (precision=DEFAULT_PRECISION))]
    fn report(&self, precision: usize) -> PyResult<String> {
        let mut g = geometry(precision)?;
        let r = report::build_report(&self.inner, &mut g, None, None).map_err(err)?;
        Ok(r.to_json())
    }

    fn __repr__(&self) -> String {
        format!("PretzelFal(n={}, twists='{}')", self.inner.n(), self.inner.twist_string())
    }
}

#[pyfunction]
fn fields_equal(m: u64, n: u64) -> PyResult<bool> {
    tracefield::fields_equal(m, n).map_err(err)
}

#[pyfunction]
fn euler_totient(n: u64) -> u64 {
    tracefield::euler_totient(n)
}

#[pyfunction]
#[pyo3(signature = (theta, precision=DEFAULT_PRECISION))]
fn lobachevsky(theta: &str, precision: usize) -> PyResult<String> {
    let x = hypgeom::lobachevsky(&real(theta, precision)?, precision).map_err(err)?;
    Ok(digits(&x, precision))
}

#[pyfunction]
#[pyo3(signature = (n, precision=DEFAULT_PRECISION))]
fn volume(n: u64, precision: usize) -> PyResult<String> {
    Ok(digits(&hypgeom::volume(n, precision).map_err(err)?, precision))
}

#[pyfunction]
#[pyo3(signature = (n, precision=DEFAULT_PRECISION))]
fn orbifold_volume_f(n: u64, precision: usize) -> PyResult<String> {
    Ok(digits(&hypgeom::orbifold_volume_f(n, precision).map_err(err)?, precision))
}

#[pyfunction]
#[pyo3(signature = (n, precision=DEFAULT_PRECISION))]
fn closed_geodesic_length(n: u64, precision: usize) -> PyResult<String> {
    let d = geometry(precision)?.geodesic_data(n).map_err(err)?;
    Ok(digits(&d.closed_length, precision))
}

/// `(entry, integral, minimal polynomial)` for the Vinberg test.
#[pyfunction]
fn vinberg(n: u64) -> PyResult<(String, bool, String)> {
    let v = hypgeom::vinberg_entry_is_integral(n).map_err(err)?;
    Ok((v.entry.render(), v.integral, v.witness.render("x")))
}

/// `(verdict, [(code, detail), ...])`.
#[pyfunction]
#[pyo3(signature = (n, precision=128))]
fn is_arithmetic(n: u64, precision: usize) -> PyResult<(String, Vec<(String, String)>)> {
    let mut g = geometry(precision)?;
    let v = classify::is_arithmetic(n, &mut g, None).map_err(err)?;
    let verdict = if v.is_arithmetic() {
        "arithmetic"
    } else {
        "non-arithmetic"
    };
    let ev = v.evidence.iter().map(|e| (e.code(), e.detail.clone())).collect();
    Ok((verdict.to_string(), ev))
}

#[pyfunction]
fn commensurable(a: &PyPretzel, b: &PyPretzel) -> PyResult<(bool, String)> {
    let mut g = geometry(128)?;
    let r = classify::commensurable(&a.inner, &b.inner, &mut g).map_err(err)?;
    Ok((r.commensurable, r.reason))
}

/// `(lower, upper, contains_2n, n0)`.
#[pyfunction]
#[pyo3(signature = (n, epsilon, precision=DEFAULT_PRECISION))]
fn hidden_symmetry_bounds(
    n: u64,
    epsilon: &str,
    precision: usize,
) -> PyResult<(String, String, bool, u64)> {
    let mut g = geometry(precision)?;
    let b = classify::hidden_symmetry_bounds(n, &real(epsilon, precision)?, &mut g)
        .map_err(err)?;
    Ok((digits(&b.lower, precision), digits(&b.upper, precision), b.contains_2n, b.n0))
}

#[pyfunction]
#[pyo3(signature = (volume, v0=None, precision=DEFAULT_PRECISION))]
fn max_hidden_symmetries(volume: &str, v0: Option<&str>, precision: usize) -> PyResult<String> {
    let v0 = v0.map(|s| real(s, precision)).transpose()?;
    let r = classify::max_hidden_symmetries(&real(volume, precision)?, v0.as_ref())
        .map_err(err)?;
    Ok(digits(&r, precision))
}

/// Involution criterion on a graph given as JSON.
#[pyfunction]
fn graph_criterion(graph_json: &str, twists: &str) -> PyResult<bool> {
    let g = EmbeddedGraph::from_json(graph_json).map_err(err)?;
    let bits = classify::parse_bits(twists).map_err(err)?;
    Ok(cdw_criterion(&g, &bits).map_err(err)?.holds)
}

#[pymodule]
#[pyo3(name = "pretzel_fal")]
fn pretzel_fal_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyCyclo>()?;
    m.add_class::<PyTraceField>()?;
    m.add_class::<PyPretzel>()?;
    m.add_function(wrap_pyfunction!(fields_equal, m)?)?;
    m.add_function(wrap_pyfunction!(euler_totient, m)?)?;
    m.add_function(wrap_pyfunction!(lobachevsky, m)?)?;
    m.add_function(wrap_pyfunction!(volume, m)?)?;
    m.add_function(wrap_pyfunction!(orbifold_volume_f, m)?)?;
    m.add_function(wrap_pyfunction!(closed_geodesic_length, m)?)?;
    m.add_function(wrap_pyfunction!(vinberg, m)?)?;
    m.add_function(wrap_pyfunction!(is_arithmetic, m)?)?;
    m.add_function(wrap_pyfunction!(commensurable, m)?)?;
    m.add_function(wrap_pyfunction!(hidden_symmetry_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(max_hidden_symmetries, m)?)?;
    m.add_function(wrap_pyfunction!(graph_criterion, m)?)?;
    Ok(())
}
