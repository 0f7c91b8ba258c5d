//! Python bindings: `import qes`.
//!
//! Rational inputs accept `int`, `fractions.Fraction` or a `"p/q"` string;
//! floats are rejected. Exact outputs come back as `Fraction`.

use pyo3::exceptions::{PyRuntimeError, PyTypeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyFloat};

use qes_core::exactnum::{fmt_rational, parse_rational, to_f64, CharPoly, Rational};
use qes_core::generators::{triplet_f, AlgebraParams, Metric, MixSpec};
use qes_core::spectral::{self, HamiltonianSpec as CoreSpec};
use qes_core::verify::{self, Fault, SuiteConfig};
use qes_core::weyl::{self, DiffOp as CoreDiffOp, MatOp as CoreMatOp};
use qes_core::Error;

fn err(e: Error) -> PyErr {
    match e {
        Error::Parse(_) | Error::InvalidParams(_) | Error::InvalidInterval { .. } => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if obj.is_instance_of::<PyFloat>() {
        return Err(PyTypeError::new_err("floats are not exact; pass an int, Fraction or \"p/q\" string"));
    }
    parse_rational(&obj.str()?.to_cow()?).map_err(err)
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((fmt_rational(r),))
}

fn spec_from(n: u32, k0: Option<&Bound<'_, PyAny>>, c: Option<&Bound<'_, PyAny>>) -> PyResult<CoreSpec> {
    match (k0, c) {
        (Some(k0), None) => CoreSpec::new(n, rational(k0)?).map_err(err),
        (None, Some(c)) => CoreSpec::from_c(n, rational(c)?).map_err(err),
        _ => Err(PyValueError::new_err("give exactly one of k0 or c")),
    }
}

fn metric(name: &str) -> PyResult<Metric> {
    name.parse().map_err(err)
}

/// Normal-ordered operator `Σ c_ij x^i ∂^j`.
#[pyclass(module = "qes", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct DiffOp(CoreDiffOp);

#[pymethods]
impl DiffOp {
    /// `coeff · x^i ∂^j`.
    #[staticmethod]
    #[pyo3(signature = (i, j, coeff = None))]
    fn term(i: u32, j: u32, coeff: Option<&Bound<'_, PyAny>>) -> PyResult<Self> {
        let c = match coeff {
            Some(c) => rational(c)?,
            None => Rational::from_integer(1.into()),
        };
        Ok(DiffOp(CoreDiffOp::x_pow(i).compose(&CoreDiffOp::d_pow(j)).scale_rat(&c)))
    }

    #[staticmethod]
    fn x() -> Self {
        DiffOp(CoreDiffOp::x())
    }

    #[staticmethod]
    fn d() -> Self {
        DiffOp(CoreDiffOp::d())
    }

    #[staticmethod]
    fn one() -> Self {
        DiffOp(CoreDiffOp::one())
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn order(&self) -> u32 {
        self.0.order()
    }

    fn __add__(&self, o: &Self) -> Self {
        DiffOp(&self.0 + &o.0)
    }

    fn __sub__(&self, o: &Self) -> Self {
        DiffOp(&self.0 - &o.0)
    }

    fn __mul__(&self, o: &Self) -> Self {
        DiffOp(&self.0 * &o.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("DiffOp({})", self.0)
    }
}

/// 2×2 matrix of [`DiffOp`]s.
#[pyclass(module = "qes", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct MatOp(CoreMatOp);

#[pymethods]
impl MatOp {
    #[new]
    fn new(a: DiffOp, b: DiffOp, c: DiffOp, d: DiffOp) -> Self {
        MatOp(CoreMatOp::new([[a.0, b.0], [c.0, d.0]]))
    }

    #[staticmethod]
    fn identity() -> Self {
        MatOp(CoreMatOp::identity())
    }

    #[staticmethod]
    fn sigma3() -> Self {
        MatOp(CoreMatOp::sigma3())
    }

    fn entry(&self, row: usize, col: usize) -> PyResult<DiffOp> {
        if row > 1 || col > 1 {
            return Err(PyValueError::new_err("row and col must be 0 or 1"));
        }
        Ok(DiffOp(self.0.entry(row, col).clone()))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn __add__(&self, o: &Self) -> Self {
        MatOp(&self.0 + &o.0)
    }

    fn __sub__(&self, o: &Self) -> Self {
        MatOp(&self.0 - &o.0)
    }

    fn __mul__(&self, o: &Self) -> Self {
        MatOp(&self.0 * &o.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("MatOp({})", self.0)
    }
}

#[pyfunction]
fn commutator(a: &MatOp, b: &MatOp) -> MatOp {
    MatOp(weyl::commutator(&a.0, &b.0))
}

#[pyfunction]
fn anticommutator(a: &MatOp, b: &MatOp) -> MatOp {
    MatOp(weyl::anticommutator(&a.0, &b.0))
}

/// Generators at `(n, Δ)` keyed `T+`, `T0`, `T-`, `J`, `Q1..`, `Qbar1..`
/// and, for `Δ = 2`, `F1..F3`.
#[pyfunction]
fn generators<'py>(py: Python<'py>, n: u32, delta: u32) -> PyResult<Bound<'py, PyDict>> {
    let p = AlgebraParams::new(n, delta).map_err(err)?;
    let g = verify::Generators::new(p);
    let out = PyDict::new(py);
    out.set_item("T+", MatOp(g.bosonic.t_plus.clone()))?;
    out.set_item("T0", MatOp(g.bosonic.t_zero.clone()))?;
    out.set_item("T-", MatOp(g.bosonic.t_minus.clone()))?;
    out.set_item("J", MatOp(g.bosonic.j.clone()))?;
    for a in 1..=delta as i64 + 1 {
        out.set_item(format!("Q{a}"), MatOp(g.fermionic.q(a)))?;
        out.set_item(format!("Qbar{a}"), MatOp(g.fermionic.qbar(a)))?;
    }
    if delta == 2 {
        for (i, f) in triplet_f(&p, &MixSpec::default()).map_err(err)?.into_iter().enumerate() {
            out.set_item(format!("F{}", i + 1), MatOp(f))?;
        }
    }
    Ok(out)
}

/// One exact relation check.
#[pyclass(module = "qes", frozen, get_all)]
struct RelationReport {
    tag: String,
    n: Option<u32>,
    delta: Option<u32>,
    alpha: Option<i64>,
    beta: Option<i64>,
    holds: bool,
    line: String,
    residual: String,
    note: Option<String>,
}

#[pymethods]
impl RelationReport {
    fn __repr__(&self) -> String {
        self.line.clone()
    }
}

impl From<&verify::RelationReport> for RelationReport {
    fn from(r: &verify::RelationReport) -> Self {
        RelationReport {
            tag: r.tag.clone(),
            n: r.n,
            delta: r.delta,
            alpha: r.alpha,
            beta: r.beta,
            holds: r.holds(),
            line: r.line(),
            residual: r.residual.to_string(),
            note: r.note.clone(),
        }
    }
}

#[pyfunction]
#[pyo3(signature = (n_max = 12, delta_max = 4, metric = "standard", fault = None))]
fn verify_suite(py: Python<'_>, n_max: u32, delta_max: u32, metric: &str, fault: Option<&str>) -> PyResult<Vec<RelationReport>> {
    let cfg = SuiteConfig {
        n_max,
        delta_max,
        mix: MixSpec::default(),
        metric: self::metric(metric)?,
        fault: fault.map(str::parse::<Fault>).transpose().map_err(err)?,
    };
    let reports = py.detach(|| verify::run_suite(&cfg)).map_err(err)?;
    Ok(reports.iter().map(RelationReport::from).collect())
}

/// The q(2) relations at `Δ = 2`.
#[pyfunction]
#[pyo3(signature = (n, metric = "standard"))]
fn verify_q2(n: u32, metric: &str) -> PyResult<Vec<RelationReport>> {
    let g = verify::Generators::new(AlgebraParams::new(n, 2).map_err(err)?);
    let r = verify::verify_q2_with(&g, &MixSpec::default(), self::metric(metric)?).map_err(err)?;
    Ok(r.iter().map(RelationReport::from).collect())
}

/// `(c_mix, signs, residual_terms)` for every point of the default grid.
#[pyfunction]
#[pyo3(signature = (n = verify::DELTA4_DEFAULT_N))]
fn delta4_scan<'py>(py: Python<'py>, n: u32) -> PyResult<Vec<(Bound<'py, PyAny>, Option<(i8, i8)>, usize)>> {
    let grid = verify::default_delta4_grid();
    let reports = py.detach(|| verify::delta4_scan(n, &grid)).map_err(err)?;
    reports
        .iter()
        .map(|r| Ok((fraction(py, &r.c_mix)?, r.signs, r.residual_quadratic_norm)))
        .collect()
}

/// `(n, k0)`, with the coupling `c = -4 n k0`.
#[pyclass(module = "qes", frozen, skip_from_py_object)]
#[derive(Clone)]
struct HamiltonianSpec(CoreSpec);

#[pymethods]
impl HamiltonianSpec {
    #[new]
    #[pyo3(signature = (n, *, k0 = None, c = None))]
    fn new(n: u32, k0: Option<&Bound<'_, PyAny>>, c: Option<&Bound<'_, PyAny>>) -> PyResult<Self> {
        spec_from(n, k0, c).map(HamiltonianSpec)
    }

    #[getter]
    fn n(&self) -> u32 {
        self.0.n
    }

    #[getter]
    fn k0<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.0.k0)
    }

    #[getter]
    fn c<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.0.c_spec())
    }

    fn __repr__(&self) -> String {
        format!("HamiltonianSpec({})", self.0.header())
    }
}

#[pyclass(module = "qes", frozen, get_all)]
struct Level {
    energy: f64,
    /// Exact value as `"p/q"` when rational.
    exact: Option<String>,
    multiplicity: usize,
    /// `(top, bottom)` y-node counts per eigenvector; `None` inside a degenerate level.
    nodes: Vec<Option<(usize, usize)>>,
}

#[pymethods]
impl Level {
    fn __repr__(&self) -> String {
        format!("Level(energy={}, multiplicity={}, nodes={:?})", self.energy, self.multiplicity, self.nodes)
    }
}

#[pyclass(module = "qes", frozen)]
struct Spectrum {
    spec: CoreSpec,
    #[pyo3(get)]
    char_poly: String,
    #[pyo3(get)]
    energies: Vec<f64>,
    levels: Vec<Py<Level>>,
}

#[pymethods]
impl Spectrum {
    #[getter]
    fn spec(&self) -> HamiltonianSpec {
        HamiltonianSpec(self.spec.clone())
    }

    #[getter]
    fn levels(&self, py: Python<'_>) -> Vec<Py<Level>> {
        self.levels.iter().map(|l| l.clone_ref(py)).collect()
    }

    fn __repr__(&self) -> String {
        format!("Spectrum({}, energies={:?})", self.spec.header(), self.energies)
    }
}

#[pyfunction]
#[pyo3(signature = (n, *, k0 = None, c = None))]
fn algebraic_spectrum(py: Python<'_>, n: u32, k0: Option<&Bound<'_, PyAny>>, c: Option<&Bound<'_, PyAny>>) -> PyResult<Spectrum> {
    let spec = spec_from(n, k0, c)?;
    let s = spectral::algebraic_spectrum(&spec).map_err(err)?;
    let funcs = spectral::eigenfunctions_y(&s).map_err(err)?;
    let levels = s
        .levels
        .iter()
        .map(|l| {
            let level = Level {
                energy: l.energy,
                exact: l.exact.as_ref().map(fmt_rational),
                multiplicity: l.multiplicity,
                nodes: funcs.iter().filter(|f| f.energy == l.energy).map(|f| f.nodes).collect(),
            };
            Py::new(py, level)
        })
        .collect::<PyResult<Vec<_>>>()?;
    Ok(Spectrum {
        char_poly: s.char_poly.to_string(),
        energies: s.energies(),
        spec,
        levels,
    })
}

fn poly_pair(p: &CharPoly) -> (String, Vec<String>) {
    (p.to_string(), p.coeffs().iter().map(|c| c.to_string()).collect())
}

/// `(polynomial, coefficients in ascending powers of λ)`, symbolic in `var`.
#[pyfunction]
#[pyo3(signature = (n, var = "c"))]
fn spectral_polynomial(n: u32, var: &str) -> PyResult<(String, Vec<String>)> {
    let p = match var {
        "c" => spectral::spectral_polynomial_in_c(n),
        "k0" => spectral::spectral_polynomial(n),
        _ => return Err(PyValueError::new_err("var must be \"c\" or \"k0\"")),
    }
    .map_err(err)?;
    Ok(poly_pair(&p))
}

/// `[(c, [E_1..E_2n]), ...]` on a uniform grid.
#[pyfunction]
fn sweep(py: Python<'_>, n: u32, c_min: &Bound<'_, PyAny>, c_max: &Bound<'_, PyAny>, steps: usize) -> PyResult<Vec<(f64, Vec<f64>)>> {
    let (lo, hi) = (rational(c_min)?, rational(c_max)?);
    let t = py.detach(|| spectral::sweep(n, &lo, &hi, steps)).map_err(err)?;
    Ok(t.rows.into_iter().map(|r| (r.c, r.energies)).collect())
}

/// The sweep as CSV text.
#[pyfunction]
#[pyo3(signature = (n, c_min, c_max, steps, modulus = false))]
fn sweep_csv(py: Python<'_>, n: u32, c_min: &Bound<'_, PyAny>, c_max: &Bound<'_, PyAny>, steps: usize, modulus: bool) -> PyResult<String> {
    let (lo, hi) = (rational(c_min)?, rational(c_max)?);
    let t = py.detach(|| spectral::sweep(n, &lo, &hi, steps)).map_err(err)?;
    let mut buf = Vec::new();
    spectral::write_csv(&t, &mut buf, modulus).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    String::from_utf8(buf).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// `(c*, gap, (i, j))`, or `None` when the gap has no interior minimum.
#[pyfunction]
fn find_degeneracy(py: Python<'_>, n: u32, c_min: &Bound<'_, PyAny>, c_max: &Bound<'_, PyAny>) -> PyResult<Option<(f64, f64, (usize, usize))>> {
    let (lo, hi) = (to_f64(&rational(c_min)?), to_f64(&rational(c_max)?));
    match py.detach(|| spectral::find_degeneracy(n, lo, hi)) {
        Ok(d) => Ok(Some((d.c_star, d.gap, d.levels))),
        Err(Error::NoInteriorMinimum { .. }) => Ok(None),
        Err(e) => Err(err(e)),
    }
}

/// `[(algebraic, numeric, |diff|), ...]` from a finite-difference solve.
#[pyfunction]
#[pyo3(signature = (n, *, k0 = None, c = None, grid = 800, box_half_width = 4.5))]
fn numeric_crosscheck(
    py: Python<'_>,
    n: u32,
    k0: Option<&Bound<'_, PyAny>>,
    c: Option<&Bound<'_, PyAny>>,
    grid: usize,
    box_half_width: f64,
) -> PyResult<Vec<(f64, f64, f64)>> {
    let spec = spec_from(n, k0, c)?;
    let g = spectral::FdGrid::new(grid, box_half_width).map_err(err)?;
    let cc = py.detach(|| spectral::numeric_crosscheck(&spec, &g)).map_err(err)?;
    Ok(cc.matches.iter().map(|m| (m.algebraic, m.numeric, m.diff)).collect())
}

/// `(S h S⁻¹ = -h, odd coefficients vanish)` symbolically in k0.
#[pyfunction]
fn reflection_check(n: u32) -> PyResult<(bool, bool)> {
    let r = spectral::reflection_check(n).map_err(err)?;
    Ok((r.holds(), r.char_poly_even))
}

/// Whether the gauged Hamiltonian maps `P(n) ⊕ P(n-2)` into itself.
#[pyfunction]
fn gauged_preserves_module(n: u32) -> PyResult<bool> {
    if n < 2 {
        return Err(PyValueError::new_err("n must be at least 2"));
    }
    let module = weyl::ModuleSpec::new(n as i64, n as i64 - 2).map_err(err)?;
    Ok(weyl::restrict(&spectral::gauged_symbolic(n), &module).preserves())
}

#[pymodule]
fn qes(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<DiffOp>()?;
    m.add_class::<MatOp>()?;
    m.add_class::<RelationReport>()?;
    m.add_class::<HamiltonianSpec>()?;
    m.add_class::<Level>()?;
    m.add_class::<Spectrum>()?;
    m.add_function(wrap_pyfunction!(commutator, m)?)?;
    m.add_function(wrap_pyfunction!(anticommutator, m)?)?;
    m.add_function(wrap_pyfunction!(generators, m)?)?;
    m.add_function(wrap_pyfunction!(verify_suite, m)?)?;
    m.add_function(wrap_pyfunction!(verify_q2, m)?)?;
    m.add_function(wrap_pyfunction!(delta4_scan, m)?)?;
    m.add_function(wrap_pyfunction!(algebraic_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_polynomial, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_csv, m)?)?;
    m.add_function(wrap_pyfunction!(find_degeneracy, m)?)?;
    m.add_function(wrap_pyfunction!(numeric_crosscheck, m)?)?;
    m.add_function(wrap_pyfunction!(reflection_check, m)?)?;
    m.add_function(wrap_pyfunction!(gauged_preserves_module, m)?)?;
    Ok(())
}
