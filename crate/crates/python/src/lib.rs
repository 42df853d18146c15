//! Python bindings: `import pyhyperposet`.

use num_bigint::BigUint;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyType;

use hyperposet::doublecount::{self, PermutationPartition as CorePartition};
use hyperposet::extremal::{self, ExOptions, LaOptions};
use hyperposet::family::{self, SetFamily as CoreFamily};
use hyperposet::hypermatrix::{self, HyperMatrix as CoreMatrix};
use hyperposet::poset::{self, DimensionLimits, Poset as CorePoset};
use hyperposet::verify::{self, Suite, VerifyOptions};
use hyperposet::{arith, bounds};

fn err(e: hyperposet::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_to_py<'py, T: serde::Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn fraction<'py>(py: Python<'py>, r: &num_rational::BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((arith::rational_string(r),))
}

#[pyclass(module = "pyhyperposet", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct HyperMatrix {
    inner: CoreMatrix,
}

#[pymethods]
impl HyperMatrix {
    /// `HyperMatrix(dims, ones)` with 1-based coordinates.
    #[new]
    fn new(dims: Vec<usize>, ones: Vec<Vec<usize>>) -> PyResult<Self> {
        CoreMatrix::new(dims, ones).map(|inner| HyperMatrix { inner }).map_err(err)
    }

    #[staticmethod]
    fn identity(k: usize, d: usize) -> PyResult<Self> {
        CoreMatrix::identity(k, d).map(|inner| HyperMatrix { inner }).map_err(err)
    }

    #[staticmethod]
    fn full(dims: Vec<usize>) -> PyResult<Self> {
        CoreMatrix::full(dims).map(|inner| HyperMatrix { inner }).map_err(err)
    }

    #[classmethod]
    fn from_json(_cls: &Bound<'_, PyType>, text: &str) -> PyResult<Self> {
        text.parse().map(|inner| HyperMatrix { inner }).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.inner.dims().to_vec()
    }

    #[getter]
    fn ones(&self) -> Vec<Vec<usize>> {
        self.inner.ones().map(<[usize]>::to_vec).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn get(&self, coord: Vec<usize>) -> bool {
        self.inner.get(&coord)
    }

    /// Whether `pattern` occurs in this matrix.
    fn contains(&self, pattern: &HyperMatrix) -> PyResult<bool> {
        hypermatrix::contains(&self.inner, &pattern.inner).map_err(err)
    }

    fn find_embedding(&self, pattern: &HyperMatrix) -> PyResult<Option<Vec<Vec<usize>>>> {
        hypermatrix::find_embedding(&self.inner, &pattern.inner).map_err(err)
    }

    fn projection(&self, axis: usize) -> PyResult<Self> {
        self.inner.projection(axis).map(|inner| HyperMatrix { inner }).map_err(err)
    }

    fn reverse_axis(&self, axis: usize) -> PyResult<Self> {
        self.inner.reverse_axis(axis).map(|inner| HyperMatrix { inner }).map_err(err)
    }

    fn is_permutation_matrix(&self) -> PyResult<bool> {
        self.inner.is_permutation_matrix().map_err(err)
    }

    fn loomis_whitney_holds(&self) -> PyResult<bool> {
        self.inner.loomis_whitney_holds().map_err(err)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("HyperMatrix({:?}, {:?})", self.dims(), self.ones())
    }
}

#[pyclass(module = "pyhyperposet", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct Poset {
    inner: CorePoset,
}

#[pymethods]
impl Poset {
    /// `Poset(elements, covers)` where each cover is a pair `(lower, upper)`.
    #[new]
    fn new(elements: Vec<String>, covers: Vec<(String, String)>) -> PyResult<Self> {
        CorePoset::from_covers(elements, &covers).map(|inner| Poset { inner }).map_err(err)
    }

    /// `chain:k`, `antichain:k`, `diamond`, `vee:r`, `butterfly` or `boolean:m`.
    #[staticmethod]
    fn builtin(spec: &str) -> PyResult<Self> {
        CorePoset::builtin(spec).map(|inner| Poset { inner }).map_err(err)
    }

    #[classmethod]
    fn from_json(_cls: &Bound<'_, PyType>, text: &str) -> PyResult<Self> {
        text.parse().map(|inner| Poset { inner }).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn less(&self, x: &str, y: &str) -> PyResult<bool> {
        let idx = |l: &str| {
            self.inner
                .index_of(l)
                .ok_or_else(|| PyValueError::new_err(format!("unknown element {l:?}")))
        };
        Ok(self.inner.lt(idx(x)?, idx(y)?))
    }

    fn height(&self) -> PyResult<usize> {
        self.inner.height().map_err(err)
    }

    /// `(t, realizer)` with the realizer as lists of labels.
    fn dimension(&self) -> PyResult<(usize, Vec<Vec<String>>)> {
        let (t, r) = poset::dimension(&self.inner, DimensionLimits::default()).map_err(err)?;
        Ok((t, r.labelled(&self.inner)))
    }

    /// The permutation matrix of the lex-least minimum realizer.
    fn matrix(&self) -> PyResult<HyperMatrix> {
        let (_, r) = poset::dimension(&self.inner, DimensionLimits::default()).map_err(err)?;
        poset::realizer_to_matrix(&self.inner, &r)
            .map(|inner| HyperMatrix { inner })
            .map_err(err)
    }

    fn patterns(&self) -> PyResult<Vec<HyperMatrix>> {
        Ok(poset::enumerate_patterns(&self.inner, 2)
            .map_err(err)?
            .into_iter()
            .map(|inner| HyperMatrix { inner })
            .collect())
    }

    #[pyo3(signature = (host, induced = false))]
    fn embeds_in(&self, host: &Poset, induced: bool) -> bool {
        self.inner.embeds_in(&host.inner, induced)
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

#[pyclass(module = "pyhyperposet", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct SetFamily {
    inner: CoreFamily,
}

#[pymethods]
impl SetFamily {
    /// `SetFamily(n, sets)` with members as lists of elements of `1..=n`.
    #[new]
    fn new(n: usize, sets: Vec<Vec<usize>>) -> PyResult<Self> {
        CoreFamily::from_sets(n, &sets).map(|inner| SetFamily { inner }).map_err(err)
    }

    #[staticmethod]
    fn power_set(n: usize) -> PyResult<Self> {
        CoreFamily::power_set(n).map(|inner| SetFamily { inner }).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn members(&self) -> Vec<Vec<usize>> {
        self.inner.members()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[pyo3(signature = (p, induced = false))]
    fn contains_poset(&self, p: &Poset, induced: bool) -> bool {
        family::family_contains(&self.inner, &p.inner, induced)
    }

    fn lubell<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &family::lubell(&self.inner))
    }

    fn shifted_lubell<'py>(&self, py: Python<'py>, d: usize) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &family::shifted_lubell(&self.inner, d).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!("SetFamily({}, {:?})", self.inner.n(), self.inner.members())
    }
}

#[pyclass(module = "pyhyperposet", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PermutationPartition {
    inner: CorePartition,
}

#[pymethods]
impl PermutationPartition {
    /// Parses the `142|5|3` text form.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(|inner| PermutationPartition { inner }).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn parts(&self) -> Vec<Vec<usize>> {
        self.inner.parts().to_vec()
    }

    /// Prefix union at a 1-based index vector, as a sorted list.
    fn prefix_union(&self, idx: Vec<usize>) -> PyResult<Vec<usize>> {
        let mask = self.inner.prefix_union(&idx).map_err(err)?;
        Ok(family::mask_to_vec(mask))
    }

    fn build_mq(&self, f: &SetFamily) -> PyResult<HyperMatrix> {
        doublecount::build_mq(&self.inner, &f.inner)
            .map(|inner| HyperMatrix { inner })
            .map_err(err)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("PermutationPartition({:?})", self.inner.to_string())
    }
}

/// `(value, witness)` for matrices of shape `dims` avoiding every pattern.
#[pyfunction]
#[pyo3(signature = (dims, patterns, cap_override = false))]
fn ex_exact(dims: Vec<usize>, patterns: Vec<HyperMatrix>, cap_override: bool) -> PyResult<(usize, HyperMatrix)> {
    let pats: Vec<CoreMatrix> = patterns.into_iter().map(|p| p.inner).collect();
    let opts = ExOptions {
        cap_override,
        ..Default::default()
    };
    let r = extremal::ex_exact_set(&dims, &pats, opts).map_err(err)?;
    Ok((r.value, HyperMatrix { inner: r.witness }))
}

/// `(value, witness)` for families over `[n]` avoiding `p`.
#[pyfunction]
#[pyo3(signature = (n, p, induced = false, cap_override = false))]
fn la_exact(n: usize, p: &Poset, induced: bool, cap_override: bool) -> PyResult<(usize, SetFamily)> {
    let opts = LaOptions {
        cap_override,
        ..Default::default()
    };
    let r = extremal::la_exact(n, &p.inner, induced, opts).map_err(err)?;
    Ok((r.value, SetFamily { inner: r.witness }))
}

#[pyfunction]
fn enumerate_partitions(n: usize, d: usize) -> PyResult<Vec<PermutationPartition>> {
    Ok(doublecount::enumerate_partitions(n, d)
        .map_err(err)?
        .map(|inner| PermutationPartition { inner })
        .collect())
}

#[pyfunction]
fn count_partitions_with_prefix(n: usize, d: usize, f: usize) -> PyResult<BigUint> {
    doublecount::count_partitions_with_prefix(n, d, f).map_err(err)
}

/// `(lhs, rhs, equal)` of the prefix-union double count.
#[pyfunction]
fn double_count_identity(f: &SetFamily, d: usize) -> PyResult<(BigUint, BigUint, bool)> {
    let r = doublecount::double_count_identity(&f.inner, d).map_err(err)?;
    let parse = |s: &str| s.parse::<BigUint>().expect("decimal from the library");
    Ok((parse(&r.lhs), parse(&r.rhs), r.equal))
}

#[pyfunction]
fn marcus_tardos_constant(k: u64) -> BigUint {
    bounds::marcus_tardos_constant(k)
}

#[pyfunction]
fn binomial_shift_check(n: u64, d: u64) -> PyResult<bool> {
    bounds::binomial_shift_check(n, d).map_err(err)
}

/// The bounds table as a dict.
#[pyfunction]
fn bounds_table<'py>(py: Python<'py>, p: &Poset) -> PyResult<Bound<'py, PyAny>> {
    let t = bounds::bounds_table(&p.inner, DimensionLimits::default()).map_err(err)?;
    json_to_py(py, &t)
}

/// Runs one self-check suite and returns its report as a dict.
#[pyfunction]
#[pyo3(signature = (suite, seed = 0, trials = None))]
fn run_suite<'py>(py: Python<'py>, suite: &str, seed: u64, trials: Option<usize>) -> PyResult<Bound<'py, PyAny>> {
    let s: Suite = suite.parse().map_err(err)?;
    let opts = VerifyOptions {
        seed,
        trials,
        cap_override: false,
    };
    let report = py.detach(|| verify::run_suite(s, &opts)).map_err(err)?;
    json_to_py(py, &report)
}

#[pymodule]
fn pyhyperposet(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<HyperMatrix>()?;
    m.add_class::<Poset>()?;
    m.add_class::<SetFamily>()?;
    m.add_class::<PermutationPartition>()?;
    m.add_function(wrap_pyfunction!(ex_exact, m)?)?;
    m.add_function(wrap_pyfunction!(la_exact, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_partitions, m)?)?;
    m.add_function(wrap_pyfunction!(count_partitions_with_prefix, m)?)?;
    m.add_function(wrap_pyfunction!(double_count_identity, m)?)?;
    m.add_function(wrap_pyfunction!(marcus_tardos_constant, m)?)?;
    m.add_function(wrap_pyfunction!(binomial_shift_check, m)?)?;
    m.add_function(wrap_pyfunction!(bounds_table, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
