//! Python bindings. Exact rationals cross the boundary as `fractions.Fraction`
//! and bit words as strings of `0`/`1`, top level first.

use ldic_core::gains::{self, GainMetric};
use ldic_core::simulator::{self, BitWord, Part, PolicyKind};
use ldic_core::{achievability, converse, geometry, model, ChannelParams, Rational, User};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList, PyTuple};

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((r.to_string(),))
}

fn rational_arg(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    obj.str()?.to_str()?.parse().map_err(value_error)
}

fn user(i: u8) -> PyResult<User> {
    User::from_index(i).map_err(value_error)
}

fn word(s: &str) -> PyResult<BitWord> {
    s.parse().map_err(value_error)
}

/// Six non-negative integers: n11_fwd, n22_fwd, n12, n21, n11_fb, n22_fb.
#[pyclass(name = "ChannelParams", module = "ldic", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PyChannelParams {
    inner: ChannelParams,
}

#[pymethods]
impl PyChannelParams {
    #[new]
    #[pyo3(signature = (n11_fwd, n22_fwd, n12, n21, n11_fb = 0, n22_fb = 0))]
    fn new(n11_fwd: u64, n22_fwd: u64, n12: u64, n21: u64, n11_fb: u64, n22_fb: u64) -> Self {
        PyChannelParams { inner: ChannelParams::new(n11_fwd, n22_fwd, n12, n21, n11_fb, n22_fb) }
    }

    /// Parses `"a,b,c,d,e,f"`.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyChannelParams { inner: text.parse().map_err(value_error)? })
    }

    #[getter]
    fn n11_fwd(&self) -> u64 {
        self.inner.n11_fwd
    }

    #[getter]
    fn n22_fwd(&self) -> u64 {
        self.inner.n22_fwd
    }

    #[getter]
    fn n12(&self) -> u64 {
        self.inner.n12
    }

    #[getter]
    fn n21(&self) -> u64 {
        self.inner.n21
    }

    #[getter]
    fn n11_fb(&self) -> u64 {
        self.inner.n11_fb
    }

    #[getter]
    fn n22_fb(&self) -> u64 {
        self.inner.n22_fb
    }

    /// Word length of every channel input and output.
    #[getter]
    fn q(&self) -> u64 {
        self.inner.q()
    }

    fn to_tuple<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyTuple>> {
        PyTuple::new(py, self.inner.to_array())
    }

    fn with_feedback(&self, n11_fb: u64, n22_fb: u64) -> Self {
        PyChannelParams { inner: self.inner.with_feedback(n11_fb, n22_fb) }
    }

    /// The same channel with both feedback links removed.
    fn without_feedback(&self) -> Self {
        PyChannelParams { inner: converse::no_feedback(&self.inner) }
    }

    /// The same channel with the user indices exchanged.
    fn swapped(&self) -> Self {
        PyChannelParams { inner: self.inner.swapped() }
    }

    fn __repr__(&self) -> String {
        format!("ChannelParams({})", self.inner)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

/// Closed convex polygon in the non-negative rate quadrant.
#[pyclass(name = "RateRegion", module = "ldic", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyRateRegion {
    inner: geometry::RateRegion,
}

#[pymethods]
impl PyRateRegion {
    /// Corner points `(R1, R2)` in counter-clockwise order from the origin.
    fn vertices<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        let items = self
            .inner
            .vertices()
            .iter()
            .map(|v| PyTuple::new(py, [fraction(py, &v.r1)?, fraction(py, &v.r2)?]))
            .collect::<PyResult<Vec<_>>>()?;
        PyList::new(py, items)
    }

    /// Canonical halfplanes `(a1, a2, b)` meaning `a1 R1 + a2 R2 <= b`.
    fn halfplanes<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        let items = self
            .inner
            .halfplanes()
            .iter()
            .map(|h| PyTuple::new(py, [fraction(py, &h.a1)?, fraction(py, &h.a2)?, fraction(py, &h.b)?]))
            .collect::<PyResult<Vec<_>>>()?;
        PyList::new(py, items)
    }

    fn contains(&self, r1: &Bound<'_, PyAny>, r2: &Bound<'_, PyAny>) -> PyResult<bool> {
        Ok(self.inner.contains(&geometry::Point::new(rational_arg(r1)?, rational_arg(r2)?)))
    }

    fn subset_of(&self, other: &PyRateRegion) -> bool {
        self.inner.subset_of(&other.inner)
    }

    /// Maximum of `c1 R1 + c2 R2` over the region.
    fn sup_linear<'py>(
        &self,
        py: Python<'py>,
        c1: &Bound<'py, PyAny>,
        c2: &Bound<'py, PyAny>,
    ) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.sup_linear(&rational_arg(c1)?, &rational_arg(c2)?))
    }

    /// Largest rate of user `i` (1 or 2) inside the region.
    fn axis_max<'py>(&self, py: Python<'py>, i: u8) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.axis_max(gains::axis_of(user(i)?)))
    }

    fn __repr__(&self) -> String {
        format!("RateRegion({})", self.inner.canonical_text())
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

#[pyfunction]
fn capacity_region(p: &PyChannelParams) -> PyRateRegion {
    PyRateRegion { inner: converse::capacity_region(&p.inner) }
}

/// Achievable region obtained by eliminating the split rates.
#[pyfunction]
fn achievable_region(p: &PyChannelParams) -> PyRateRegion {
    PyRateRegion { inner: achievability::achievable_region_fm(&achievability::theta_table(&p.inner)) }
}

/// Right-hand sides of the converse inequalities, keyed by name.
#[pyfunction]
fn converse_bounds<'py>(py: Python<'py>, p: &PyChannelParams) -> PyResult<Bound<'py, PyDict>> {
    let b = converse::converse_bounds(&p.inner);
    let d = PyDict::new(py);
    d.set_item("r1", b.r1_bound)?;
    d.set_item("r2", b.r2_bound)?;
    d.set_item("sum_cutset", b.sum_bound_cutset)?;
    d.set_item("sum_feedback", b.sum_bound_fb)?;
    d.set_item("two_r1_plus_r2", b.two_r1_plus_r2)?;
    d.set_item("r1_plus_two_r2", b.r1_plus_two_r2)?;
    Ok(d)
}

/// Seven rows `(theta_l_1, theta_l_2)`, `l = 1..=7`.
#[pyfunction]
fn theta_table(p: &PyChannelParams) -> Vec<(i64, i64)> {
    achievability::theta_table(&p.inner).theta.iter().map(|r| (r[0], r[1])).collect()
}

/// Interference regime of each user, e.g. `("weak", "strong")`.
#[pyfunction]
fn regimes(p: &PyChannelParams) -> (String, String) {
    let r = model::classify_regimes(&p.inner);
    (r.regime_1.label().to_string(), r.regime_2.label().to_string())
}

/// Gains of the channel over the same channel without feedback.
#[pyfunction]
fn gain_report<'py>(py: Python<'py>, p: &PyChannelParams) -> PyResult<Bound<'py, PyDict>> {
    let g = gains::gain_report(&p.inner);
    let d = PyDict::new(py);
    d.set_item("delta1", fraction(py, &g.delta1)?)?;
    d.set_item("delta2", fraction(py, &g.delta2)?)?;
    d.set_item("sigma", fraction(py, &g.sigma)?)?;
    d.set_item("argmax_rj_for_delta1", fraction(py, &g.argmax_rj_for_delta1)?)?;
    d.set_item("argmax_rj_for_delta2", fraction(py, &g.argmax_rj_for_delta2)?)?;
    Ok(d)
}

/// Largest feedback parameter on `side` (the other link off) up to which
/// `metric` (`delta1`, `delta2`, `sigma` or `any`) is zero and beyond which it
/// is positive; `None` when no such value exists.
#[pyfunction]
fn feedback_threshold(base: [u64; 4], side: u8, metric: &str) -> PyResult<Option<u64>> {
    let metric = match metric {
        "delta1" => GainMetric::Delta1,
        "delta2" => GainMetric::Delta2,
        "sigma" => GainMetric::Sigma,
        "any" => GainMetric::Any,
        other => return Err(PyValueError::new_err(format!("unknown metric {other:?}"))),
    };
    Ok(gains::feedback_thresholds(base, user(side)?, metric))
}

/// Outputs `(y1, y2)` for inputs `x1`, `x2` of length `q`.
#[pyfunction]
fn forward(x1: &str, x2: &str, p: &PyChannelParams) -> PyResult<(String, String)> {
    let (y1, y2) = simulator::forward(&word(x1)?, &word(x2)?, &p.inner).map_err(value_error)?;
    Ok((y1.to_string(), y2.to_string()))
}

/// The part of output `y` returned to transmitter `i`.
#[pyfunction]
fn feedback_signal(y: &str, p: &PyChannelParams, i: u8) -> PyResult<String> {
    Ok(simulator::feedback_signal(&word(y)?, &p.inner, user(i)?).map_err(value_error)?.to_string())
}

/// Level lists (1 = top) of every named part of user `i`'s input and output.
#[pyfunction]
fn decompose<'py>(py: Python<'py>, p: &PyChannelParams, i: u8) -> PyResult<Bound<'py, PyDict>> {
    let dec = simulator::decompose(&p.inner, user(i)?);
    let d = PyDict::new(py);
    for part in Part::ALL {
        d.set_item(part.name(), dec.part(part).to_vec())?;
    }
    Ok(d)
}

/// Runs a session with delay-one feedback; one dict per channel use.
#[pyfunction]
#[pyo3(signature = (p, uses = 4, policy = "random", seed = 0, user = 1, level = 1, at_use = 1))]
#[allow(clippy::too_many_arguments)]
fn simulate<'py>(
    py: Python<'py>,
    p: &PyChannelParams,
    uses: usize,
    policy: &str,
    seed: u64,
    user: u8,
    level: usize,
    at_use: usize,
) -> PyResult<Bound<'py, PyList>> {
    let kind: PolicyKind = policy.parse().map_err(value_error)?;
    let q = p.inner.q() as usize;
    if kind == PolicyKind::Impulse && !(1..=q).contains(&level) {
        return Err(PyValueError::new_err(format!("level must lie in 1..={q}")));
    }
    let (mut a, mut b) = simulator::policy_pair(kind, seed, q, self::user(user)?, level, at_use);
    let trace = simulator::run_session(a.as_mut(), b.as_mut(), &p.inner, uses).map_err(value_error)?;
    let rows = trace
        .uses
        .iter()
        .map(|u| {
            let d = PyDict::new(py);
            d.set_item("use", u.use_index)?;
            for (k, w) in [("x1", &u.x1), ("x2", &u.x2), ("y1", &u.y1), ("y2", &u.y2), ("fb1", &u.fb1), ("fb2", &u.fb2)] {
                d.set_item(k, w.to_string())?;
            }
            Ok(d)
        })
        .collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, rows)
}

#[pymodule]
pub fn ldic(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyChannelParams>()?;
    m.add_class::<PyRateRegion>()?;
    m.add_function(wrap_pyfunction!(capacity_region, m)?)?;
    m.add_function(wrap_pyfunction!(achievable_region, m)?)?;
    m.add_function(wrap_pyfunction!(converse_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(theta_table, m)?)?;
    m.add_function(wrap_pyfunction!(regimes, m)?)?;
    m.add_function(wrap_pyfunction!(gain_report, m)?)?;
    m.add_function(wrap_pyfunction!(feedback_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(forward, m)?)?;
    m.add_function(wrap_pyfunction!(feedback_signal, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    Ok(())
}
