//! Python bindings for `dclab`. Rationals cross the boundary as strings such
//! as `"1/4"`; structured results come back as plain dicts and lists.

use std::path::PathBuf;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use dclab::chaoscore::{classify_pair, empirical_df_pair, DistanceSeries, Tolerances};
use dclab::combdendrite::{
    apply_f, comb_certificate, dc2_absence_scan, dc2half_limit_scan, distance, landing_time, orbit,
    phi_star_closed_form, walk_orbit_mismatch, BaseSchedule, CombParams, DendritePoint,
};
use dclab::gehman::{build_gehman, endpoint_conjugacy_check};
use dclab::lab::{run_in, ExperimentConfig};
use dclab::rational::{format_rational, parse_rational, to_f64, Rational};
use dclab::shiftspace::{
    format_word, parse_word, scrambled_point, GrowthSequence, ScrambledPair as CorePair, Subshift as CoreSubshift,
    SymbolicPoint, ValidatedGrowth,
};
use dclab::DcError;

create_exception!(pydclab, DclabError, PyValueError);

fn err(e: DcError) -> PyErr {
    DclabError::new_err(e.to_string())
}

fn q(s: &str) -> PyResult<Rational> {
    parse_rational(s).map_err(err)
}

fn qs(v: &[String]) -> PyResult<Vec<Rational>> {
    v.iter().map(|s| q(s)).collect()
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| DclabError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Estimates and checkpoint rows of the comb certificate up to `levels`.
#[pyfunction]
fn certificate<'py>(py: Python<'py>, levels: u32) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &comb_certificate(levels).map_err(err)?)
}

/// Closed-form limit of the lower distribution function at spine point `x1`.
#[pyfunction]
fn phi_star<'py>(py: Python<'py>, x1: &str, delta: &str) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &phi_star_closed_form(&q(x1)?, &q(delta)?).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (delta, grid = 101))]
fn dc2_scan<'py>(py: Python<'py>, delta: &str, grid: usize) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &dc2_absence_scan(&q(delta)?, grid).map_err(err)?)
}

#[pyfunction]
fn dc2half_scan<'py>(py: Python<'py>, x1: &str, deltas: Vec<String>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &dc2half_limit_scan(&q(x1)?, &qs(&deltas)?).map_err(err)?)
}

/// Classifies a distance series: returns `(df, verdict)`.
#[pyfunction]
#[pyo3(signature = (series, deltas, tol = "1/20", diameter = "1"))]
fn classify<'py>(
    py: Python<'py>,
    series: Vec<String>,
    deltas: Vec<String>,
    tol: &str,
    diameter: &str,
) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>)> {
    let s = DistanceSeries::new(qs(&series)?, q(diameter)?).map_err(err)?;
    let tol = Tolerances::uniform(q(tol)?).map_err(err)?;
    let df = empirical_df_pair(&s, &qs(&deltas)?, &tol).map_err(err)?;
    let verdict = classify_pair(&df, &tol).map_err(err)?;
    Ok((to_py(py, &df)?, to_py(py, &verdict)?))
}

/// Validates `config_json` and runs the experiment, writing artifacts to `out`.
/// Returns the report as a dict.
#[pyfunction]
fn run_experiment<'py>(py: Python<'py>, config_json: &str, out: PathBuf) -> PyResult<Bound<'py, PyAny>> {
    let config = ExperimentConfig::from_json(config_json).map_err(err)?;
    to_py(py, &run_in(&config, &out).map_err(err)?)
}

#[pyfunction]
fn to_float(x: &str) -> PyResult<f64> {
    Ok(to_f64(&q(x)?))
}

/// A point of the comb dendrite.
#[pyclass(frozen, eq, skip_from_py_object, module = "pydclab")]
#[derive(Clone, PartialEq)]
struct Point(DendritePoint);

#[pymethods]
impl Point {
    #[staticmethod]
    fn spine(x: &str) -> PyResult<Self> {
        Ok(Point(DendritePoint::spine(q(x)?).map_err(err)?))
    }

    #[getter]
    fn coords(&self) -> (String, String) {
        let (x, y) = self.0.coords();
        (format_rational(&x), format_rational(&y))
    }

    #[getter]
    fn is_spine(&self) -> bool {
        self.0.is_spine()
    }

    /// `(level, index)` of the spike holding the point, or `None` on the spine.
    #[getter]
    fn spike(&self) -> Option<(u32, u64)> {
        self.0.spike_label()
    }

    fn distance(&self, other: &Point) -> String {
        format_rational(&distance(&self.0, &other.0))
    }

    fn __repr__(&self) -> String {
        let (x, y) = self.coords();
        format!("Point({x}, {y})")
    }
}

/// The comb dendrite and its map; `bases` lists spike bases per level.
#[pyclass(frozen, module = "pydclab")]
struct Comb(CombParams);

#[pymethods]
impl Comb {
    #[new]
    #[pyo3(signature = (bases = None))]
    fn new(bases: Option<Vec<u64>>) -> PyResult<Self> {
        let params = match bases {
            None => CombParams::triadic(),
            Some(b) if b.len() == 1 => CombParams::constant(b[0]).map_err(err)?,
            Some(b) => CombParams::new(BaseSchedule::Explicit(b)).map_err(err)?,
        };
        Ok(Comb(params))
    }

    fn spike(&self, level: u32, index: u64, height: &str) -> PyResult<Point> {
        Ok(Point(DendritePoint::spike(&self.0, level, index, q(height)?).map_err(err)?))
    }

    fn spike_top(&self, level: u32, index: u64) -> PyResult<Point> {
        Ok(Point(DendritePoint::spike_top(&self.0, level, index).map_err(err)?))
    }

    fn apply(&self, p: &Point) -> PyResult<Point> {
        Ok(Point(apply_f(&self.0, &p.0).map_err(err)?))
    }

    /// The first `steps + 1` points of the orbit of `p`.
    fn orbit(&self, p: &Point, steps: usize) -> PyResult<Vec<Point>> {
        Ok(orbit(&self.0, &p.0, steps).map_err(err)?.into_iter().map(Point).collect())
    }

    /// Steps until `p` reaches the spine, or `None` if it never does.
    fn landing_time(&self, p: &Point) -> PyResult<Option<u64>> {
        landing_time(&self.0, &p.0).map_err(err)
    }

    /// First step where the orbit of the first spike top leaves the walk.
    fn walk_mismatch(&self, steps: usize) -> PyResult<Option<u64>> {
        walk_orbit_mismatch(&self.0, steps).map_err(err)
    }
}

/// A subshift of finite type given by forbidden words.
#[pyclass(frozen, module = "pydclab")]
struct Subshift(CoreSubshift);

#[pymethods]
impl Subshift {
    #[new]
    #[pyo3(signature = (alphabet, forbidden = Vec::new()))]
    fn new(alphabet: u8, forbidden: Vec<String>) -> PyResult<Self> {
        let words = forbidden
            .iter()
            .map(|w| parse_word(w, alphabet))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        Ok(Subshift(CoreSubshift::new(alphabet, words).map_err(err)?))
    }

    fn admits(&self, word: &str) -> PyResult<bool> {
        Ok(self.0.admits(&parse_word(word, self.0.alphabet()).map_err(err)?))
    }

    fn language(&self, length: usize) -> PyResult<Vec<String>> {
        Ok(self.0.language(length).map_err(err)?.iter().map(|w| format_word(w)).collect())
    }

    /// Whether the cylinders of `a` and `b` carry a full 2-shift up to `depth`.
    fn horseshoe(&self, a: &str, b: &str, depth: usize) -> PyResult<bool> {
        let k = self.0.alphabet();
        let (a, b) = (parse_word(a, k).map_err(err)?, parse_word(b, k).map_err(err)?);
        dclab::shiftspace::horseshoe_check(&self.0, &a, &b, depth).map_err(err)
    }

    /// Endpoint conjugacy of the associated Gehman subdendrite up to `depth`.
    fn gehman_conjugacy<'py>(&self, py: Python<'py>, depth: usize) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &endpoint_conjugacy_check(&self.0, depth).map_err(err)?)
    }
}

/// Branch-point words of the full Gehman dendrite on `k` symbols.
#[pyfunction]
fn gehman_branch_points(k: u8, depth: usize) -> PyResult<Vec<String>> {
    let g = build_gehman(k, depth).map_err(err)?;
    Ok(g.branch_points().iter().map(|w| format_word(w)).collect())
}

/// Two scrambled points built from binary seed words with `2^(i²)` growth.
#[pyclass(frozen, module = "pydclab")]
struct ScrambledPair(CorePair);

#[pymethods]
impl ScrambledPair {
    #[new]
    #[pyo3(signature = (seed_x, seed_y, blocks = 5, depth = 8))]
    fn new(seed_x: &str, seed_y: &str, blocks: usize, depth: usize) -> PyResult<Self> {
        let growth = ValidatedGrowth::new(GrowthSequence::pow2_square(), depth, &q("1/20")?).map_err(err)?;
        let point = |s: &str| -> PyResult<_> {
            let seed = SymbolicPoint::explicit(2, parse_word(s, 2).map_err(err)?).map_err(err)?;
            scrambled_point(&seed, &growth, blocks).map_err(err)
        };
        Ok(ScrambledPair(CorePair::new(point(seed_x)?, point(seed_y)?).map_err(err)?))
    }

    #[getter]
    fn horizon(&self) -> u64 {
        self.0.horizon()
    }

    fn fraction_below(&self, delta: &str, n: u64) -> PyResult<String> {
        Ok(format_rational(&self.0.fraction_below(&q(delta)?, n).map_err(err)?))
    }

    fn empirical_df<'py>(&self, py: Python<'py>, deltas: Vec<String>, limit: u64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0.empirical_df(&qs(&deltas)?, limit).map_err(err)?)
    }
}

#[pymodule]
fn pydclab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DclabError", m.py().get_type::<DclabError>())?;
    m.add_class::<Point>()?;
    m.add_class::<Comb>()?;
    m.add_class::<Subshift>()?;
    m.add_class::<ScrambledPair>()?;
    m.add_function(wrap_pyfunction!(certificate, m)?)?;
    m.add_function(wrap_pyfunction!(phi_star, m)?)?;
    m.add_function(wrap_pyfunction!(dc2_scan, m)?)?;
    m.add_function(wrap_pyfunction!(dc2half_scan, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(gehman_branch_points, m)?)?;
    m.add_function(wrap_pyfunction!(to_float, m)?)?;
    Ok(())
}
