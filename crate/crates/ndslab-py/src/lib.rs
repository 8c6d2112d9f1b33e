//! Python bindings: exact piecewise-linear maps, map sequences, the five
//! periodicity classifiers, chaos probes, and the gallery.
//!
//! Rationals cross the boundary as exact `"p/q"` strings (compatible with
//! `fractions.Fraction`); structured results cross as JSON strings.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ndslab_core::classify as cls;
use ndslab_core::gallery;
use ndslab_core::matrix::{implication_expectations, MatrixMode};
use ndslab_core::plmap::{IntervalQ, PLMap};
use ndslab_core::probes;
use ndslab_core::rational::Rational;
use ndslab_core::sequence::{omega_limit_estimate, MapSequence};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rat(s: &str) -> PyResult<Rational> {
    Rational::parse(s).map_err(err)
}

fn rats(values: Vec<String>) -> PyResult<Vec<Rational>> {
    values.iter().map(|s| rat(s)).collect()
}

/// A continuous piecewise-linear self-map of [0,1] with exact rational
/// nodes.
#[pyclass(name = "PLMap", frozen, from_py_object)]
#[derive(Clone)]
struct PyPlMap {
    inner: PLMap,
}

#[pymethods]
impl PyPlMap {
    /// Build from (x, y) anchor pairs given as "p/q" strings.
    #[staticmethod]
    fn from_anchors(anchors: Vec<(String, String)>) -> PyResult<Self> {
        let mut parsed = Vec::with_capacity(anchors.len());
        for (x, y) in &anchors {
            parsed.push((rat(x)?, rat(y)?));
        }
        Ok(PyPlMap {
            inner: PLMap::from_anchors(parsed).map_err(err)?,
        })
    }

    #[staticmethod]
    fn tent() -> Self {
        PyPlMap { inner: PLMap::tent() }
    }

    #[staticmethod]
    fn identity() -> Self {
        PyPlMap {
            inner: PLMap::identity(),
        }
    }

    #[staticmethod]
    fn one_minus_x() -> Self {
        PyPlMap {
            inner: PLMap::one_minus_x(),
        }
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyPlMap {
            inner: serde_json::from_str(text).map_err(err)?,
        })
    }

    fn eval(&self, x: &str) -> PyResult<String> {
        Ok(self.inner.eval(&rat(x)?).map_err(err)?.to_string())
    }

    /// `self ∘ inner` (apply `inner` first).
    fn compose(&self, inner: &PyPlMap) -> Self {
        PyPlMap {
            inner: self.inner.compose(&inner.inner),
        }
    }

    fn sup_distance(&self, other: &PyPlMap) -> String {
        self.inner.sup_distance(&other.inner).to_string()
    }

    fn image(&self, lo: &str, hi: &str) -> PyResult<(String, String)> {
        let j = IntervalQ::new(rat(lo)?, rat(hi)?).map_err(err)?;
        let img = self.inner.image_interval(&j).map_err(err)?;
        Ok((img.lo().to_string(), img.hi().to_string()))
    }

    /// Exact solutions of f(x) = x: (isolated points, diagonal segments).
    fn fixed_points(&self) -> (Vec<String>, Vec<(String, String)>) {
        let fps = self.inner.fixed_points();
        (
            fps.points.iter().map(|p| p.to_string()).collect(),
            fps.segments
                .iter()
                .map(|s| (s.lo().to_string(), s.hi().to_string()))
                .collect(),
        )
    }

    fn is_surjective(&self) -> bool {
        self.inner.is_surjective()
    }

    fn equals(&self, other: &PyPlMap) -> bool {
        self.inner == other.inner
    }

    fn nodes(&self) -> Vec<(String, String)> {
        self.inner
            .nodes()
            .iter()
            .map(|(x, y)| (x.to_string(), y.to_string()))
            .collect()
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("serializable map")
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }

    fn __eq__(&self, other: &PyPlMap) -> bool {
        self.inner == other.inner
    }
}

/// A nonautonomous system: the total rule n -> f_n plus an optional
/// declared uniform limit.
#[pyclass(name = "MapSequence", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyMapSequence {
    inner: MapSequence,
}

#[pymethods]
impl PyMapSequence {
    #[staticmethod]
    fn constant(map: &PyPlMap) -> PyResult<Self> {
        Ok(PyMapSequence {
            inner: MapSequence::constant(map.inner.clone()).map_err(err)?,
        })
    }

    #[staticmethod]
    fn eventually_constant(prefix: Vec<PyPlMap>, tail: &PyPlMap) -> PyResult<Self> {
        let prefix = prefix.into_iter().map(|m| m.inner).collect();
        Ok(PyMapSequence {
            inner: MapSequence::eventually_constant(prefix, tail.inner.clone()).map_err(err)?,
        })
    }

    #[staticmethod]
    fn theorem_four() -> Self {
        PyMapSequence {
            inner: MapSequence::theorem_four(),
        }
    }

    #[staticmethod]
    #[pyo3(signature = (offset = 0))]
    fn example_v(offset: u64) -> Self {
        PyMapSequence {
            inner: MapSequence::example_v(offset),
        }
    }

    /// The system of a built-in gallery scenario.
    #[staticmethod]
    fn gallery(id: &str) -> PyResult<Self> {
        let scenario =
            gallery::build_scenario(id, &gallery::ScenarioParams::default()).map_err(err)?;
        Ok(PyMapSequence {
            inner: scenario.system,
        })
    }

    #[staticmethod]
    fn from_spec_json(text: &str) -> PyResult<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(err)?;
        Ok(PyMapSequence {
            inner: MapSequence::from_spec_json(&value).map_err(err)?,
        })
    }

    fn to_spec_json(&self) -> String {
        serde_json::to_string(&self.inner.to_spec_json()).expect("serializable spec")
    }

    fn map_at(&self, n: u64) -> PyResult<PyPlMap> {
        Ok(PyPlMap {
            inner: self.inner.map_at(n).map_err(err)?,
        })
    }

    /// Exact window composition `f_i^n`.
    fn window(&self, i: u64, n: u64) -> PyResult<PyPlMap> {
        Ok(PyPlMap {
            inner: self.inner.window_compose(i, n).map_err(err)?,
        })
    }

    /// Exact trajectory values as "p/q" strings, index 0 first.
    fn trajectory(&self, point: &str, horizon: u64) -> PyResult<Vec<String>> {
        let t = self.inner.trajectory(&rat(point)?, horizon).map_err(err)?;
        Ok(t.values().iter().map(|v| v.to_string()).collect())
    }

    /// Trajectory CSV: header `n,value_num,value_den`.
    fn trajectory_csv(&self, point: &str, horizon: u64) -> PyResult<String> {
        let t = self.inner.trajectory(&rat(point)?, horizon).map_err(err)?;
        Ok(t.to_csv())
    }

    fn declared_limit(&self) -> Option<PyPlMap> {
        self.inner
            .declared_limit()
            .map(|m| PyPlMap { inner: m.clone() })
    }
}

#[pyfunction]
fn check_def1(
    seq: &PyMapSequence,
    point: &str,
    r_max: u64,
    horizon: u64,
    eps: &str,
) -> PyResult<String> {
    let v = cls::check_def1(&seq.inner, &rat(point)?, r_max, horizon, &rat(eps)?).map_err(err)?;
    Ok(v.to_json().to_string())
}

#[pyfunction]
fn check_def2(seq: &PyMapSequence, point: &str, r: u64, horizon: u64) -> PyResult<String> {
    let v = cls::check_def2(&seq.inner, &rat(point)?, r, horizon).map_err(err)?;
    Ok(v.to_json().to_string())
}

#[pyfunction]
fn check_def3(seq: &PyMapSequence, point: &str, horizon: u64) -> PyResult<String> {
    let v = cls::check_def3(&seq.inner, &rat(point)?, horizon).map_err(err)?;
    Ok(v.to_json().to_string())
}

#[pyfunction]
fn check_def4(seq: &PyMapSequence, point: &str, r: u64, horizon: u64) -> PyResult<String> {
    let v = cls::check_def4(&seq.inner, &rat(point)?, r, horizon).map_err(err)?;
    Ok(v.to_json().to_string())
}

#[pyfunction]
fn check_def5(
    seq: &PyMapSequence,
    point: &str,
    r_max: u64,
    horizon: u64,
    eps_schedule: Vec<String>,
) -> PyResult<String> {
    let schedule = rats(eps_schedule)?;
    let v = cls::check_def5(&seq.inner, &rat(point)?, r_max, horizon, &schedule).map_err(err)?;
    Ok(v.to_json().to_string())
}

/// True iff the map sends each cycle point to the next, cyclically.
#[pyfunction]
fn limit_cycle_crosscheck(cycle: Vec<String>, map: &PyPlMap) -> PyResult<bool> {
    Ok(cls::limit_cycle_crosscheck(&rats(cycle)?, &map.inner))
}

#[pyfunction]
fn sharkovsky_precedes(l: u64, m: u64) -> bool {
    ndslab_core::sharkovsky::sharkovsky_precedes(l, m)
}

/// Implication matrix for "general" or "uniform" mode, as JSON.
#[pyfunction]
fn implication_matrix(mode: &str) -> PyResult<String> {
    let mode = match mode {
        "general" | "general_nds" => MatrixMode::GeneralNds,
        "uniform" | "uniformly_convergent" => MatrixMode::UniformlyConvergent,
        other => return Err(err(format!("unknown mode {other:?}"))),
    };
    Ok(implication_expectations(mode).to_json().to_string())
}

#[pyfunction]
fn transitivity_probe(seq: &PyMapSequence, grid: u64, horizon: u64) -> PyResult<String> {
    let rep = probes::transitivity_probe(&seq.inner, grid, horizon).map_err(err)?;
    Ok(rep.to_json().to_string())
}

#[pyfunction]
fn dense_orbit_probe(
    seq: &PyMapSequence,
    point: &str,
    eps: &str,
    horizon: u64,
) -> PyResult<String> {
    let t = seq.inner.trajectory(&rat(point)?, horizon).map_err(err)?;
    let rep = probes::dense_orbit_probe(&t, &rat(eps)?).map_err(err)?;
    Ok(rep.to_json().to_string())
}

#[pyfunction]
fn sensitivity_probe(
    seq: &PyMapSequence,
    delta: &str,
    sample_k: u64,
    pert_k: u64,
    horizon: u64,
) -> PyResult<String> {
    let rep = probes::sensitivity_probe(&seq.inner, &rat(delta)?, sample_k, pert_k, horizon)
        .map_err(err)?;
    Ok(rep.to_json().to_string())
}

#[pyfunction]
fn devaney_report(seq: &PyMapSequence) -> PyResult<String> {
    let rep = probes::devaney_report(&seq.inner, &probes::DevaneyParams::default()).map_err(err)?;
    Ok(rep.to_json().to_string())
}

/// Greedy omega-limit clustering of a trajectory tail, as JSON.
#[pyfunction]
fn omega_estimate(
    seq: &PyMapSequence,
    point: &str,
    horizon: u64,
    tail_fraction: &str,
    tol: &str,
) -> PyResult<String> {
    let t = seq.inner.trajectory(&rat(point)?, horizon).map_err(err)?;
    let est = omega_limit_estimate(&t, &rat(tail_fraction)?, &rat(tol)?).map_err(err)?;
    let clusters: Vec<serde_json::Value> = est
        .clusters
        .iter()
        .map(|c| {
            serde_json::json!({
                "representative": c.representative.to_string(),
                "radius": c.radius.to_string(),
            })
        })
        .collect();
    let verdict = match est.verdict {
        ndslab_core::sequence::OmegaVerdict::FiniteAtTolerance => "finite_at_tolerance",
        ndslab_core::sequence::OmegaVerdict::NotFiniteAtTolerance => "not_finite_at_tolerance",
    };
    Ok(serde_json::json!({ "clusters": clusters, "verdict": verdict }).to_string())
}

#[pyfunction]
fn gallery_list() -> Vec<String> {
    gallery::gallery_ids().iter().map(|s| s.to_string()).collect()
}

/// Replay a scenario's expectations; returns a JSON list of results.
#[pyfunction]
fn run_scenario(id: &str) -> PyResult<String> {
    let scenario =
        gallery::build_scenario(id, &gallery::ScenarioParams::default()).map_err(err)?;
    let results = gallery::scenario_expectations(&scenario).map_err(err)?;
    let value: Vec<serde_json::Value> = results.iter().map(|r| r.to_json()).collect();
    Ok(serde_json::Value::Array(value).to_string())
}

#[pyfunction]
fn theorem4_g(n: u64) -> PyPlMap {
    PyPlMap {
        inner: ndslab_core::families::theorem4_g_map(n),
    }
}

#[pyfunction]
fn theorem4_f(n: u64) -> PyPlMap {
    PyPlMap {
        inner: ndslab_core::families::theorem4_f_map(n),
    }
}

/// Exact sup-distance table of g_n to the limit, as (n, "p/q") pairs.
#[pyfunction]
fn convergence_table(n_max: u64) -> Vec<(u64, String)> {
    gallery::convergence_table(n_max)
        .into_iter()
        .map(|(n, d)| (n, d.to_string()))
        .collect()
}

#[pymodule]
fn ndslab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPlMap>()?;
    m.add_class::<PyMapSequence>()?;
    m.add_function(wrap_pyfunction!(check_def1, m)?)?;
    m.add_function(wrap_pyfunction!(check_def2, m)?)?;
    m.add_function(wrap_pyfunction!(check_def3, m)?)?;
    m.add_function(wrap_pyfunction!(check_def4, m)?)?;
    m.add_function(wrap_pyfunction!(check_def5, m)?)?;
    m.add_function(wrap_pyfunction!(limit_cycle_crosscheck, m)?)?;
    m.add_function(wrap_pyfunction!(sharkovsky_precedes, m)?)?;
    m.add_function(wrap_pyfunction!(implication_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(transitivity_probe, m)?)?;
    m.add_function(wrap_pyfunction!(dense_orbit_probe, m)?)?;
    m.add_function(wrap_pyfunction!(sensitivity_probe, m)?)?;
    m.add_function(wrap_pyfunction!(devaney_report, m)?)?;
    m.add_function(wrap_pyfunction!(omega_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(gallery_list, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(theorem4_g, m)?)?;
    m.add_function(wrap_pyfunction!(theorem4_f, m)?)?;
    m.add_function(wrap_pyfunction!(convergence_table, m)?)?;
    Ok(())
}
