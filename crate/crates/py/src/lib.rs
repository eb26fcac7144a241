//! Python bindings: ellipsoid Reeb data, building classification, Liouville
//! flows and blow-up bookkeeping.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use llab_core::blowup::{
    blowup_pullback_residual, blowup_transition, enumerate_bubble_decompositions, packing_obstruction, BubbleMode,
    HomologyClass, Packing,
};
use llab_core::bundle::{BundleParams, BundlePoint, LiouvilleSpec};
use llab_core::flow::pullback::FdOptions;
use llab_core::flow::{flow_closed_form, integrate_flow, FlowRequest};
use llab_core::rational::{format_q, parse_q};
use llab_core::reeb::{self, Axis};
use llab_core::report::to_json;
use llab_core::sft::{self, EnumerationRequest};
use llab_core::{Error, Q};

create_exception!(llab, LlabError, PyException, "A computation failed: bad domain, violated precondition, escape or budget.");

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Config(_) => PyValueError::new_err(e.to_string()),
        other => LlabError::new_err(other.to_string()),
    }
}

fn q_arg(text: &str) -> PyResult<Q> {
    parse_q(text).map_err(py_err)
}

fn axis_arg(text: &str) -> PyResult<Axis> {
    match text {
        "-" | "minus" => Ok(Axis::Minus),
        "+" | "plus" => Ok(Axis::Plus),
        _ => Err(PyValueError::new_err(format!("axis must be 'minus' or 'plus', got {text:?}"))),
    }
}

/// Ellipsoid boundary with areas `a_plus ≥ a_minus` given as rationals.
#[pyclass(module = "llab", frozen, from_py_object)]
#[derive(Clone)]
struct EllipsoidSpec {
    inner: reeb::EllipsoidSpec,
}

#[pymethods]
impl EllipsoidSpec {
    #[new]
    fn new(a_plus: &str, a_minus: &str) -> PyResult<Self> {
        let inner = reeb::EllipsoidSpec::new(q_arg(a_plus)?, q_arg(a_minus)?).map_err(py_err)?;
        Ok(EllipsoidSpec { inner })
    }

    #[getter]
    fn a_plus(&self) -> String {
        format_q(&self.inner.a_plus)
    }

    #[getter]
    fn a_minus(&self) -> String {
        format_q(&self.inner.a_minus)
    }

    /// Conley–Zehnder index of the `mult`-fold cover of the orbit on `axis`.
    fn cz_index(&self, axis: &str, mult: u32) -> PyResult<i64> {
        reeb::cz_index(&self.inner, axis_arg(axis)?, mult).map_err(py_err)
    }

    /// `(axis, mult, action, cz)` for every orbit of action at most `cap`.
    fn orbits(&self, cap: &str) -> PyResult<Vec<(String, u32, String, i64)>> {
        let orbits = reeb::orbits_up_to_action(&self.inner, q_arg(cap)?).map_err(py_err)?;
        Ok(orbits.iter().map(|o| (o.axis.as_str().to_string(), o.mult, format_q(&o.action), o.cz)).collect())
    }

    fn __repr__(&self) -> String {
        format!("EllipsoidSpec('{}', '{}')", self.a_plus(), self.a_minus())
    }
}

fn punctures(orbits: &[String], sign: sft::Sign) -> PyResult<Vec<sft::Puncture>> {
    orbits
        .iter()
        .map(|t| {
            let o = llab_core::cli::parse_orbit(t).map_err(py_err)?;
            Ok(match sign {
                sft::Sign::Positive => sft::Puncture::positive(o),
                sft::Sign::Negative => sft::Puncture::negative(o),
            })
        })
        .collect()
}

/// Virtual dimension of a curve with `points` constraints; `side` is
/// `"inside"` (positive ends) or `"outside"` (negative ends, degree `degree`).
#[pyfunction]
#[pyo3(signature = (spec, side, orbits, points=0, degree=1))]
fn virtdim(spec: &EllipsoidSpec, side: &str, orbits: Vec<String>, points: u32, degree: u32) -> PyResult<i64> {
    match side {
        "inside" => sft::virtdim_inside(&spec.inner, &punctures(&orbits, sft::Sign::Positive)?, points),
        "outside" => sft::virtdim_outside(&spec.inner, &punctures(&orbits, sft::Sign::Negative)?, points, degree),
        _ => return Err(PyValueError::new_err(format!("side must be 'inside' or 'outside', got {side:?}"))),
    }
    .map_err(py_err)
}

/// Classification of the degenerate limits of a line (`"line"`) or a conic
/// (`"conic"`), as a JSON document.
#[pyfunction]
#[pyo3(signature = (spec, kind, epsilon=None))]
fn classify(spec: &EllipsoidSpec, kind: &str, epsilon: Option<&str>) -> PyResult<String> {
    let report = match kind {
        "line" => sft::classify_line_degeneration(&spec.inner),
        "conic" => sft::classify_conic_degeneration(&spec.inner, epsilon.map(q_arg).transpose()?),
        _ => return Err(PyValueError::new_err(format!("kind must be 'line' or 'conic', got {kind:?}"))),
    }
    .map_err(py_err)?;
    Ok(to_json(&report))
}

/// Canonical keys of the buildings surviving every filter.
#[pyfunction]
#[pyo3(signature = (spec, degree, points_inside, points_outside, mult_cap=None))]
fn buildings(
    spec: &EllipsoidSpec,
    degree: u32,
    points_inside: u32,
    points_outside: u32,
    mult_cap: Option<u32>,
) -> PyResult<Vec<String>> {
    let mut req = EnumerationRequest::new(degree, points_inside, points_outside);
    if let Some(cap) = mult_cap {
        req = req.with_mult_cap(cap);
    }
    Ok(sft::enumerate_buildings(&spec.inner, &req).map_err(py_err)?.survivor_keys())
}

type Point = (f64, f64, f64, f64);

/// Time-`time` Liouville flow of `(s, θ, A, φ)` on the degree-`k` bundle
/// over the disc of area `base_area`; `exact` uses the closed form.
#[pyfunction]
#[pyo3(signature = (start, time, k=1, base_area="1/2", exact=false))]
fn flow(start: Point, time: f64, k: u32, base_area: &str, exact: bool) -> PyResult<Point> {
    let params = BundleParams::disc(k, q_arg(base_area)?).map_err(py_err)?;
    let p = BundlePoint::new(start.0, start.1, start.2, start.3);
    let end = if exact {
        flow_closed_form(&params, time, &p)
    } else {
        integrate_flow(&FlowRequest::new(params, LiouvilleSpec::standard(), p, time))
    }
    .map_err(py_err)?;
    Ok((end.s, end.theta, end.area, end.phi))
}

/// The map `z ↦ √(|z|² − λ)·z/|z|` off the ball of capacity `λ`.
#[pyfunction]
fn blowup(z: (Complex64, Complex64), lam: &str) -> PyResult<(Complex64, Complex64)> {
    let g = blowup_transition(&[z.0, z.1], q_arg(lam)?).map_err(py_err)?;
    Ok((g[0], g[1]))
}

/// Largest entry of the pulled-back form minus the blown-up form at `z`.
#[pyfunction]
#[pyo3(signature = (z, lam, step=1e-4))]
fn blowup_residual(z: (Complex64, Complex64), lam: &str, step: f64) -> PyResult<f64> {
    blowup_pullback_residual(&[z.0, z.1], q_arg(lam)?, &FdOptions::central(step).fourth_order()).map_err(py_err)
}

/// `(k, area, virtual_genus, verdict)` for the decompositions of `L − E`
/// into `L − kE` and `(k − 1)E`.
#[pyfunction]
#[pyo3(signature = (lam, t="1"))]
fn bubbles(lam: &str, t: &str) -> PyResult<Vec<(i64, String, String, String)>> {
    let rep = enumerate_bubble_decompositions(HomologyClass::new(1, 1), q_arg(lam)?, q_arg(t)?, BubbleMode::Family)
        .map_err(py_err)?;
    Ok(rep
        .candidates
        .iter()
        .map(|c| (c.k, format_q(&c.area), format_q(&c.virtual_genus), c.verdict.as_str().to_string()))
        .collect())
}

/// Whether two balls of the given squared radii pack into the plane.
#[pyfunction]
fn packing(r1_sq: &str, r2_sq: &str) -> PyResult<bool> {
    Ok(packing_obstruction(q_arg(r1_sq)?, q_arg(r2_sq)?).map_err(py_err)? == Packing::Admissible)
}

/// Runs the command line with `args` (without the program name) and
/// returns its exit code.
#[pyfunction]
fn run_cli(args: Vec<String>) -> i32 {
    llab_core::cli::run(std::iter::once("llab".to_string()).chain(args))
}

#[pymodule]
fn llab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("LlabError", m.py().get_type::<LlabError>())?;
    m.add_class::<EllipsoidSpec>()?;
    m.add_function(wrap_pyfunction!(virtdim, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(buildings, m)?)?;
    m.add_function(wrap_pyfunction!(flow, m)?)?;
    m.add_function(wrap_pyfunction!(blowup, m)?)?;
    m.add_function(wrap_pyfunction!(blowup_residual, m)?)?;
    m.add_function(wrap_pyfunction!(bubbles, m)?)?;
    m.add_function(wrap_pyfunction!(packing, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
