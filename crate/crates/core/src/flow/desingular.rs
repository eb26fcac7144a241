//! The flow of `X` through the zero-section.
//!
//! In blown-up coordinates `(r, θ, A, φ)` the Liouville field `X` of
//! `λ₀ + μ` is singular at `r = 0`, but `rX` extends smoothly:
//!
//! ```text
//! rX_r = (1 − kr²)/2k + π μ_θ
//! rX_θ = r·kA·Y_φ − π μ_r
//! rX_A = 2π r (μ_φ + kA μ_θ)/(1 − kr²)
//! rX_φ = r·Y_φ,          Y_φ = −2π μ_A/(1 − kr²)
//! ```
//!
//! where `μ = μ_r dr + μ_θ dθ + μ_A dA + μ_φ dφ` collects every perturbation
//! of `λ₀`. Flowing `rX` for time `u` advances the flow of `X` by
//! `∫₀ᵘ r du'`, so the flow of `X` for time `t` from a point of the
//! zero-section is the flow of `rX` for the unique `τ` with `∫₀^τ r = t`.

use std::f64::consts::{PI, TAU};

use crate::bundle::{lambda_raw, omega0_matrix, BundleParams, BundlePoint, LiouvilleSpec};
use crate::error::{Error, Result};
use crate::flow::liouville::{reach_time, DEFAULT_GUARD, DEFAULT_TOL};
use crate::flow::pullback::{pullback_1form_residual, pullback_residual, FdOptions, BUNDLE_ANGLES};
use crate::flow::rk::{integrate, Control, RkOptions};
use crate::linalg::Vec4;

/// The field `rX` in coordinates `(r, θ, A, φ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DesingularizedField {
    pub k: f64,
    pub spec: LiouvilleSpec,
    pub base_area: f64,
}

impl DesingularizedField {
    pub fn new(params: &BundleParams, spec: &LiouvilleSpec) -> Self {
        DesingularizedField { k: params.kf(), spec: spec.clone(), base_area: params.base_area_f64() }
    }

    pub fn eval(&self, y: &Vec4) -> Result<Vec4> {
        let [r, theta, a, phi] = *y;
        let f = 1.0 - self.k * r * r;
        if r < 0.0 || f <= self.k * DEFAULT_GUARD {
            return Err(Error::domain(format!("r = {r} outside the fiber range")));
        }
        if a < 0.0 || a >= self.base_area {
            return Err(Error::domain(format!("left the base chart (A = {a})")));
        }
        let mu = self.spec.perturbation(r, theta, a, phi);
        let y_phi = -TAU * mu.da / f;
        Ok([
            f / (2.0 * self.k) + PI * mu.dtheta,
            r * self.k * a * y_phi - PI * mu.dr,
            TAU * r * (mu.dphi + self.k * a * mu.dtheta) / f,
            r * y_phi,
        ])
    }
}

/// Start on the zero-section and the flow time of `X` to reach.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RescaleProblem {
    pub theta: f64,
    pub area: f64,
    pub phi: f64,
    pub target_time: f64,
}

impl RescaleProblem {
    pub fn new(theta: f64, area: f64, phi: f64, target_time: f64) -> Result<Self> {
        if !(target_time >= 0.0) || !target_time.is_finite() {
            return Err(Error::domain(format!("target time must be finite and ≥ 0, got {target_time}")));
        }
        Ok(RescaleProblem { theta, area, phi, target_time })
    }
}

type State = [f64; 5];

fn augmented(field: &DesingularizedField) -> impl Fn(f64, &State) -> Result<State> + '_ {
    move |_, y| {
        let v = field.eval(&[y[0], y[1], y[2], y[3]])?;
        Ok([v[0], v[1], v[2], v[3], y[0]])
    }
}

fn advance(field: &DesingularizedField, y: &State, du: f64, opts: &RkOptions) -> Result<State> {
    Ok(integrate(augmented(field), 0.0, *y, du, opts, |_, _| Control::Continue)?.y)
}

/// Flows `rX` from the zero-section until `∫ r du` reaches the target time.
/// Returns the rescaled time `τ` and the end point in bundle coordinates.
pub fn flow_to_time(
    field: &DesingularizedField,
    problem: &RescaleProblem,
    tol: f64,
) -> Result<(f64, BundlePoint)> {
    let t = problem.target_time;
    let y0: State = [0.0, problem.theta, problem.area, problem.phi, 0.0];
    let to_point = |y: &State| BundlePoint::new(y[0] * y[0], y[1], y[2], y[3]);
    if t == 0.0 {
        return Ok((0.0, to_point(&y0)));
    }
    let opts = RkOptions::with_tol(tol);
    // ∫ r du grows at least like the unperturbed 2 ln cosh(u/2√k) for small
    // perturbations; this horizon leaves ample room.
    let sk = field.k.sqrt();
    let horizon = 10.0 * (2.0 * sk * (t / 2.0).exp().acosh()) + 10.0;
    let mut prev = (0.0, y0);
    let mut bracket = None;
    let out = integrate(augmented(field), 0.0, y0, horizon, &opts, |u, y| {
        if y[4] >= t {
            bracket = Some((prev, (u, *y)));
            Control::Stop
        } else {
            prev = (u, *y);
            Control::Continue
        }
    });
    match out {
        Err(Error::Domain(m)) => return Err(Error::escape(m, vec![])),
        Err(e) => return Err(e),
        Ok(_) => {}
    }
    let ((u0, ya), (u1, yb)) = bracket.ok_or_else(|| {
        Error::escape(format!("accumulated time stayed below {t} up to u = {horizon}"), vec![])
    })?;
    // Safeguarded Newton on g(δ) = I(u0 + δ) − t with g' = r.
    let tight = RkOptions::with_tol(tol);
    let (mut lo, mut hi) = (0.0, u1 - u0);
    let mut delta = hi * (t - ya[4]) / (yb[4] - ya[4]);
    if !(delta > lo && delta < hi) {
        delta = 0.5 * (lo + hi);
    }
    let mut y = advance(field, &ya, delta, &tight)?;
    for _ in 0..60 {
        let g = y[4] - t;
        if g == 0.0 {
            break;
        }
        if g < 0.0 {
            lo = delta;
        } else {
            hi = delta;
        }
        let mut next = if y[0] > 0.0 { delta - g / y[0] } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let done = (next - delta).abs() <= 1e-13 * (1.0 + u0 + delta);
        delta = next;
        y = advance(field, &ya, delta, &tight)?;
        if done {
            break;
        }
    }
    Ok((u0 + delta, to_point(&y)))
}

/// The unique `τ ≥ 0` with `∫₀^τ r(Φ_{rX}^u) du = t`.
pub fn rescaled_time(problem: &RescaleProblem, field: &DesingularizedField, tol: f64) -> Result<f64> {
    Ok(flow_to_time(field, problem, tol)?.0)
}

/// The map `Ψ` sending the trajectories of `X₀` to those of `X`: a point at
/// flow time `t` from `(0, θ, A, φ)` along `X₀` goes to the point at time
/// `t` from the same zero-section point along `X`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugationMap {
    pub params: BundleParams,
    pub spec: LiouvilleSpec,
    pub tol: f64,
    field: DesingularizedField,
}

impl ConjugationMap {
    pub fn new(params: &BundleParams, spec: &LiouvilleSpec) -> Self {
        ConjugationMap {
            params: params.clone(),
            spec: spec.clone(),
            tol: DEFAULT_TOL * 1e-2,
            field: DesingularizedField::new(params, spec),
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// `Ψ(p)`. Exactly the identity when the form is unperturbed.
    pub fn apply(&self, p: &BundlePoint) -> Result<BundlePoint> {
        self.params.check_point(p)?;
        if self.spec.is_unperturbed() {
            return Ok(*p);
        }
        self.apply_via_flow(p)
    }

    /// `Ψ(p)` computed through the desingularized flow even when the form is
    /// unperturbed.
    pub fn apply_via_flow(&self, p: &BundlePoint) -> Result<BundlePoint> {
        self.params.check_point(p)?;
        let t = reach_time(&self.params, p)?;
        let problem = RescaleProblem::new(p.theta, p.area, p.phi, t)?;
        Ok(flow_to_time(&self.field, &problem, self.tol)?.1)
    }

    fn as_map(&self) -> impl Fn(&Vec4) -> Result<Vec4> + '_ {
        move |x| Ok(self.apply(&BundlePoint::from_array(*x))?.to_array())
    }

    /// `|Ψ*ω₀ − ω₀|` at `p`.
    pub fn symplectic_residual(&self, p: &BundlePoint, step: f64) -> Result<f64> {
        let k = self.params.kf();
        pullback_residual(
            &self.as_map(),
            &p.to_array(),
            |y| omega0_matrix(k, &BundlePoint::from_array(*y)),
            &omega0_matrix(k, p),
            &FdOptions::central(step).periodic(BUNDLE_ANGLES),
        )
    }

    /// `|Ψ*λ − λ₀|` at `p`, where `λ` is the perturbed form.
    pub fn form_residual(&self, p: &BundlePoint, step: f64) -> Result<f64> {
        let k = self.params.kf();
        let reference = lambda_raw(k, &LiouvilleSpec::standard(), p);
        pullback_1form_residual(
            &self.as_map(),
            &p.to_array(),
            |y| {
                let q = BundlePoint::from_array(*y);
                if q.s <= 0.0 {
                    return Err(Error::Singular("image on the zero-section".into()));
                }
                Ok(lambda_raw(k, &self.spec, &q))
            },
            &reference,
            &FdOptions::central(step).periodic(BUNDLE_ANGLES),
        )
    }

    /// `r(Ψ(p))/r(p)`.
    pub fn radial_ratio(&self, p: &BundlePoint) -> Result<f64> {
        Ok(self.apply(p)?.r() / p.r())
    }

    /// `|Ψ(p) − p|/√s`, measured in the Cartesian frame.
    pub fn tangency_ratio(&self, p: &BundlePoint) -> Result<f64> {
        Ok(self.apply(p)?.cartesian_distance(p) / p.r())
    }
}
