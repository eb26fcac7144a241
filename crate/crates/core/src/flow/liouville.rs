//! Flow of the Liouville field `X_ϑ` in coordinates `(s, θ, A, φ)`.
//!
//! For `ϑ = 0` the field is `((1 − ks)/k) ∂s`, whose flow from the
//! zero-section is `s(t) = (1 − e^{−t})/k`. In general the fiber coordinate
//! still obeys `ṡ = (1 − ks)/k` as long as the perturbation has no
//! `θ`-dependence, while the base point drifts along the field dual to `ϑ`.

use serde::{Deserialize, Serialize};

use crate::bundle::{field_raw, omega0_matrix, BundleParams, BundlePoint, LiouvilleSpec};
use crate::error::{Error, Result, TrajectorySample};
use crate::flow::desingular::{flow_to_time, DesingularizedField, RescaleProblem};
use crate::flow::pullback::{pullback_residual, FdOptions, BUNDLE_ANGLES};
use crate::flow::rk::{integrate, Control, RkOptions};
use crate::linalg::{scale, Vec4};
use crate::rational::real_str;

/// Default relative step tolerance of the integrator.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Trajectories may not come closer than this to the bundle boundary `s = 1/k`.
pub const DEFAULT_GUARD: f64 = 1e-6;

/// Closed-form flow of `X₀` for time `t ≥ 0`:
/// `s(t) = (1 − (1 − ks₀) e^{−t})/k`, other coordinates fixed.
pub fn flow_closed_form(params: &BundleParams, t: f64, start: &BundlePoint) -> Result<BundlePoint> {
    params.check_point(start)?;
    if !(t >= 0.0) {
        return Err(Error::domain(format!(
            "negative time {t}: the backward flow leaves through the zero-section"
        )));
    }
    let k = params.kf();
    let s = if t.is_infinite() {
        1.0 / k
    } else {
        // 1 − (1 − ks₀)e^{−t} = −expm1(−t) + ks₀e^{−t}
        (-(-t).exp_m1() + k * start.s * (-t).exp()) / k
    };
    Ok(BundlePoint { s, ..*start })
}

/// Time for the flow of `X₀` to carry the zero-section to `p`: `−ln(1 − ks)`.
pub fn reach_time(params: &BundleParams, p: &BundlePoint) -> Result<f64> {
    params.check_point(p)?;
    Ok(-(-params.kf() * p.s).ln_1p())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowRequest {
    pub params: BundleParams,
    #[serde(default)]
    pub spec: LiouvilleSpec,
    pub start: BundlePoint,
    #[serde(with = "real_str")]
    pub time: f64,
    #[serde(with = "real_str", default = "default_tol")]
    pub tol: f64,
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

impl FlowRequest {
    pub fn new(params: BundleParams, spec: LiouvilleSpec, start: BundlePoint, time: f64) -> Self {
        FlowRequest { params, spec, start, time, tol: DEFAULT_TOL }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

struct Guard {
    k: f64,
    base_area: f64,
    eps: f64,
}

impl Guard {
    fn new(params: &BundleParams) -> Self {
        Guard { k: params.kf(), base_area: params.base_area_f64(), eps: DEFAULT_GUARD }
    }

    fn violation(&self, y: &Vec4) -> Option<String> {
        if y[0] <= 0.0 {
            Some(format!("reached the zero-section (s = {})", y[0]))
        } else if y[0] >= 1.0 / self.k - self.eps {
            Some(format!("reached the guard band of the bundle boundary (s = {})", y[0]))
        } else if y[2] < 0.0 || y[2] >= self.base_area {
            Some(format!("left the base chart (A = {})", y[2]))
        } else {
            None
        }
    }
}

/// Integrates `X_ϑ` and records every accepted step. Starting points on the
/// zero-section are moved off it with the desingularized flow.
pub fn integrate_trajectory(req: &FlowRequest) -> Result<Vec<TrajectorySample>> {
    let params = &req.params;
    params.validate()?;
    params.check_point(&req.start)?;
    if !(req.tol > 0.0) {
        return Err(Error::Config(format!("tolerance must be positive, got {}", req.tol)));
    }
    if req.start.s == 0.0 {
        if req.time < 0.0 {
            return Err(Error::domain(
                "negative time from the zero-section leaves the bundle",
            ));
        }
        let end = flow_from_zero_section(req)?;
        return Ok(vec![
            TrajectorySample { t: 0.0, point: req.start },
            TrajectorySample { t: req.time, point: end },
        ]);
    }
    let k = params.kf();
    let guard = Guard::new(params);
    let spec = &req.spec;
    let mut samples = vec![TrajectorySample { t: 0.0, point: req.start }];
    let mut escaped: Option<String> = None;
    let rhs = |_: f64, y: &Vec4| {
        if y[0] <= 0.0 || k * y[0] >= 1.0 {
            return Err(Error::domain("stage left the fiber range"));
        }
        Ok(field_raw(k, spec, &BundlePoint::from_array(*y)))
    };
    let out = integrate(
        rhs,
        0.0,
        req.start.to_array(),
        req.time,
        &RkOptions::with_tol(req.tol),
        |t, y| {
            samples.push(TrajectorySample { t, point: BundlePoint::from_array(*y) });
            match guard.violation(y) {
                Some(reason) => {
                    escaped = Some(reason);
                    Control::Stop
                }
                None => Control::Continue,
            }
        },
    );
    let partial = |samples: &Vec<TrajectorySample>| {
        samples.iter().map(|s| TrajectorySample { t: s.t, point: s.point.normalized() }).collect()
    };
    match out {
        Err(Error::Domain(msg)) => Err(Error::escape(msg, partial(&samples))),
        Err(e) => Err(e),
        Ok(_) => match escaped {
            Some(reason) => Err(Error::escape(reason, partial(&samples))),
            None => Ok(partial(&samples)),
        },
    }
}

fn flow_from_zero_section(req: &FlowRequest) -> Result<BundlePoint> {
    let field = DesingularizedField::new(&req.params, &req.spec);
    let problem = RescaleProblem::new(req.start.theta, req.start.area, req.start.phi, req.time)?;
    let (_, end) = flow_to_time(&field, &problem, req.tol * 1e-2)?;
    req.params.check_point(&end).map_err(|e| Error::escape(e.to_string(), vec![]))?;
    Ok(end.normalized())
}

/// End point of the flow of `X_ϑ` for time `req.time`.
pub fn integrate_flow(req: &FlowRequest) -> Result<BundlePoint> {
    let traj = integrate_trajectory(req)?;
    Ok(traj.last().map(|s| s.point).unwrap_or(req.start))
}

/// `|(Φᵗ)*ω₀ − e^{−t} ω₀|` at `p`, with the Jacobian of the flow map taken
/// by central differences of the given step.
pub fn flow_scaling_residual(req: &FlowRequest, step: f64) -> Result<f64> {
    let k = req.params.kf();
    let map = |x: &Vec4| {
        let r = FlowRequest { start: BundlePoint::from_array(*x), ..req.clone() };
        Ok(integrate_flow(&r)?.to_array())
    };
    let reference = scale(&omega0_matrix(k, &req.start), (-req.time).exp());
    pullback_residual(
        &map,
        &req.start.to_array(),
        |y| omega0_matrix(k, &BundlePoint::from_array(*y)),
        &reference,
        &FdOptions::central(step).periodic(BUNDLE_ANGLES),
    )
}
