//! Liouville-convexity of domains given as sublevel sets `{F < 0}`.
//!
//! A domain is convex for `λ_ϑ` when the Liouville field exits through the
//! boundary, `dF(X_ϑ) > 0` at every boundary point. Boundaries are sampled
//! on an explicit parameterization, away from the zero-section where the
//! field is not defined.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::bundle::{liouville_field, BundleParams, BundlePoint, LiouvilleSpec};
use crate::error::{Error, Result};
use crate::linalg::Vec4;
use crate::rational::real_str;

/// Built-in boundary families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", deny_unknown_fields)]
pub enum DomainSpec {
    /// Preimage under the ellipsoid chart of `A₁/(a c₁) + kA₂/c₂ ≤ 1`.
    StraightEllipsoid {
        #[serde(with = "real_str")]
        c1: f64,
        #[serde(with = "real_str")]
        c2: f64,
    },
    /// `A/(a c₁) + ((s − s_c)/w)² ≤ 1`: a lens centered away from the
    /// zero-section whose lower half faces against the radial flow.
    ShearedEllipsoid {
        #[serde(with = "real_str")]
        c1: f64,
        #[serde(with = "real_str")]
        s_center: f64,
        #[serde(with = "real_str")]
        width: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum Convexity {
    Convex {
        /// Smallest `dF(X)` over the samples.
        #[serde(with = "real_str")]
        min_value: f64,
        samples: usize,
    },
    NotConvex {
        witness: BundlePoint,
        #[serde(with = "real_str")]
        value: f64,
    },
}

impl Convexity {
    pub fn is_convex(&self) -> bool {
        matches!(self, Convexity::Convex { .. })
    }
}

fn in_unit(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must lie in (0, 1), got {x}")))
    }
}

impl DomainSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            DomainSpec::StraightEllipsoid { c1, c2 } => {
                in_unit("c1", c1)?;
                in_unit("c2", c2)
            }
            DomainSpec::ShearedEllipsoid { c1, s_center, width } => {
                in_unit("c1", c1)?;
                if !(width > 0.0 && s_center > 0.0) {
                    return Err(Error::Config("sheared domain needs positive s_center and width".into()));
                }
                Ok(())
            }
        }
    }

    /// Value of the defining function.
    pub fn level(&self, params: &BundleParams, p: &BundlePoint) -> f64 {
        let a = params.base_area_f64();
        let k = params.kf();
        match *self {
            DomainSpec::StraightEllipsoid { c1, c2 } => {
                p.area * (1.0 - k * p.s) / (a * c1) + k * p.s / c2 - 1.0
            }
            DomainSpec::ShearedEllipsoid { c1, s_center, width } => {
                let u = (p.s - s_center) / width;
                p.area / (a * c1) + u * u - 1.0
            }
        }
    }

    /// `dF` in the basis `(ds, dθ, dA, dφ)`.
    pub fn gradient(&self, params: &BundleParams, p: &BundlePoint) -> Vec4 {
        let a = params.base_area_f64();
        let k = params.kf();
        match *self {
            DomainSpec::StraightEllipsoid { c1, c2 } => [
                -k * p.area / (a * c1) + k / c2,
                0.0,
                (1.0 - k * p.s) / (a * c1),
                0.0,
            ],
            DomainSpec::ShearedEllipsoid { c1, s_center, width } => [
                2.0 * (p.s - s_center) / (width * width),
                0.0,
                1.0 / (a * c1),
                0.0,
            ],
        }
    }

    /// Boundary points on an `n × n × n` grid in (fiber parameter, θ, φ).
    /// Every sample has `s > 0`; samples outside the bundle are an error.
    pub fn sample_boundary(&self, params: &BundleParams, n: usize) -> Result<Vec<BundlePoint>> {
        self.validate()?;
        let n = n.max(2);
        let a = params.base_area_f64();
        let k = params.kf();
        let mut fiber = Vec::with_capacity(n);
        for i in 0..n {
            let t = (i as f64 + 0.5) / n as f64;
            let (s, area) = match *self {
                DomainSpec::StraightEllipsoid { c1, c2 } => {
                    let s = t * c2 / k;
                    (s, a * c1 * (1.0 - k * s / c2) / (1.0 - k * s))
                }
                DomainSpec::ShearedEllipsoid { c1, s_center, width } => {
                    let lo = (s_center - width).max(0.0);
                    let s = lo + t * (s_center + width - lo);
                    let u = (s - s_center) / width;
                    (s, a * c1 * (1.0 - u * u))
                }
            };
            fiber.push((s, area));
        }
        let mut out = Vec::with_capacity(n * n * n);
        for &(s, area) in &fiber {
            for j in 0..n {
                let theta = TAU * j as f64 / n as f64;
                for l in 0..n {
                    let phi = TAU * l as f64 / n as f64;
                    let p = BundlePoint::new(s, theta, area, phi);
                    params.check_point(&p).map_err(|e| {
                        Error::domain(format!("boundary sample leaves the bundle: {e}"))
                    })?;
                    out.push(p);
                }
            }
        }
        Ok(out)
    }
}

/// Tests `dF(X_ϑ) > 0` on the sampled boundary. The first sample attaining
/// the minimum is the witness when the test fails.
pub fn convexity_check(
    params: &BundleParams,
    spec: &LiouvilleSpec,
    domain: &DomainSpec,
    resolution: usize,
) -> Result<Convexity> {
    let samples = domain.sample_boundary(params, resolution)?;
    let mut worst = (f64::INFINITY, BundlePoint::default());
    for p in &samples {
        let x = liouville_field(params, spec, p)?;
        let g = domain.gradient(params, p);
        let v: f64 = (0..4).map(|i| g[i] * x.0[i]).sum();
        if v < worst.0 {
            worst = (v, *p);
        }
    }
    if worst.0 > 0.0 {
        Ok(Convexity::Convex { min_value: worst.0, samples: samples.len() })
    } else {
        Ok(Convexity::NotConvex { witness: worst.1, value: worst.0 })
    }
}
