//! The action-angle chart identifying the bundle over a disc with an open ellipsoid.
//!
//! `(A, φ, s, θ) ↦ (A₁, φ₁, A₂, φ₂) = (A(1 − ks), φ, s, θ)` maps the bundle
//! over a disc of area `a` onto `E̊(a, 1/k) = {A₁/a + kA₂ < 1}` and pulls
//! `(1/2π)(dA₁∧dφ₁ + dA₂∧dφ₂)` back to `ω₀`.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::bundle::{BaseChart, BundleParams, BundlePoint};
use crate::error::{Error, Result};
use crate::flow::pullback::{pullback_residual, FdOptions, BUNDLE_ANGLES};
use crate::linalg::{Mat4, Vec4, ZERO4};
use crate::rational::{to_f64, Q};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EllipsoidChart {
    pub k: u32,
    #[serde(with = "crate::rational::q_str")]
    pub base_area: Q,
}

/// The standard form `(1/2π)(dA₁∧dφ₁ + dA₂∧dφ₂)` in action-angle coordinates.
pub fn action_angle_matrix() -> Mat4 {
    let c = 1.0 / TAU;
    let mut m = ZERO4;
    m[0][1] = c;
    m[1][0] = -c;
    m[2][3] = c;
    m[3][2] = -c;
    m
}

impl EllipsoidChart {
    pub fn new(params: &BundleParams) -> Result<Self> {
        match params.base {
            BaseChart::Disc { area } => Ok(EllipsoidChart { k: params.k, base_area: area }),
            BaseChart::Sphere => Err(Error::precondition(
                "the ellipsoid chart needs a single disc base chart",
            )),
        }
    }

    /// Axis areas `(a, 1/k)` of the image ellipsoid.
    pub fn axes(&self) -> (Q, Q) {
        (self.base_area, Q::new(1, self.k as i64))
    }

    /// `(A₁, φ₁, A₂, φ₂)` of a bundle point.
    pub fn forward(&self, p: &BundlePoint) -> Vec4 {
        let k = self.k as f64;
        [p.area * (1.0 - k * p.s), p.phi, p.s, p.theta]
    }

    pub fn inverse(&self, y: &Vec4) -> Result<BundlePoint> {
        let k = self.k as f64;
        let f = 1.0 - k * y[2];
        if !(f > 0.0) || y[0] < 0.0 || y[2] < 0.0 {
            return Err(Error::domain(format!("{y:?} is not in the open ellipsoid")));
        }
        Ok(BundlePoint::new(y[2], y[3], y[0] / f, y[1]))
    }

    /// `A₁/a + kA₂`, which is `< 1` exactly on the open ellipsoid.
    pub fn ellipsoid_level(&self, y: &Vec4) -> f64 {
        y[0] / to_f64(&self.base_area) + self.k as f64 * y[2]
    }

    /// Pullback residual `|Ψ*ω_std − ω₀|` at `p`.
    pub fn pullback_residual(&self, p: &BundlePoint, step: f64) -> Result<f64> {
        let map = |x: &Vec4| Ok(self.forward(&BundlePoint::from_array(*x)));
        let reference = crate::bundle::omega0_matrix(self.k as f64, p);
        pullback_residual(
            &map,
            &p.to_array(),
            |_| action_angle_matrix(),
            &reference,
            &FdOptions::central(step).periodic(BUNDLE_ANGLES),
        )
    }
}
