//! Coordinate model of the standard symplectic disc bundle of degree `k`.
//!
//! Points carry coordinates `(s, θ, A, φ)`: `s = r²` is the fiber area
//! coordinate, `θ` the fiber angle, and `(A, φ)` area-angle coordinates on a
//! base disc. Over a disc chart the connection form is trivialized as
//! `α = dθ/2π − (k/2π) A dφ`, so that `dα = −k τ` with `τ = (1/2π) dA∧dφ`,
//! and the symplectic form is
//!
//! ```text
//! ω₀ = (1 − ks) τ + ds∧α
//!    = (1/2π) [ds∧dθ − kA ds∧dφ + (1 − ks) dA∧dφ].
//! ```
//!
//! Fibers have total area `1/k` and the base chart area `a`, both in units of `π`.

pub mod chart;
pub mod convexity;
pub mod forms;
pub mod karshon;

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{bilinear, Mat4, Vec4, ZERO4};
use crate::rational::{q_str, real_str, to_f64, Q};

pub use chart::EllipsoidChart;
pub use convexity::{convexity_check, Convexity, DomainSpec};
pub use forms::{BaseForm, Cutoff, LiouvilleSpec, Potential, PotentialTerm, Trig};
pub use karshon::{karshon_model, KarshonModel};

/// Base of the bundle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseChart {
    /// A disc of the given area.
    Disc {
        #[serde(with = "q_str")]
        area: Q,
    },
    /// The sphere of area 1. A single chart covers the sphere minus one
    /// pole, i.e. a disc of area 1.
    Sphere,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleParams {
    pub k: u32,
    pub base: BaseChart,
}

impl BundleParams {
    pub fn new(k: u32, base: BaseChart) -> Result<Self> {
        let p = BundleParams { k, base };
        p.validate()?;
        Ok(p)
    }

    pub fn disc(k: u32, area: Q) -> Result<Self> {
        Self::new(k, BaseChart::Disc { area })
    }

    pub fn sphere(k: u32) -> Result<Self> {
        Self::new(k, BaseChart::Sphere)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Config("bundle degree k must be at least 1".into()));
        }
        if let BaseChart::Disc { area } = &self.base {
            if *area <= Q::from_integer(0) {
                return Err(Error::Config(format!("base area must be positive, got {area}")));
            }
        }
        Ok(())
    }

    pub fn kf(&self) -> f64 {
        self.k as f64
    }

    /// Area of the base chart.
    pub fn base_area(&self) -> Q {
        match &self.base {
            BaseChart::Disc { area } => *area,
            BaseChart::Sphere => Q::from_integer(1),
        }
    }

    pub fn base_area_f64(&self) -> f64 {
        to_f64(&self.base_area())
    }

    /// Supremum of the fiber coordinate, `1/k`.
    pub fn fiber_capacity(&self) -> f64 {
        1.0 / self.kf()
    }

    /// Checks `0 ≤ s < 1/k` and `0 ≤ A < a`.
    pub fn check_point(&self, p: &BundlePoint) -> Result<()> {
        if !p.to_array().iter().all(|x| x.is_finite()) {
            return Err(Error::domain(format!("non-finite coordinates {p:?}")));
        }
        if p.s < 0.0 || self.kf() * p.s >= 1.0 {
            return Err(Error::domain(format!(
                "fiber coordinate s={} outside [0, 1/{})",
                p.s, self.k
            )));
        }
        let a = self.base_area_f64();
        if p.area < 0.0 || p.area >= a {
            return Err(Error::domain(format!(
                "base coordinate A={} outside [0, {a})",
                p.area
            )));
        }
        Ok(())
    }
}

/// A point `(s, θ, A, φ)` of the bundle. Points with `s = 0` lie on the
/// zero-section; their `θ` is the coordinate of the blown-up model.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BundlePoint {
    #[serde(with = "real_str")]
    pub s: f64,
    #[serde(with = "real_str")]
    pub theta: f64,
    #[serde(with = "real_str")]
    pub area: f64,
    #[serde(with = "real_str")]
    pub phi: f64,
}

fn wrap_angle(x: f64) -> f64 {
    let w = x.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

impl BundlePoint {
    pub fn new(s: f64, theta: f64, area: f64, phi: f64) -> Self {
        BundlePoint { s, theta, area, phi }
    }

    /// Coordinates in the order `(s, θ, A, φ)`.
    pub fn to_array(&self) -> Vec4 {
        [self.s, self.theta, self.area, self.phi]
    }

    pub fn from_array(x: Vec4) -> Self {
        BundlePoint { s: x[0], theta: x[1], area: x[2], phi: x[3] }
    }

    /// The same point with both angles reduced to `[0, 2π)`.
    pub fn normalized(&self) -> Self {
        BundlePoint {
            theta: wrap_angle(self.theta),
            phi: wrap_angle(self.phi),
            ..*self
        }
    }

    pub fn r(&self) -> f64 {
        self.s.max(0.0).sqrt()
    }

    /// Cartesian coordinates `(x, y, u, v)` with `x + iy = r e^{iθ}` and
    /// `u + iv = √A e^{iφ}`. Smooth across the zero-section and the base
    /// center, which makes it the right frame for distances.
    pub fn cartesian(&self) -> Vec4 {
        let r = self.r();
        let rho = self.area.max(0.0).sqrt();
        [
            r * self.theta.cos(),
            r * self.theta.sin(),
            rho * self.phi.cos(),
            rho * self.phi.sin(),
        ]
    }

    pub fn cartesian_distance(&self, other: &BundlePoint) -> f64 {
        let a = self.cartesian();
        let b = other.cartesian();
        a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
    }
}

/// Components `(ds, dθ, dA, dφ)` of a tangent vector.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TangentVector(pub Vec4);

impl TangentVector {
    pub fn new(ds: f64, dtheta: f64, darea: f64, dphi: f64) -> Self {
        TangentVector([ds, dtheta, darea, dphi])
    }

    pub fn basis(i: usize) -> Self {
        let mut v = [0.0; 4];
        v[i] = 1.0;
        TangentVector(v)
    }

    pub fn ds(&self) -> f64 {
        self.0[0]
    }

    pub fn dtheta(&self) -> f64 {
        self.0[1]
    }

    pub fn darea(&self) -> f64 {
        self.0[2]
    }

    pub fn dphi(&self) -> f64 {
        self.0[3]
    }
}

fn check_vector(p: &BundlePoint, v: &TangentVector) -> Result<()> {
    if !v.0.iter().all(|x| x.is_finite()) {
        return Err(Error::domain("non-finite tangent vector"));
    }
    if p.s == 0.0 && v.dtheta() != 0.0 {
        return Err(Error::domain(
            "the fiber angle is undefined on the zero-section; dθ must vanish there",
        ));
    }
    Ok(())
}

/// Matrix `Ω_ij = ω₀(e_i, e_j)` in the basis `(∂s, ∂θ, ∂A, ∂φ)`.
pub fn omega0_matrix(k: f64, p: &BundlePoint) -> Mat4 {
    let c = 1.0 / TAU;
    let ka = k * p.area * c;
    let fa = (1.0 - k * p.s) * c;
    let mut m = ZERO4;
    m[0][1] = c;
    m[1][0] = -c;
    m[0][3] = -ka;
    m[3][0] = ka;
    m[2][3] = fa;
    m[3][2] = -fa;
    m
}

/// `ω₀_p(u, v)`.
pub fn omega0_at(
    params: &BundleParams,
    p: &BundlePoint,
    u: &TangentVector,
    v: &TangentVector,
) -> Result<f64> {
    params.check_point(p)?;
    check_vector(p, u)?;
    check_vector(p, v)?;
    Ok(bilinear(&omega0_matrix(params.kf(), p), &u.0, &v.0))
}

/// Components of `λ₀ + π*ϑ + μ` in the basis `(ds, dθ, dA, dφ)` at a point
/// with `s > 0`. No domain check beyond `s > 0`.
pub(crate) fn lambda_raw(k: f64, spec: &LiouvilleSpec, p: &BundlePoint) -> Vec4 {
    let r = p.s.sqrt();
    let f = 1.0 - k * p.s;
    let pert = spec.perturbation(r, p.theta, p.area, p.phi);
    [
        pert.dr / (2.0 * r),
        f / (TAU * k) + pert.dtheta,
        pert.da,
        -f * p.area / TAU + pert.dphi,
    ]
}

/// Components of `λ_ϑ` at `p`.
pub fn lambda_components(
    params: &BundleParams,
    spec: &LiouvilleSpec,
    p: &BundlePoint,
) -> Result<Vec4> {
    params.check_point(p)?;
    if p.s == 0.0 {
        return Err(Error::Singular(
            "the Liouville form is not defined on the zero-section".into(),
        ));
    }
    Ok(lambda_raw(params.kf(), spec, p))
}

/// `λ_ϑ(v)` at `p`.
pub fn lambda_at(
    params: &BundleParams,
    spec: &LiouvilleSpec,
    p: &BundlePoint,
    v: &TangentVector,
) -> Result<f64> {
    let l = lambda_components(params, spec, p)?;
    check_vector(p, v)?;
    Ok((0..4).map(|i| l[i] * v.0[i]).sum())
}

/// The vector `X` with `ω₀(X, ·) = l` for a covector `l = (l_s, l_θ, l_A, l_φ)`.
pub fn dual_vector(k: f64, p: &BundlePoint, l: &Vec4) -> Vec4 {
    let f = 1.0 - k * p.s;
    let x_s = TAU * l[1];
    let x_phi = -TAU * l[2] / f;
    let x_a = (TAU * l[3] + k * p.area * x_s) / f;
    let x_theta = k * p.area * x_phi - TAU * l[0];
    [x_s, x_theta, x_a, x_phi]
}

pub(crate) fn field_raw(k: f64, spec: &LiouvilleSpec, p: &BundlePoint) -> Vec4 {
    dual_vector(k, p, &lambda_raw(k, spec, p))
}

/// The Liouville vector field of `λ_ϑ`, dual to it under `ω₀`.
pub fn liouville_field(
    params: &BundleParams,
    spec: &LiouvilleSpec,
    p: &BundlePoint,
) -> Result<TangentVector> {
    let l = lambda_components(params, spec, p)?;
    Ok(TangentVector(dual_vector(params.kf(), p, &l)))
}

/// `max_e |ω₀(X, e) − λ(e)|` over the coordinate basis.
pub fn liouville_residual(
    params: &BundleParams,
    spec: &LiouvilleSpec,
    p: &BundlePoint,
) -> Result<f64> {
    let x = liouville_field(params, spec, p)?;
    let l = lambda_components(params, spec, p)?;
    let om = omega0_matrix(params.kf(), p);
    Ok((0..4)
        .map(|j| (bilinear(&om, &x.0, &TangentVector::basis(j).0) - l[j]).abs())
        .fold(0.0, f64::max))
}

/// `|dλ + ω₀|` at `p` with `dλ` computed by central differences of step `h`.
pub fn exterior_derivative_residual(
    params: &BundleParams,
    spec: &LiouvilleSpec,
    p: &BundlePoint,
    h: f64,
) -> Result<f64> {
    params.check_point(p)?;
    if p.s <= h {
        return Err(Error::Singular("stencil reaches the zero-section".into()));
    }
    let k = params.kf();
    let x = p.to_array();
    // dl[i][j] = ∂_i λ_j
    let mut dl = ZERO4;
    for (i, row) in dl.iter_mut().enumerate() {
        let mut xp = x;
        let mut xm = x;
        xp[i] += h;
        xm[i] -= h;
        let lp = lambda_raw(k, spec, &BundlePoint::from_array(xp));
        let lm = lambda_raw(k, spec, &BundlePoint::from_array(xm));
        for j in 0..4 {
            row[j] = (lp[j] - lm[j]) / (2.0 * h);
        }
    }
    let om = omega0_matrix(k, p);
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((dl[i][j] - dl[j][i] + om[i][j]).abs());
        }
    }
    Ok(worst)
}

/// `1/2π`, the value of `ω₀` on `(∂s, ∂θ)`.
pub const FIBER_DENSITY: f64 = 1.0 / (2.0 * PI);
