//! Inflation of a germ of symplectic embedding along Liouville flows.
//!
//! A map `φ` defined near the zero-section with `φ*β = λ_ϑ` extends to
//! `Φ = Φ_{X_β}^τ ∘ φ ∘ Φ_{X_ϑ}^{−τ}` on every point that the backward flow
//! of `X_ϑ` carries into the domain of `φ`. The result does not depend on
//! `τ`, nor on `β` away from the image of the domain being inflated.

use std::f64::consts::TAU;

use crate::bundle::{lambda_raw, omega0_matrix, BundleParams, BundlePoint, LiouvilleSpec};
use crate::error::{Error, Result};
use crate::flow::desingular::ConjugationMap;
use crate::flow::liouville::{integrate_flow, FlowRequest, DEFAULT_TOL};
use crate::flow::pullback::{pullback_1form_residual, pullback_residual, FdOptions, BUNDLE_ANGLES};
use crate::linalg::Vec4;

/// A symplectic germ near the zero-section.
#[derive(Debug, Clone, PartialEq)]
pub enum Germ {
    Identity,
    /// `θ ↦ θ + c`.
    FiberRotation(f64),
    /// `φ ↦ φ + c`.
    BaseRotation(f64),
    /// The conjugation map of a perturbed Liouville form.
    Conjugation(Box<ConjugationMap>),
}

impl Germ {
    pub fn apply(&self, p: &BundlePoint) -> Result<BundlePoint> {
        let rotated = |p: BundlePoint| p.normalized();
        match self {
            Germ::Identity => Ok(*p),
            Germ::FiberRotation(c) => Ok(rotated(BundlePoint { theta: p.theta + c, ..*p })),
            Germ::BaseRotation(c) => Ok(rotated(BundlePoint { phi: p.phi + c, ..*p })),
            Germ::Conjugation(psi) => psi.apply(p),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InflationSetup {
    pub params: BundleParams,
    /// `λ_ϑ` on the source.
    pub source: LiouvilleSpec,
    /// `β` on the target model.
    pub target: LiouvilleSpec,
    pub germ: Germ,
    /// The germ is used on `{s < germ_radius}`.
    pub germ_radius: f64,
    pub tol: f64,
}

impl InflationSetup {
    pub fn new(
        params: BundleParams,
        source: LiouvilleSpec,
        target: LiouvilleSpec,
        germ: Germ,
        germ_radius: f64,
    ) -> Result<Self> {
        params.validate()?;
        if source.mu_extra.is_some() {
            return Err(Error::precondition("the source form must be λ₀ + π*ϑ without extra perturbation"));
        }
        if !(germ_radius > 0.0 && params.kf() * germ_radius < 1.0) {
            return Err(Error::precondition(format!(
                "germ radius must satisfy 0 < s₀ < 1/k, got {germ_radius}"
            )));
        }
        Ok(InflationSetup { params, source, target, germ, germ_radius, tol: DEFAULT_TOL * 1e-2 })
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// Open interval of times `τ` with `Φ_{X_ϑ}^{−τ}(x)` in the germ domain
    /// and off the zero-section; `None` when `x` is already in the domain.
    pub fn admissible_times(&self, x: &BundlePoint) -> Result<Option<(f64, f64)>> {
        self.params.check_point(x)?;
        if x.s < self.germ_radius {
            return Ok(None);
        }
        let k = self.params.kf();
        let lo = ((1.0 - k * self.germ_radius) / (1.0 - k * x.s)).ln();
        let hi = -(-k * x.s).ln_1p();
        Ok(Some((lo, hi)))
    }

    fn flow(&self, spec: &LiouvilleSpec, start: BundlePoint, time: f64) -> Result<BundlePoint> {
        integrate_flow(&FlowRequest::new(self.params.clone(), spec.clone(), start, time).with_tol(self.tol))
    }

    /// `Φ(x)`, using the intermediate time `tau` (the midpoint of the
    /// admissible interval when `None`).
    pub fn embed(&self, x: &BundlePoint, tau: Option<f64>) -> Result<BundlePoint> {
        let Some((lo, hi)) = self.admissible_times(x)? else {
            return self.germ.apply(x);
        };
        let tau = tau.unwrap_or(0.5 * (lo + hi));
        if !(tau > lo && tau < hi) {
            return Err(Error::domain(format!(
                "τ = {tau} does not carry the point into the germ domain (admissible ({lo}, {hi}))"
            )));
        }
        let y = self.flow(&self.source, *x, -tau)?;
        let z = self.germ.apply(&y)?;
        self.flow(&self.target, z, tau)
    }

    /// `|φ*β − λ_ϑ|` at a point of the germ domain off the zero-section.
    pub fn compatibility_residual(&self, p: &BundlePoint, step: f64) -> Result<f64> {
        self.params.check_point(p)?;
        if !(p.s > 0.0 && p.s < self.germ_radius) {
            return Err(Error::domain("compatibility is checked on 0 < s < s₀"));
        }
        let k = self.params.kf();
        let map = |x: &Vec4| Ok(self.germ.apply(&BundlePoint::from_array(*x))?.to_array());
        pullback_1form_residual(
            &map,
            &p.to_array(),
            |y| Ok(lambda_raw(k, &self.target, &BundlePoint::from_array(*y))),
            &lambda_raw(k, &self.source, p),
            &FdOptions::central(step).periodic(BUNDLE_ANGLES),
        )
    }

    /// `|Φ*ω₀ − ω₀|` at `x` for a fixed intermediate time.
    pub fn symplectic_residual(&self, x: &BundlePoint, tau: Option<f64>, step: f64) -> Result<f64> {
        let k = self.params.kf();
        let map = |y: &Vec4| Ok(self.embed(&BundlePoint::from_array(*y), tau)?.to_array());
        pullback_residual(
            &map,
            &x.to_array(),
            |y| omega0_matrix(k, &BundlePoint::from_array(*y)),
            &omega0_matrix(k, x),
            &FdOptions::central(step).periodic(BUNDLE_ANGLES),
        )
    }
}

/// Angular distance-aware comparison of two bundle points.
pub fn point_distance(a: &BundlePoint, b: &BundlePoint) -> f64 {
    let wrap = |d: f64| {
        let d = d.rem_euclid(TAU);
        d.min(TAU - d)
    };
    (a.s - b.s)
        .abs()
        .max(wrap(a.theta - b.theta))
        .max((a.area - b.area).abs())
        .max(wrap(a.phi - b.phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::{BaseForm, Cutoff, Potential, PotentialTerm, Trig};
    use crate::rational::q;

    fn params() -> BundleParams {
        BundleParams::disc(1, q(1, 2)).unwrap()
    }

    fn extension(c: f64, lo: f64) -> LiouvilleSpec {
        let h = Potential::new(vec![
            PotentialTerm::new(c).r(2).theta(1, Trig::Sin),
            PotentialTerm::new(0.5 * c).area(1).phi(1, Trig::Cos),
        ])
        .with_fiber_cutoff(Cutoff::new(lo, lo + 0.1).unwrap());
        LiouvilleSpec::with_vartheta(BaseForm::rotation(0.01)).with_mu(h)
    }

    #[test]
    fn germ_domain_uses_the_germ() {
        let setup = InflationSetup::new(
            params(),
            LiouvilleSpec::standard(),
            LiouvilleSpec::standard(),
            Germ::FiberRotation(0.5),
            0.1,
        )
        .unwrap();
        let x = BundlePoint::new(0.05, 1.0, 0.2, 1.0);
        assert_eq!(setup.embed(&x, None).unwrap().theta, 1.5);
    }

    #[test]
    fn independent_of_time_and_extension() {
        let source = LiouvilleSpec::with_vartheta(BaseForm::rotation(0.01));
        let a = InflationSetup::new(params(), source.clone(), extension(0.02, 0.3), Germ::FiberRotation(0.3), 0.05)
            .unwrap();
        let b = InflationSetup::new(params(), source, extension(-0.03, 0.35), Germ::FiberRotation(0.3), 0.05)
            .unwrap();
        let x = BundlePoint::new(0.25, 2.0, 0.2, 1.0);
        let (lo, hi) = a.admissible_times(&x).unwrap().unwrap();
        let p1 = a.embed(&x, Some(lo + 0.2 * (hi - lo))).unwrap();
        let p2 = a.embed(&x, Some(lo + 0.9 * (hi - lo))).unwrap();
        assert!(point_distance(&p1, &p2) < 1e-6);
        assert!(point_distance(&p1, &b.embed(&x, None).unwrap()) < 1e-6);
        let far = BundlePoint::new(0.6, 2.0, 0.2, 1.0);
        assert!(point_distance(&a.embed(&far, None).unwrap(), &b.embed(&far, None).unwrap()) > 1e-4);
        assert!(a.symplectic_residual(&far, None, 1e-4).unwrap() < 1e-4);
        assert!(a.compatibility_residual(&BundlePoint::new(0.02, 1.0, 0.2, 1.0), 1e-5).unwrap() < 1e-8);
    }

    #[test]
    fn inadmissible_time_rejected() {
        let setup = InflationSetup::new(
            params(),
            LiouvilleSpec::standard(),
            LiouvilleSpec::standard(),
            Germ::Identity,
            0.05,
        )
        .unwrap();
        let x = BundlePoint::new(0.5, 0.0, 0.2, 0.0);
        assert!(matches!(setup.embed(&x, Some(0.01)), Err(Error::Domain(_))));
        assert!(setup.embed(&x, Some(10.0)).is_err());
    }

    #[test]
    fn source_perturbation_rejected() {
        let src = LiouvilleSpec::standard().with_mu(Potential::new(vec![PotentialTerm::new(0.1).r(2)]));
        assert!(InflationSetup::new(params(), src, LiouvilleSpec::standard(), Germ::Identity, 0.1).is_err());
    }
}
