//! Closed 1-forms used to perturb the standard Liouville form.
//!
//! A base form `ϑ = c_A dA + c_φ dφ` lives on the base disc; a perturbation
//! `μ = dh` lives on the complement of the zero-section and is given through
//! its potential `h`. Potentials are finite sums of monomials
//! `c · rᵖ · trig(nθ) · A^q · trig(mφ)` times optional smooth cutoffs in `s`
//! and in `A`, where `r = √s` is the fiber radius.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::real_str;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Trig {
    #[default]
    Cos,
    Sin,
}

impl Trig {
    fn eval(self, freq: i32, x: f64) -> (f64, f64) {
        let n = freq as f64;
        match self {
            Trig::Cos => ((n * x).cos(), -n * (n * x).sin()),
            Trig::Sin => ((n * x).sin(), n * (n * x).cos()),
        }
    }
}

/// `xᵖ` and its derivative, with `0⁰ = 1`.
fn power(x: f64, p: u32) -> (f64, f64) {
    match p {
        0 => (1.0, 0.0),
        1 => (x, 1.0),
        _ => (x.powi(p as i32), p as f64 * x.powi(p as i32 - 1)),
    }
}

/// One monomial `coef · r^r_power · trig(nθ) · A^area_power · trig(mφ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialTerm {
    #[serde(with = "real_str")]
    pub coef: f64,
    #[serde(default)]
    pub r_power: u32,
    #[serde(default)]
    pub theta_freq: i32,
    #[serde(default)]
    pub theta_trig: Trig,
    #[serde(default)]
    pub area_power: u32,
    #[serde(default)]
    pub phi_freq: i32,
    #[serde(default)]
    pub phi_trig: Trig,
}

impl PotentialTerm {
    pub fn new(coef: f64) -> Self {
        PotentialTerm {
            coef,
            r_power: 0,
            theta_freq: 0,
            theta_trig: Trig::Cos,
            area_power: 0,
            phi_freq: 0,
            phi_trig: Trig::Cos,
        }
    }

    pub fn r(mut self, p: u32) -> Self {
        self.r_power = p;
        self
    }

    pub fn theta(mut self, freq: i32, trig: Trig) -> Self {
        self.theta_freq = freq;
        self.theta_trig = trig;
        self
    }

    pub fn area(mut self, q: u32) -> Self {
        self.area_power = q;
        self
    }

    pub fn phi(mut self, freq: i32, trig: Trig) -> Self {
        self.phi_freq = freq;
        self.phi_trig = trig;
        self
    }

    fn is_base_only(&self) -> bool {
        self.r_power == 0 && (self.theta_freq == 0 && self.theta_trig == Trig::Cos)
    }

    /// Value and partials `(h, ∂r, ∂θ, ∂A, ∂φ)`.
    fn jet(&self, r: f64, theta: f64, a: f64, phi: f64) -> [f64; 5] {
        let (rv, rd) = power(r, self.r_power);
        let (tv, td) = self.theta_trig.eval(self.theta_freq, theta);
        let (av, ad) = power(a, self.area_power);
        let (fv, fd) = self.phi_trig.eval(self.phi_freq, phi);
        let c = self.coef;
        [
            c * rv * tv * av * fv,
            c * rd * tv * av * fv,
            c * rv * td * av * fv,
            c * rv * tv * ad * fv,
            c * rv * tv * av * fd,
        ]
    }
}

/// Quintic smooth step: 0 below `lo`, 1 above `hi`, `C²` in between.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cutoff {
    #[serde(with = "real_str")]
    pub lo: f64,
    #[serde(with = "real_str")]
    pub hi: f64,
}

impl Cutoff {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Config(format!("cutoff needs lo < hi, got [{lo}, {hi}]")));
        }
        Ok(Cutoff { lo, hi })
    }

    /// Value and derivative.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        if x <= self.lo {
            return (0.0, 0.0);
        }
        if x >= self.hi {
            return (1.0, 0.0);
        }
        let w = self.hi - self.lo;
        let u = (x - self.lo) / w;
        let v = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
        let dv = 30.0 * u * u * (1.0 - u) * (1.0 - u) / w;
        (v, dv)
    }
}

/// A function `h(r, θ, A, φ)` on the disc bundle, given as a finite sum of
/// monomials with optional cutoffs.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Potential {
    pub terms: Vec<PotentialTerm>,
    /// Rising cutoff in the fiber coordinate `s = r²`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fiber_cutoff: Option<Cutoff>,
    /// Rising cutoff in the base area coordinate `A`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_cutoff: Option<Cutoff>,
}

/// Value and first partials of a potential in blow-up coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PotentialJet {
    pub h: f64,
    pub dr: f64,
    pub dtheta: f64,
    pub da: f64,
    pub dphi: f64,
}

impl Potential {
    pub fn new(terms: Vec<PotentialTerm>) -> Self {
        Potential { terms, fiber_cutoff: None, base_cutoff: None }
    }

    pub fn with_fiber_cutoff(mut self, c: Cutoff) -> Self {
        self.fiber_cutoff = Some(c);
        self
    }

    pub fn with_base_cutoff(mut self, c: Cutoff) -> Self {
        self.base_cutoff = Some(c);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coef == 0.0)
    }

    pub fn is_base_only(&self) -> bool {
        self.fiber_cutoff.is_none() && self.terms.iter().all(PotentialTerm::is_base_only)
    }

    pub fn jet(&self, r: f64, theta: f64, a: f64, phi: f64) -> PotentialJet {
        let mut raw = [0.0; 5];
        for t in &self.terms {
            let j = t.jet(r, theta, a, phi);
            for (acc, x) in raw.iter_mut().zip(j) {
                *acc += x;
            }
        }
        let (fs, dfs) = self.fiber_cutoff.map_or((1.0, 0.0), |c| c.eval(r * r));
        let (fa, dfa) = self.base_cutoff.map_or((1.0, 0.0), |c| c.eval(a));
        let w = fs * fa;
        PotentialJet {
            h: w * raw[0],
            dr: w * raw[1] + dfs * 2.0 * r * fa * raw[0],
            dtheta: w * raw[2],
            da: w * raw[3] + fs * dfa * raw[0],
            dphi: w * raw[4],
        }
    }
}

/// `coef · A^area_power · trig(mφ)`, a coefficient function on the base.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseMonomial {
    #[serde(with = "real_str")]
    pub coef: f64,
    #[serde(default)]
    pub area_power: u32,
    #[serde(default)]
    pub phi_freq: i32,
    #[serde(default)]
    pub phi_trig: Trig,
}

impl BaseMonomial {
    fn eval(&self, a: f64, phi: f64) -> f64 {
        let (av, _) = power(a, self.area_power);
        let (fv, _) = self.phi_trig.eval(self.phi_freq, phi);
        self.coef * av * fv
    }
}

/// A 1-form `ϑ = c_A dA + c_φ dφ` on the base chart.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum BaseForm {
    #[default]
    Zero,
    /// `ϑ = dh` for a potential depending on the base coordinates only.
    Exact { potential: Potential },
    /// Explicit coefficient functions; closedness is checked on a grid.
    Components {
        c_area: Vec<BaseMonomial>,
        c_phi: Vec<BaseMonomial>,
    },
}

impl BaseForm {
    /// `ϑ = c·dA`, which generates a rigid rotation of the base disc.
    pub fn rotation(c: f64) -> Self {
        BaseForm::Exact { potential: Potential::new(vec![PotentialTerm::new(c).area(1)]) }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            BaseForm::Zero => true,
            BaseForm::Exact { potential } => potential.is_zero(),
            BaseForm::Components { c_area, c_phi } => {
                c_area.iter().chain(c_phi).all(|m| m.coef == 0.0)
            }
        }
    }

    /// `(c_A, c_φ)` at a base point.
    pub fn coefficients(&self, a: f64, phi: f64) -> (f64, f64) {
        match self {
            BaseForm::Zero => (0.0, 0.0),
            BaseForm::Exact { potential } => {
                let j = potential.jet(0.0, 0.0, a, phi);
                (j.da, j.dphi)
            }
            BaseForm::Components { c_area, c_phi } => (
                c_area.iter().map(|m| m.eval(a, phi)).sum(),
                c_phi.iter().map(|m| m.eval(a, phi)).sum(),
            ),
        }
    }

    /// Largest `|∂c_φ/∂A − ∂c_A/∂φ|` over a grid of the base disc of area
    /// `base_area`, by central differences.
    pub fn closedness_defect(&self, base_area: f64, grid: usize) -> f64 {
        let h = 1e-5 * base_area.max(1e-3);
        let mut worst: f64 = 0.0;
        let n = grid.max(2);
        for i in 0..n {
            let a = base_area * (i as f64 + 0.5) / n as f64;
            for j in 0..n {
                let phi = std::f64::consts::TAU * j as f64 / n as f64;
                let dcphi_da = (self.coefficients(a + h, phi).1
                    - self.coefficients(a - h, phi).1)
                    / (2.0 * h);
                let dca_dphi = (self.coefficients(a, phi + h).0
                    - self.coefficients(a, phi - h).0)
                    / (2.0 * h);
                worst = worst.max((dcphi_da - dca_dphi).abs());
            }
        }
        worst
    }
}

/// A Liouville form `λ₀ + π*ϑ + μ` on the disc bundle minus its zero-section.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiouvilleSpec {
    #[serde(default)]
    pub vartheta: BaseForm,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_extra: Option<Potential>,
}

/// The perturbation `π*ϑ + μ` in blow-up coordinates `(r, θ, A, φ)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Perturbation {
    pub dr: f64,
    pub dtheta: f64,
    pub da: f64,
    pub dphi: f64,
}

impl LiouvilleSpec {
    pub fn standard() -> Self {
        LiouvilleSpec::default()
    }

    pub fn with_vartheta(vartheta: BaseForm) -> Self {
        LiouvilleSpec { vartheta, mu_extra: None }
    }

    pub fn with_mu(mut self, mu: Potential) -> Self {
        self.mu_extra = Some(mu);
        self
    }

    /// True when the form is exactly `λ₀`.
    pub fn is_unperturbed(&self) -> bool {
        self.vartheta.is_zero() && self.mu_extra.as_ref().is_none_or(Potential::is_zero)
    }

    pub fn perturbation(&self, r: f64, theta: f64, a: f64, phi: f64) -> Perturbation {
        let (ca, cphi) = self.vartheta.coefficients(a, phi);
        let mut out = Perturbation { dr: 0.0, dtheta: 0.0, da: ca, dphi: cphi };
        if let Some(mu) = &self.mu_extra {
            let j = mu.jet(r, theta, a, phi);
            out.dr += j.dr;
            out.dtheta += j.dtheta;
            out.da += j.da;
            out.dphi += j.dphi;
        }
        out
    }

    /// Pointwise norm of the perturbation in the frame `(∂r, ∂θ/r, ∂A, ∂φ)`.
    pub fn perturbation_norm(&self, r: f64, theta: f64, a: f64, phi: f64) -> f64 {
        let p = self.perturbation(r, theta, a, phi);
        let angular = if r > 0.0 { p.dtheta / r } else if p.dtheta == 0.0 { 0.0 } else { f64::INFINITY };
        (p.dr * p.dr + angular * angular + p.da * p.da + p.dphi * p.dphi).sqrt()
    }

    /// Supremum of [`Self::perturbation_norm`] over a grid of the region
    /// `s ∈ (0, s_max]`, `A ∈ (0, base_area)`.
    pub fn perturbation_sup(&self, s_max: f64, base_area: f64, grid: usize) -> f64 {
        let n = grid.max(2);
        let mut sup: f64 = 0.0;
        for i in 0..n {
            // geometric in s to resolve the neighbourhood of the zero-section
            let s = s_max * 10f64.powf(-8.0 * i as f64 / (n - 1) as f64);
            let r = s.sqrt();
            for j in 0..n {
                let theta = std::f64::consts::TAU * j as f64 / n as f64;
                for l in 0..n {
                    let a = base_area * (l as f64 + 0.5) / n as f64;
                    let phi = std::f64::consts::TAU * ((l + j) % n) as f64 / n as f64;
                    sup = sup.max(self.perturbation_norm(r, theta, a, phi));
                }
            }
        }
        sup
    }

    /// Checks closedness of `ϑ` and boundedness of `μ` near the zero-section.
    ///
    /// Boundedness is tested by comparing the supremum over the shells
    /// `s ≤ 10⁻⁶` with the supremum over `s ∈ [10⁻², 10⁻¹]`: a form with a
    /// `dθ` component blows up like `1/r` and fails by orders of magnitude.
    pub fn validate(&self, base_area: f64, grid: usize, tol: f64) -> Result<()> {
        let defect = self.vartheta.closedness_defect(base_area, grid);
        if defect > tol {
            return Err(Error::Config(format!(
                "vartheta is not closed: |dϑ| reaches {defect:.3e} > {tol:.1e}"
            )));
        }
        if let BaseForm::Exact { potential } = &self.vartheta {
            if !potential.is_base_only() {
                return Err(Error::Config(
                    "vartheta potential must depend on the base coordinates only".into(),
                ));
            }
        }
        if self.mu_extra.is_some() {
            let n = grid.max(4);
            let shell_sup = |s: f64| {
                let r = s.sqrt();
                let mut sup: f64 = 0.0;
                for j in 0..n {
                    let theta = std::f64::consts::TAU * j as f64 / n as f64;
                    for l in 0..n {
                        let a = base_area * (l as f64 + 0.5) / n as f64;
                        let phi = std::f64::consts::TAU * l as f64 / n as f64;
                        sup = sup.max(self.perturbation_norm(r, theta, a, phi));
                    }
                }
                sup
            };
            let outer = shell_sup(1e-1).max(shell_sup(1e-2));
            let inner = [1e-6, 1e-8, 1e-10].into_iter().map(shell_sup).fold(0.0, f64::max);
            if !inner.is_finite() || inner > 10.0 * outer + 1.0 {
                return Err(Error::Config(format!(
                    "mu_extra is not bounded near the zero-section (sup {inner:.3e} near s=0 vs {outer:.3e} away)"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_is_monotone_and_flat_at_ends() {
        let c = Cutoff::new(0.2, 0.4).unwrap();
        assert_eq!(c.eval(0.1), (0.0, 0.0));
        assert_eq!(c.eval(0.5), (1.0, 0.0));
        let mut prev = 0.0;
        for i in 0..=100 {
            let x = 0.2 + 0.2 * i as f64 / 100.0;
            let (v, d) = c.eval(x);
            assert!(v >= prev - 1e-15 && d >= 0.0);
            prev = v;
        }
        assert!((c.eval(0.3).0 - 0.5).abs() < 1e-12);
        assert!(Cutoff::new(0.4, 0.2).is_err());
    }

    #[test]
    fn potential_partials_match_finite_differences() {
        let pot = Potential::new(vec![
            PotentialTerm::new(0.3).r(1).theta(1, Trig::Cos),
            PotentialTerm::new(-0.2).r(2).theta(2, Trig::Sin).area(1).phi(1, Trig::Cos),
            PotentialTerm::new(0.7).area(2).phi(3, Trig::Sin),
        ])
        .with_fiber_cutoff(Cutoff::new(0.05, 0.3).unwrap())
        .with_base_cutoff(Cutoff::new(0.1, 0.2).unwrap());
        let x = [0.37, 0.8, 0.15, -1.1];
        let j = pot.jet(x[0], x[1], x[2], x[3]);
        let h = 1e-6;
        let fd = |i: usize| {
            let mut xp = x;
            let mut xm = x;
            xp[i] += h;
            xm[i] -= h;
            (pot.jet(xp[0], xp[1], xp[2], xp[3]).h - pot.jet(xm[0], xm[1], xm[2], xm[3]).h)
                / (2.0 * h)
        };
        assert!((j.dr - fd(0)).abs() < 1e-8);
        assert!((j.dtheta - fd(1)).abs() < 1e-8);
        assert!((j.da - fd(2)).abs() < 1e-8);
        assert!((j.dphi - fd(3)).abs() < 1e-8);
    }

    #[test]
    fn exact_forms_are_closed_and_components_can_fail() {
        let exact = BaseForm::Exact {
            potential: Potential::new(vec![PotentialTerm::new(0.4).area(2).phi(2, Trig::Cos)]),
        };
        assert!(exact.closedness_defect(0.5, 16) < 1e-6);
        // ϑ = A dφ is not closed: dϑ = dA∧dφ.
        let open = BaseForm::Components {
            c_area: vec![],
            c_phi: vec![BaseMonomial { coef: 1.0, area_power: 1, phi_freq: 0, phi_trig: Trig::Cos }],
        };
        assert!((open.closedness_defect(0.5, 8) - 1.0).abs() < 1e-6);
        assert!(LiouvilleSpec::with_vartheta(open).validate(0.5, 8, 1e-6).is_err());
    }

    #[test]
    fn boundedness_rejects_angular_forms() {
        // h = ε θ-dependence without a radial factor: μ has a dθ component.
        let bad = LiouvilleSpec::standard()
            .with_mu(Potential::new(vec![PotentialTerm::new(0.01).theta(1, Trig::Cos)]));
        assert!(bad.validate(0.5, 8, 1e-6).is_err());
        let good = LiouvilleSpec::standard()
            .with_mu(Potential::new(vec![PotentialTerm::new(0.01).r(1).theta(1, Trig::Cos)]));
        good.validate(0.5, 8, 1e-6).unwrap();
    }

    #[test]
    fn rotation_form_coefficients() {
        let f = BaseForm::rotation(0.25);
        assert_eq!(f.coefficients(0.3, 1.0), (0.25, 0.0));
        assert!(!f.is_zero());
        assert!(BaseForm::Zero.is_zero());
    }
}
