//! The one-point blow-up of `ℂ²` and of the projective plane.
//!
//! Removing the open ball `B⁴(λ)` and collapsing its boundary Hopf circles
//! is the same, symplectically, as blowing up with weight `λ`: the map
//! `Φ = π₁⁻¹ ∘ g` with `g(z) = √(|z|² − ℓ) z/|z|`, `ℓ = λ/π`, identifies
//! the complement of the closed ball with the complement of the exceptional
//! sphere, carrying `ω_std` to `ω_λ = π₁*ω_std + ℓ π₂*ω_FS`.
//!
//! Homology classes of the blown-up plane are written `dL − mE`.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::pullback::{darboux_matrix, pullback_residual, FdOptions};
use crate::linalg::{pullback_2form, Mat4, Vec4, ZERO4};
use crate::rational::{format_q, q_str, to_f64, Q};

/// A point of `ℂ²`.
pub type C2 = [Complex64; 2];

pub fn to_real(z: &C2) -> Vec4 {
    [z[0].re, z[0].im, z[1].re, z[1].im]
}

pub fn from_real(x: &Vec4) -> C2 {
    [Complex64::new(x[0], x[1]), Complex64::new(x[2], x[3])]
}

fn norm_sq(z: &C2) -> f64 {
    z[0].norm_sqr() + z[1].norm_sqr()
}

/// `g(z) = √(|z|² − ℓ) z/|z|` for `|z|² > ℓ`, with `ℓ = λ/π`.
pub fn blowup_transition(z: &C2, lam: Q) -> Result<C2> {
    let ell = to_f64(&lam);
    if ell < 0.0 {
        return Err(Error::domain(format!("capacity must be nonnegative, got {}", format_q(&lam))));
    }
    let n2 = norm_sq(z);
    if !(n2 > ell) {
        return Err(Error::domain(format!("|z|² = {n2} is not above the capacity {ell}")));
    }
    let f = ((n2 - ell) / n2).sqrt();
    Ok([z[0] * f, z[1] * f])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChartId {
    /// `(z, w) ↦ (p, [1 : w])` with `p = (z, zw)`.
    One,
    /// `(y, v) ↦ (p, [v : 1])` with `p = (yv, y)`.
    Two,
}

/// A point of the blow-up `{(p, ℓ) : p ∈ ℓ} ⊂ ℂ² × ℙ¹` in an affine chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowupChartPoint {
    pub chart: ChartId,
    pub coords: C2,
}

impl BlowupChartPoint {
    /// The point `(p, [p])` for `p ≠ 0`, in the chart where the slope has
    /// modulus at most one.
    pub fn over(p: &C2) -> Result<Self> {
        if norm_sq(p) == 0.0 {
            return Err(Error::domain("the origin has no well-defined line"));
        }
        Ok(if p[1].norm() <= p[0].norm() {
            BlowupChartPoint { chart: ChartId::One, coords: [p[0], p[1] / p[0]] }
        } else {
            BlowupChartPoint { chart: ChartId::Two, coords: [p[1], p[0] / p[1]] }
        })
    }

    /// The point `(p, [p])` in a prescribed chart.
    pub fn over_in(p: &C2, chart: ChartId) -> Result<Self> {
        let (base, other) = match chart {
            ChartId::One => (p[0], p[1]),
            ChartId::Two => (p[1], p[0]),
        };
        if base.norm() == 0.0 {
            return Err(Error::domain("point outside the chart"));
        }
        Ok(BlowupChartPoint { chart, coords: [base, other / base] })
    }

    /// The point `p ∈ ℂ²`.
    pub fn projection(&self) -> C2 {
        let [a, b] = self.coords;
        match self.chart {
            ChartId::One => [a, a * b],
            ChartId::Two => [a * b, a],
        }
    }

    /// The same point in the other chart; fails on the line at infinity of
    /// this chart's slope.
    pub fn to_other_chart(&self) -> Result<Self> {
        let [a, b] = self.coords;
        if b.norm() == 0.0 {
            return Err(Error::domain("slope zero is outside the other chart"));
        }
        let chart = match self.chart {
            ChartId::One => ChartId::Two,
            ChartId::Two => ChartId::One,
        };
        Ok(BlowupChartPoint { chart, coords: [a * b, b.inv()] })
    }
}

/// `Φ(z) = π₁⁻¹(g(z))`.
pub fn blowup_map(z: &C2, lam: Q) -> Result<BlowupChartPoint> {
    BlowupChartPoint::over(&blowup_transition(z, lam)?)
}

/// Real 2×2 block of multiplication by `c`.
fn mul_block(m: &mut Mat4, row: usize, col: usize, c: Complex64) {
    m[row][col] = c.re;
    m[row][col + 1] = -c.im;
    m[row + 1][col] = c.im;
    m[row + 1][col + 1] = c.re;
}

/// Matrix of `ω_λ` in real chart coordinates `(Re a, Im a, Re b, Im b)`.
pub fn omega_lambda_matrix(pt: &BlowupChartPoint, ell: f64) -> Mat4 {
    let [a, b] = pt.coords;
    let one = Complex64::new(1.0, 0.0);
    let mut jac = ZERO4;
    match pt.chart {
        ChartId::One => {
            mul_block(&mut jac, 0, 0, one);
            mul_block(&mut jac, 2, 0, b);
            mul_block(&mut jac, 2, 2, a);
        }
        ChartId::Two => {
            mul_block(&mut jac, 0, 0, b);
            mul_block(&mut jac, 0, 2, a);
            mul_block(&mut jac, 2, 0, one);
        }
    }
    let mut omega = pullback_2form(&jac, &darboux_matrix());
    let fs = ell / (1.0 + b.norm_sqr()).powi(2);
    omega[2][3] += fs;
    omega[3][2] -= fs;
    omega
}

/// `|Φ*ω_λ − ω_std|` at `z`, differentiating in the chart that contains `Φ(z)`.
pub fn blowup_pullback_residual(z: &C2, lam: Q, opts: &FdOptions) -> Result<f64> {
    let ell = to_f64(&lam);
    let chart = blowup_map(z, lam)?.chart;
    let map = |y: &Vec4| -> Result<Vec4> {
        let g = blowup_transition(&from_real(y), lam)?;
        Ok(to_real(&BlowupChartPoint::over_in(&g, chart)?.coords))
    };
    let target = |c: &Vec4| omega_lambda_matrix(&BlowupChartPoint { chart, coords: from_real(c) }, ell);
    pullback_residual(&map, &to_real(z), target, &darboux_matrix(), opts)
}

/// Outcome of the pullback check over a set of samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShellResidual {
    pub max_residual: f64,
    pub evaluated: usize,
    /// Samples whose stencil would leave the shell.
    pub skipped: Vec<[f64; 4]>,
}

/// `max |Φ*ω_λ − ω_std|` over the samples. The finite-difference step at a
/// sample is `min(step, 10⁻²(|z|² − ℓ))` with a five-point stencil, since
/// the derivatives of `g` grow like powers of `1/(|z|² − ℓ)`.
pub fn omega_lambda_residual(lam: Q, samples: &[C2], step: f64) -> Result<ShellResidual> {
    let ell = to_f64(&lam);
    let mut out = ShellResidual { max_residual: 0.0, evaluated: 0, skipped: vec![] };
    for z in samples {
        let rho = norm_sq(z) - ell;
        if !(rho > 0.0) {
            return Err(Error::domain(format!("sample with |z|² − ℓ = {rho} lies in the removed ball")));
        }
        let h = step.min(1e-2 * rho);
        let x = to_real(z);
        let reach = 2.0 * h * (2.0 * norm_sq(z).sqrt() + 2.0 * h);
        if reach >= rho {
            out.skipped.push(x);
            continue;
        }
        let r = blowup_pullback_residual(z, lam, &FdOptions::central(h).fourth_order())?;
        out.max_residual = out.max_residual.max(r);
        out.evaluated += 1;
    }
    Ok(out)
}

/// `|T*ω_λ − ω_λ|` for the chart transition `T` at a point of chart one
/// with nonzero slope.
pub fn chart_overlap_residual(pt: &BlowupChartPoint, ell: f64, step: f64) -> Result<f64> {
    let map = |c: &Vec4| -> Result<Vec4> {
        let p = BlowupChartPoint { chart: pt.chart, coords: from_real(c) };
        Ok(to_real(&p.to_other_chart()?.coords))
    };
    let other = pt.to_other_chart()?.chart;
    pullback_residual(
        &map,
        &to_real(&pt.coords),
        |c| omega_lambda_matrix(&BlowupChartPoint { chart: other, coords: from_real(c) }, ell),
        &omega_lambda_matrix(pt, ell),
        &FdOptions::central(step).fourth_order(),
    )
}

/// Uniform samples of the shell `ℓ < |z|² < ℓ + δ` by rejection from a cube.
pub fn sample_shell<R: Rng>(lam: Q, delta: Q, n: usize, rng: &mut R) -> Result<Vec<C2>> {
    let (ell, del) = (to_f64(&lam), to_f64(&delta));
    if ell < 0.0 || !(del > 0.0) {
        return Err(Error::domain("shell needs ℓ ≥ 0 and δ > 0"));
    }
    let r = (ell + del).sqrt();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x: Vec4 = [0; 4].map(|_| rng.gen_range(-r..r));
        let z = from_real(&x);
        let n2 = norm_sq(&z);
        if n2 > ell && n2 < ell + del {
            out.push(z);
        }
    }
    Ok(out)
}

/// The class `dL − mE`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HomologyClass {
    pub d: i64,
    pub m: i64,
}

impl HomologyClass {
    pub const fn new(d: i64, m: i64) -> Self {
        HomologyClass { d, m }
    }

    pub const fn line() -> Self {
        HomologyClass::new(1, 0)
    }

    /// `E = 0·L − (−1)E`.
    pub const fn exceptional() -> Self {
        HomologyClass::new(0, -1)
    }

    /// `d − m·λ` in units of `π`.
    pub fn area(&self, lam: Q) -> Q {
        Q::from_integer(self.d) - Q::from_integer(self.m) * lam
    }

    /// `d₁d₂ − m₁m₂`.
    pub fn intersection(&self, other: &HomologyClass) -> i64 {
        self.d * other.d - self.m * other.m
    }

    /// A positive multiple `kE`.
    pub fn is_exceptional_multiple(&self) -> bool {
        self.d == 0 && self.m < 0
    }
}

impl std::ops::Add for HomologyClass {
    type Output = HomologyClass;

    fn add(self, o: HomologyClass) -> HomologyClass {
        HomologyClass::new(self.d + o.d, self.m + o.m)
    }
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |c: i64, sym: &str| match c {
            1 => sym.to_string(),
            -1 => format!("-{sym}"),
            _ => format!("{c}{sym}"),
        };
        match (self.d, self.m) {
            (0, 0) => f.write_str("0"),
            (d, 0) => f.write_str(&term(d, "L")),
            (0, m) => f.write_str(&term(-m, "E")),
            (d, m) if m > 0 => write!(f, "{} - {}", term(d, "L"), term(m, "E")),
            (d, m) => write!(f, "{} + {}", term(d, "L"), term(-m, "E")),
        }
    }
}

/// `(d−1)(d−2)/2 − m(m−1)/2`; an embedded sphere needs this to vanish and
/// any embedded curve needs it nonnegative.
pub fn adjunction_virtual_genus(c: &HomologyClass) -> Q {
    Q::new((c.d - 1) * (c.d - 2) - c.m * (c.m - 1), 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BubbleVerdict {
    Survivor,
    Area,
    Positivity,
    Adjunction,
}

impl BubbleVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            BubbleVerdict::Survivor => "survivor",
            BubbleVerdict::Area => "killed-by-area",
            BubbleVerdict::Positivity => "killed-by-positivity",
            BubbleVerdict::Adjunction => "killed-by-adjunction",
        }
    }
}

/// A decomposition `target = Σ parts` into at least two classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BubbleCandidate {
    /// `k` of the main part `L − kE`.
    pub k: i64,
    pub parts: Vec<HomologyClass>,
    /// Area of the main part.
    #[serde(with = "q_str")]
    pub area: Q,
    #[serde(with = "q_str")]
    pub virtual_genus: Q,
    pub verdict: BubbleVerdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum BubbleMode {
    /// `L − E = (L − kE) + Σ kᵢE` with `Σ kᵢ = k − 1`, one row per `k ≥ 2`
    /// up to the first `k` where `L − kE` has nonpositive area.
    Family,
    /// Every multiset of classes `dL − mE` with `d ∈ {0, 1}`, `|m| ≤ max_m`
    /// and at most `max_parts` parts summing to the target.
    General { max_m: i64, max_parts: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BubbleReport {
    pub target: HomologyClass,
    #[serde(with = "q_str")]
    pub lam: Q,
    #[serde(with = "q_str")]
    pub t: Q,
    pub mode: BubbleMode,
    /// The undecomposed class has positive area and nonnegative genus.
    pub trivial_admissible: bool,
    pub candidates: Vec<BubbleCandidate>,
    pub survivors: Vec<BubbleCandidate>,
}

const MAX_ROWS: i64 = 100_000;
const MAX_NODES: u64 = 5_000_000;

/// Judges one part; multiples of `E` are always represented. Adjunction is
/// tested first since it does not depend on the form.
fn judge_part(c: &HomologyClass, cap: Q) -> BubbleVerdict {
    if c.is_exceptional_multiple() {
        if c.area(cap) > Q::from_integer(0) { BubbleVerdict::Survivor } else { BubbleVerdict::Area }
    } else if c.m < 0 {
        BubbleVerdict::Positivity
    } else if adjunction_virtual_genus(c) < Q::from_integer(0) {
        BubbleVerdict::Adjunction
    } else if c.area(cap) <= Q::from_integer(0) {
        BubbleVerdict::Area
    } else {
        BubbleVerdict::Survivor
    }
}

/// Nontrivial decompositions of `target` into classes of curves for the
/// form with blow-up capacity `lam·t`, with the verdict of area positivity,
/// positivity of intersections with `E` and adjunction.
pub fn enumerate_bubble_decompositions(
    target: HomologyClass,
    lam: Q,
    t: Q,
    mode: BubbleMode,
) -> Result<BubbleReport> {
    let zero = Q::from_integer(0);
    if !(lam > zero) {
        return Err(Error::precondition(format!("λ > 0 fails: λ = {}", format_q(&lam))));
    }
    if !(t > zero && t <= Q::from_integer(1)) {
        return Err(Error::precondition(format!("0 < t ≤ 1 fails: t = {}", format_q(&t))));
    }
    let cap = lam * t;
    let trivial_admissible = judge_part(&target, cap) == BubbleVerdict::Survivor;
    let mut candidates = vec![];
    match mode {
        BubbleMode::Family => {
            if target != HomologyClass::new(1, 1) {
                return Err(Error::precondition(format!("the family decomposes L - E, not {target}")));
            }
            for k in 2.. {
                if k > MAX_ROWS {
                    return Err(Error::Budget(format!("capacity {} needs more than {MAX_ROWS} rows", format_q(&cap))));
                }
                let main = HomologyClass::new(1, k);
                candidates.push(BubbleCandidate {
                    k,
                    parts: vec![main, HomologyClass::new(0, -(k - 1))],
                    area: main.area(cap),
                    virtual_genus: adjunction_virtual_genus(&main),
                    verdict: judge_part(&main, cap),
                });
                if main.area(cap) <= zero {
                    break;
                }
            }
        }
        BubbleMode::General { max_m, max_parts } => {
            let mut classes = vec![];
            for d in 0..=1 {
                for m in -max_m..=max_m {
                    if (d, m) != (0, 0) {
                        classes.push(HomologyClass::new(d, m));
                    }
                }
            }
            let mut cur = vec![];
            let mut search = Search { classes: &classes, max_m, max_parts, nodes: 0 };
            search.run(0, target, &mut cur, &mut |parts| {
                let main = parts.iter().copied().find(|c| c.d == 1).unwrap_or(parts[0]);
                let verdict = parts
                    .iter()
                    .map(|c| judge_part(c, cap))
                    .find(|v| *v != BubbleVerdict::Survivor)
                    .unwrap_or(BubbleVerdict::Survivor);
                candidates.push(BubbleCandidate {
                    k: main.m,
                    parts: parts.to_vec(),
                    area: main.area(cap),
                    virtual_genus: adjunction_virtual_genus(&main),
                    verdict,
                });
            })?;
        }
    }
    let survivors = candidates.iter().filter(|c| c.verdict == BubbleVerdict::Survivor).cloned().collect();
    Ok(BubbleReport { target, lam, t, mode, trivial_admissible, candidates, survivors })
}

struct Search<'a> {
    classes: &'a [HomologyClass],
    max_m: i64,
    max_parts: usize,
    nodes: u64,
}

impl Search<'_> {
    fn run(
        &mut self,
        start: usize,
        rest: HomologyClass,
        cur: &mut Vec<HomologyClass>,
        emit: &mut dyn FnMut(&[HomologyClass]),
    ) -> Result<()> {
        self.nodes += 1;
        if self.nodes > MAX_NODES {
            return Err(Error::Budget(format!("more than {MAX_NODES} partial decompositions")));
        }
        if cur.len() >= 2 && rest == HomologyClass::new(0, 0) {
            emit(cur);
        }
        let left = (self.max_parts - cur.len()) as i64;
        if left == 0 || rest.m.abs() > left * self.max_m {
            return Ok(());
        }
        for i in start..self.classes.len() {
            let c = self.classes[i];
            if c.d > rest.d {
                continue;
            }
            cur.push(c);
            self.run(i, HomologyClass::new(rest.d - c.d, rest.m - c.m), cur, emit)?;
            cur.pop();
        }
        Ok(())
    }
}

/// Pairs of parts with negative intersection number that are not covers of
/// a common class.
pub fn intersection_defects(parts: &[HomologyClass]) -> Vec<(usize, usize)> {
    let same_curve = |a: &HomologyClass, b: &HomologyClass| a.d * b.m == a.m * b.d && a.d * b.d >= 0 && a.m * b.m >= 0;
    let mut out = vec![];
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            if !same_curve(&parts[i], &parts[j]) && parts[i].intersection(&parts[j]) < 0 {
                out.push((i, j));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Packing {
    Admissible,
    Obstructed,
}

/// Two disjoint balls of capacities `r₁²`, `r₂²` (units of `π`) embed in the
/// projective plane only if `r₁² + r₂² ≤ 1`.
pub fn packing_obstruction(r1_sq: Q, r2_sq: Q) -> Result<Packing> {
    let zero = Q::from_integer(0);
    if r1_sq < zero || r2_sq < zero {
        return Err(Error::domain(format!(
            "squared radii must be nonnegative, got {} and {}",
            format_q(&r1_sq),
            format_q(&r2_sq)
        )));
    }
    Ok(if r1_sq + r2_sq <= Q::from_integer(1) { Packing::Admissible } else { Packing::Obstructed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn transition_norm_identity() {
        let z = [c(0.6, 0.2), c(-0.3, 0.4)];
        let g = blowup_transition(&z, q(1, 4)).unwrap();
        assert!((norm_sq(&g) - (norm_sq(&z) - 0.25)).abs() < 1e-15);
        let ratio = g[0] / z[0];
        assert!(ratio.im.abs() < 1e-15 && ratio.re > 0.0);
        assert!(blowup_transition(&[c(0.1, 0.0), c(0.0, 0.0)], q(1, 2)).is_err());
    }

    #[test]
    fn boundary_collapse() {
        let z = [c((0.5f64 + 1e-12).sqrt(), 0.0), c(0.0, 0.0)];
        assert!(norm_sq(&blowup_transition(&z, q(1, 2)).unwrap()) < 1e-11);
    }

    #[test]
    fn circle_equivariance() {
        let z = [c(0.6, 0.2), c(-0.3, 0.4)];
        let u = Complex64::from_polar(1.0, 0.7);
        let a = blowup_transition(&[z[0] * u, z[1] * u], q(1, 3)).unwrap();
        let b = blowup_transition(&z, q(1, 3)).unwrap();
        assert!((a[0] - b[0] * u).norm() < 1e-15 && (a[1] - b[1] * u).norm() < 1e-15);
    }

    #[test]
    fn blowup_is_symplectic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let samples = sample_shell(q(1, 2), q(1, 4), 50, &mut rng).unwrap();
        let r = omega_lambda_residual(q(1, 2), &samples, 1e-3).unwrap();
        assert!(r.max_residual < 1e-6, "{}", r.max_residual);
        assert_eq!(r.evaluated + r.skipped.len(), 50);
        let zero = omega_lambda_residual(q(0, 1), &samples, 1e-3).unwrap();
        assert!(zero.max_residual < 1e-8);
    }

    #[test]
    fn charts_agree_on_overlap() {
        let pt = BlowupChartPoint::over(&[c(0.7, 0.1), c(0.2, -0.5)]).unwrap();
        assert!(chart_overlap_residual(&pt, 0.5, 1e-3).unwrap() < 1e-9);
        let back = pt.to_other_chart().unwrap().to_other_chart().unwrap();
        assert!((back.coords[1] - pt.coords[1]).norm() < 1e-15);
        let p = pt.projection();
        let q2 = pt.to_other_chart().unwrap().projection();
        assert!((p[0] - q2[0]).norm() < 1e-15 && (p[1] - q2[1]).norm() < 1e-15);
    }

    #[test]
    fn genus_values() {
        assert_eq!(adjunction_virtual_genus(&HomologyClass::new(1, 1)), q(0, 1));
        assert_eq!(adjunction_virtual_genus(&HomologyClass::new(2, 1)), q(0, 1));
        for k in 2..6 {
            assert_eq!(adjunction_virtual_genus(&HomologyClass::new(1, k)), q(-k * (k - 1) / 2, 1));
        }
        assert_eq!(HomologyClass::exceptional().area(q(1, 3)), q(1, 3));
        assert_eq!(HomologyClass::new(1, 1).to_string(), "L - E");
        assert_eq!(HomologyClass::new(0, -2).to_string(), "2E");
    }

    #[test]
    fn no_bubbling() {
        let r = enumerate_bubble_decompositions(HomologyClass::new(1, 1), q(1, 2), q(1, 2), BubbleMode::Family)
            .unwrap();
        assert!(r.survivors.is_empty() && r.trivial_admissible);
        assert_eq!(r.candidates[0].k, 2);
        assert_eq!(r.candidates[0].verdict, BubbleVerdict::Adjunction);
        assert!(r.candidates.iter().all(|c| c.verdict == BubbleVerdict::Adjunction));
        assert!(r.candidates.last().unwrap().area <= q(0, 1));
        let g = enumerate_bubble_decompositions(
            HomologyClass::new(1, 1),
            q(1, 2),
            q(1, 2),
            BubbleMode::General { max_m: 3, max_parts: 4 },
        )
        .unwrap();
        assert!(g.survivors.is_empty() && !g.candidates.is_empty());
    }

    #[test]
    fn packing() {
        assert_eq!(packing_obstruction(q(1, 2), q(1, 2)).unwrap(), Packing::Admissible);
        assert_eq!(packing_obstruction(q(1, 2), q(501, 1000)).unwrap(), Packing::Obstructed);
        assert_eq!(packing_obstruction(q(0, 1), q(1, 1)).unwrap(), Packing::Admissible);
        assert!(packing_obstruction(q(-1, 2), q(1, 2)).is_err());
    }
}
