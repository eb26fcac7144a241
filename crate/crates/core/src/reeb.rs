//! Closed Reeb orbits on the boundary of a four-dimensional ellipsoid.
//!
//! For irrational axis ratios the only closed orbits are the two axis
//! circles `γ₊`, `γ₋` of actions `a₊`, `a₋` and their iterates. The
//! Conley–Zehnder index of the `k`-fold iterate of `γᵢ` is
//! `2(k + ⌊k aᵢ/aⱼ⌋) + 1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{floor_q, format_q, is_integer, is_positive, parse_q_list, q_str, Q};

/// Axis of an ellipsoid orbit. `Minus` sorts first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Minus,
    Plus,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::Minus => Axis::Plus,
            Axis::Plus => Axis::Minus,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Axis::Minus => "minus",
            Axis::Plus => "plus",
        }
    }

    fn symbol(self) -> char {
        match self {
            Axis::Minus => '-',
            Axis::Plus => '+',
        }
    }
}

/// `E(a₊, a₋)` with exact axis areas in units of `π`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EllipsoidSpec {
    #[serde(with = "q_str")]
    pub a_plus: Q,
    #[serde(with = "q_str")]
    pub a_minus: Q,
}

impl EllipsoidSpec {
    pub fn new(a_plus: Q, a_minus: Q) -> Result<Self> {
        let spec = EllipsoidSpec { a_plus, a_minus };
        spec.validate()?;
        Ok(spec)
    }

    /// Parses `"a₊,a₋"`, for instance `"17/10,41/100"`.
    pub fn parse(text: &str) -> Result<Self> {
        match parse_q_list(text)?.as_slice() {
            [p, m] => Self::new(*p, *m),
            _ => Err(Error::Config(format!("expected \"a_plus,a_minus\", got {text:?}"))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !is_positive(&self.a_minus) {
            return Err(Error::precondition(format!("a_- > 0 fails: a_- = {}", format_q(&self.a_minus))));
        }
        if self.a_minus > self.a_plus {
            return Err(Error::precondition(format!(
                "a_- ≤ a_+ fails: {} > {}",
                format_q(&self.a_minus),
                format_q(&self.a_plus)
            )));
        }
        Ok(())
    }

    pub fn area(&self, axis: Axis) -> Q {
        match axis {
            Axis::Minus => self.a_minus,
            Axis::Plus => self.a_plus,
        }
    }
}

impl fmt::Display for EllipsoidSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", format_q(&self.a_plus), format_q(&self.a_minus))
    }
}

/// The `mult`-fold iterate of an axis orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReebOrbit {
    pub axis: Axis,
    pub mult: u32,
    #[serde(with = "q_str")]
    pub action: Q,
    pub cz: i64,
}

impl ReebOrbit {
    pub fn new(spec: &EllipsoidSpec, axis: Axis, mult: u32) -> Result<Self> {
        Ok(ReebOrbit { axis, mult, action: orbit_action(spec, axis, mult), cz: cz_index(spec, axis, mult)? })
    }

    /// Short label such as `γ-` or `3γ+`.
    pub fn label(&self) -> String {
        orbit_label(self.axis, self.mult)
    }
}

pub fn orbit_label(axis: Axis, mult: u32) -> String {
    if mult == 1 {
        format!("γ{}", axis.symbol())
    } else {
        format!("{mult}γ{}", axis.symbol())
    }
}

/// `2(mult + ⌊mult·a_axis/a_other⌋) + 1`.
pub fn cz_index(spec: &EllipsoidSpec, axis: Axis, mult: u32) -> Result<i64> {
    spec.validate()?;
    if mult == 0 {
        return Err(Error::domain("orbit multiplicity must be ≥ 1"));
    }
    let ratio = Q::from_integer(mult as i64) * spec.area(axis) / spec.area(axis.other());
    if is_integer(&ratio) {
        return Err(Error::Degenerate(format!(
            "{} on E({spec}): {mult}·a_{}/a_{} = {} is an integer",
            orbit_label(axis, mult),
            axis.symbol(),
            axis.other().symbol(),
            format_q(&ratio)
        )));
    }
    Ok(2 * (mult as i64 + floor_q(&ratio)) + 1)
}

/// `mult · a_axis`.
pub fn orbit_action(spec: &EllipsoidSpec, axis: Axis, mult: u32) -> Q {
    Q::from_integer(mult as i64) * spec.area(axis)
}

/// Every orbit of action at most `cap`, sorted by action then axis.
pub fn orbits_up_to_action(spec: &EllipsoidSpec, cap: Q) -> Result<Vec<ReebOrbit>> {
    spec.validate()?;
    if !is_positive(&cap) {
        return Err(Error::domain(format!("action cap must be positive, got {}", format_q(&cap))));
    }
    let mut out = Vec::new();
    for axis in [Axis::Minus, Axis::Plus] {
        let top = floor_q(&(cap / spec.area(axis)));
        for mult in 1..=top as u32 {
            out.push(ReebOrbit::new(spec, axis, mult)?);
        }
    }
    out.sort_by(|a, b| a.action.cmp(&b.action).then(a.axis.cmp(&b.axis)));
    Ok(out)
}

/// Lower bound `n·c` on the area of a curve through the centres of `n`
/// disjoint balls of capacity `c`.
pub fn point_constraint_area_bound(num_points: u32, ball_capacity: Q) -> Result<Q> {
    if num_points == 0 {
        return Err(Error::domain("at least one point constraint is required"));
    }
    if !is_positive(&ball_capacity) {
        return Err(Error::domain("ball capacity must be positive"));
    }
    Ok(Q::from_integer(num_points as i64) * ball_capacity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn hard2() -> EllipsoidSpec {
        EllipsoidSpec::new(q(17, 10), q(41, 100)).unwrap()
    }

    #[test]
    fn table_values() {
        let s = hard2();
        let minus: Vec<i64> = (1..=5).map(|m| cz_index(&s, Axis::Minus, m).unwrap()).collect();
        assert_eq!(minus, vec![3, 5, 7, 9, 13]);
        assert_eq!(cz_index(&s, Axis::Plus, 1).unwrap(), 11);
    }

    #[test]
    fn golden_ratio_approximation() {
        let s = EllipsoidSpec::new(q(1, 1), q(89, 144)).unwrap();
        assert_eq!(cz_index(&s, Axis::Minus, 1).unwrap(), 3);
    }

    #[test]
    fn round_sphere_is_degenerate() {
        let s = EllipsoidSpec::new(q(1, 2), q(1, 2)).unwrap();
        assert!(matches!(cz_index(&s, Axis::Minus, 1), Err(Error::Degenerate(_))));
        let s = EllipsoidSpec::new(q(1, 1), q(1, 2)).unwrap();
        assert!(matches!(cz_index(&s, Axis::Minus, 2), Err(Error::Degenerate(_))));
    }

    #[test]
    fn actions() {
        let s = hard2();
        assert_eq!(orbit_action(&s, Axis::Plus, 1), q(17, 10));
        assert_eq!(orbit_action(&s, Axis::Minus, 5), q(205, 100));
    }

    #[test]
    fn catalog_up_to_two() {
        let s = hard2();
        let orbits = orbits_up_to_action(&s, q(2, 1)).unwrap();
        let labels: Vec<String> = orbits.iter().map(ReebOrbit::label).collect();
        assert_eq!(labels, vec!["γ-", "2γ-", "3γ-", "4γ-", "γ+"]);
        assert!(orbits_up_to_action(&s, q(1, 3)).unwrap().is_empty());
        assert!(orbits_up_to_action(&s, q(0, 1)).is_err());
    }

    #[test]
    fn area_bound() {
        let s = hard2();
        let eps = (s.a_plus - q(4, 1) * s.a_minus) / q(10, 1);
        let bound = point_constraint_area_bound(5, s.a_plus / q(5, 1) - eps).unwrap();
        assert_eq!(bound, s.a_plus - q(5, 1) * eps);
        assert!(bound > q(4, 1) * s.a_minus);
        assert_eq!(point_constraint_area_bound(1, q(1, 3)).unwrap(), q(1, 3));
    }

    #[test]
    fn spec_parsing_and_validation() {
        assert_eq!(EllipsoidSpec::parse("17/10,41/100").unwrap(), hard2());
        assert!(matches!(EllipsoidSpec::parse("1/2,3/4"), Err(Error::Precondition(_))));
        assert!(EllipsoidSpec::parse("1/2").is_err());
    }
}
