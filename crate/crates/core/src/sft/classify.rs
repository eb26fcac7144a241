//! Classification of the limits of lines and conics under neck stretching
//! along an ellipsoid.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{format_q, Q};
use crate::reeb::{point_constraint_area_bound, EllipsoidSpec};
use crate::sft::building::{Layer, Orbit};
use crate::sft::enumerate::{enumerate_buildings, EnumerationRequest, Survivor, TraceEntry};
use crate::sft::filters::FilterConfig;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Degeneration {
    Line,
    Conic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub kind: Degeneration,
    pub spec: EllipsoidSpec,
    pub degree: u32,
    pub points_inside: u32,
    pub points_outside: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ball_capacity: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inside_area_bound: Option<String>,
    /// The outside layer shared by every survivor.
    pub outside_configuration: String,
    pub outside_area: String,
    /// Largest number of intermediate levels among survivors.
    pub intermediate_levels: u32,
    pub max_outside_components: usize,
    pub cap_limited: bool,
    pub survivors: Vec<Survivor>,
    pub trace: Vec<TraceEntry>,
}

fn failure(message: String, survivors: &[Survivor]) -> Error {
    Error::Classification { message, survivors: survivors.iter().map(|s| s.description.clone()).collect() }
}

/// Degree-one curves through one point inside and one point outside an
/// ellipsoid with `a₊ < 1`: the outside layer is always a single disk
/// asymptotic to `γ₋`.
pub fn classify_line_degeneration(spec: &EllipsoidSpec) -> Result<ClassificationReport> {
    spec.validate()?;
    if spec.a_plus >= Q::from_integer(1) {
        return Err(Error::precondition(format!("a_+ < 1 fails: a_+ = {}", format_q(&spec.a_plus))));
    }
    let res = enumerate_buildings(spec, &EnumerationRequest::new(1, 1, 1))?;
    let expected = "outside(m=1, -{γ-})";
    let mut configs: Vec<String> = res.survivors.iter().map(|s| s.candidate.outside_configuration()).collect();
    configs.sort();
    configs.dedup();
    if configs != [expected] {
        return Err(failure(format!("outside configurations {configs:?}, expected only {expected}"), &res.survivors));
    }
    Ok(ClassificationReport {
        kind: Degeneration::Line,
        spec: spec.clone(),
        degree: 1,
        points_inside: 1,
        points_outside: 1,
        epsilon: None,
        ball_capacity: None,
        inside_area_bound: None,
        outside_configuration: expected.to_string(),
        outside_area: format_q(&(Q::from_integer(1) - spec.a_minus)),
        intermediate_levels: res.survivors.iter().map(|s| s.candidate.levels).max().unwrap_or(0),
        max_outside_components: res.max_outside_components,
        cap_limited: res.cap_limited,
        survivors: res.survivors,
        trace: res.trace,
    })
}

/// Checks `1 < a₊ < 2`, `4a₋ < a₊` and `2 < 5a₋`, naming the first failure.
pub fn check_conic_range(spec: &EllipsoidSpec) -> Result<()> {
    let (p, m) = (spec.a_plus, spec.a_minus);
    let n = |k: i64| Q::from_integer(k);
    let checks = [
        (n(1) < p, "1 < a_+"),
        (p < n(2), "a_+ < 2"),
        (n(4) * m < p, "4a_- < a_+"),
        (n(2) < n(5) * m, "2 < 5a_-"),
    ];
    for (ok, name) in checks {
        if !ok {
            return Err(Error::precondition(format!(
                "{name} fails for a_+ = {}, a_- = {}",
                format_q(&p),
                format_q(&m)
            )));
        }
    }
    Ok(())
}

/// `(a₊ − 4a₋)/10`.
pub fn default_epsilon(spec: &EllipsoidSpec) -> Q {
    (spec.a_plus - Q::from_integer(4) * spec.a_minus) / Q::from_integer(10)
}

/// Degree-two curves through five points inside the ellipsoid, each in a
/// ball of capacity `a₊/5 − ε`: the unique limit is a disk asymptotic to
/// `γ₊` on each side, with no symplectization level.
pub fn classify_conic_degeneration(spec: &EllipsoidSpec, epsilon: Option<Q>) -> Result<ClassificationReport> {
    spec.validate()?;
    check_conic_range(spec)?;
    let eps = epsilon.unwrap_or_else(|| default_epsilon(spec));
    let capacity = spec.a_plus / Q::from_integer(5) - eps;
    if eps <= Q::from_integer(0) || capacity <= Q::from_integer(0) {
        return Err(Error::precondition(format!("0 < ε < a_+/5 fails for ε = {}", format_q(&eps))));
    }
    let bound = point_constraint_area_bound(5, capacity)?;
    let filters = FilterConfig { ball_capacity: Some(capacity), symplectization_index: false };
    let res = enumerate_buildings(spec, &EnumerationRequest::new(2, 5, 0).with_filters(filters))?;
    let expected = "outside(m=2, -{γ+})";
    let unique = match res.survivors.as_slice() {
        [s] => {
            let c = &s.candidate;
            let inside: Vec<_> = c.components.iter().filter(|x| x.layer == Layer::Inside).collect();
            c.outside_configuration() == expected
                && c.levels == 0
                && inside.len() == 1
                && inside[0].positive == [Orbit::plus(1)]
                && inside[0].points == 5
        }
        _ => false,
    };
    if !unique {
        return Err(failure(
            format!("expected a unique survivor with outside layer {expected}, found {}", res.survivors.len()),
            &res.survivors,
        ));
    }
    Ok(ClassificationReport {
        kind: Degeneration::Conic,
        spec: spec.clone(),
        degree: 2,
        points_inside: 5,
        points_outside: 0,
        epsilon: Some(format_q(&eps)),
        ball_capacity: Some(format_q(&capacity)),
        inside_area_bound: Some(format_q(&bound)),
        outside_configuration: expected.to_string(),
        outside_area: format_q(&(Q::from_integer(2) - spec.a_plus)),
        intermediate_levels: 0,
        max_outside_components: res.max_outside_components,
        cap_limited: res.cap_limited,
        survivors: res.survivors,
        trace: res.trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn line_examples() {
        for (p, m) in [(q(9, 10), q(7, 10)), (q(1, 2), q(499, 1000))] {
            let r = classify_line_degeneration(&EllipsoidSpec::new(p, m).unwrap()).unwrap();
            assert_eq!(r.outside_area, crate::rational::format_q(&(q(1, 1) - m)));
        }
        let big = EllipsoidSpec::new(q(1, 1), q(1, 3)).unwrap();
        assert!(matches!(classify_line_degeneration(&big), Err(Error::Precondition(_))));
    }

    #[test]
    fn conic_example() {
        let spec = EllipsoidSpec::new(q(17, 10), q(41, 100)).unwrap();
        let r = classify_conic_degeneration(&spec, None).unwrap();
        assert_eq!(r.outside_area, "3/10");
        assert!(r.max_outside_components <= 2);
        assert_eq!(r.survivors.len(), 1);
    }

    #[test]
    fn conic_range_names_inequality() {
        let spec = EllipsoidSpec::new(q(17, 10), q(1, 2)).unwrap();
        match classify_conic_degeneration(&spec, None) {
            Err(Error::Precondition(m)) => assert!(m.contains("4a_- < a_+"), "{m}"),
            other => panic!("{other:?}"),
        }
        let spec = EllipsoidSpec::new(q(5, 2), q(1, 2)).unwrap();
        assert!(matches!(classify_conic_degeneration(&spec, None), Err(Error::Precondition(m)) if m.contains("a_+ < 2")));
    }
}
