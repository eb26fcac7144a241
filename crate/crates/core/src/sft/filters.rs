//! Filters deciding whether a building candidate can arise as a limit.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::rational::{format_q, is_positive, is_zero, opt_q, Q};
use crate::reeb::EllipsoidSpec;
use crate::sft::building::{component_area, BuildingCandidate, BuildingComponent, Layer};
use crate::sft::dims::{inside_dim, outside_dim, symplectization_index};

/// The rule that rejected a candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Filter {
    /// Sign, level and stability rules that every building satisfies.
    Structure,
    /// Every component other than a trivial cylinder has positive area.
    F1,
    /// Component areas sum to the degree.
    F2,
    /// Some placement of the point constraints gives every somewhere-injective
    /// inside and outside component a nonnegative virtual dimension.
    F3,
    /// The component graph is a tree.
    F4,
    /// At most `d` outside components.
    F5,
    /// Inside components through `j` points have area at least `j` times the
    /// ball capacity.
    F6,
    /// Optional: non-cylindrical simple components of the symplectization
    /// levels have index at least one.
    SymplectizationIndex,
}

impl Filter {
    pub fn describe(&self) -> &'static str {
        match self {
            Filter::Structure => "building structure",
            Filter::F1 => "area positivity",
            Filter::F2 => "area conservation",
            Filter::F3 => "virtual dimension",
            Filter::F4 => "tree connectivity",
            Filter::F5 => "outside component count",
            Filter::F6 => "point-constraint area bound",
            Filter::SymplectizationIndex => "symplectization index",
        }
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let code = match self {
            Filter::Structure => "structure",
            Filter::F1 => "F1",
            Filter::F2 => "F2",
            Filter::F3 => "F3",
            Filter::F4 => "F4",
            Filter::F5 => "F5",
            Filter::F6 => "F6",
            Filter::SymplectizationIndex => "index",
        };
        f.write_str(code)
    }
}

/// Optional filters.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterConfig {
    /// Enables F6 with this ball capacity.
    #[serde(default, with = "opt_q", skip_serializing_if = "Option::is_none")]
    pub ball_capacity: Option<Q>,
    /// Enables the symplectization index rule.
    #[serde(default)]
    pub symplectization_index: bool,
}

/// Degree, point constraints and filters of an enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalConfig {
    pub degree: u32,
    pub points_inside: u32,
    pub points_outside: u32,
    pub filters: FilterConfig,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Survivor,
    Killed { filter: Filter, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub verdict: Verdict,
    pub areas: Vec<Q>,
    /// Virtual dimensions of inside and outside components under the witness
    /// placement of points; `None` for symplectization components.
    pub dims: Vec<Option<i64>>,
    /// Points per component for a placement passing F3 and F6.
    pub witness: Option<Vec<u32>>,
}

impl Evaluation {
    pub fn survives(&self) -> bool {
        self.verdict == Verdict::Survivor
    }
}

/// All ways of placing `total` identical points into `boxes` labelled boxes,
/// in lexicographic order.
pub fn compositions(total: u32, boxes: usize) -> Vec<Vec<u32>> {
    fn rec(rest: u32, boxes: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if boxes == 1 {
            cur.push(rest);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for first in 0..=rest {
            cur.push(first);
            rec(rest - first, boxes - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    if boxes == 0 {
        if total == 0 {
            out.push(vec![]);
        }
        return out;
    }
    rec(total, boxes, &mut vec![], &mut out);
    out
}

/// First placement of `points` on the outside components giving every
/// somewhere-injective one a nonnegative dimension.
pub(crate) fn outside_placement(
    spec: &EllipsoidSpec,
    comps: &[&BuildingComponent],
    points: u32,
) -> Result<Option<Vec<u32>>> {
    for dist in compositions(points, comps.len()) {
        let mut ok = true;
        for (c, &k) in comps.iter().zip(&dist) {
            if !c.may_be_multiple_cover() && outside_dim(spec, &c.negative, k, c.degree)? < 0 {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(Some(dist));
        }
    }
    Ok(None)
}

enum InsideOutcome {
    Placement(Vec<u32>),
    NoDimension,
    NoArea,
}

fn inside_placement(
    spec: &EllipsoidSpec,
    comps: &[&BuildingComponent],
    points: u32,
    capacity: Option<Q>,
) -> Result<InsideOutcome> {
    let mut dimension_ok = false;
    for dist in compositions(points, comps.len()) {
        let mut ok = true;
        for (c, &k) in comps.iter().zip(&dist) {
            if !c.may_be_multiple_cover() && inside_dim(spec, &c.positive, k)? < 0 {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        dimension_ok = true;
        let area_ok = match capacity {
            None => true,
            Some(cap) => comps
                .iter()
                .zip(&dist)
                .all(|(c, &k)| component_area(spec, c) >= Q::from_integer(k as i64) * cap),
        };
        if area_ok {
            return Ok(InsideOutcome::Placement(dist));
        }
    }
    Ok(if dimension_ok { InsideOutcome::NoArea } else { InsideOutcome::NoDimension })
}

fn structure_defect(cand: &BuildingCandidate) -> Option<String> {
    let inside_level = cand.levels + 1;
    for (i, c) in cand.components.iter().enumerate() {
        let level_ok = match c.layer {
            Layer::Outside => c.level == 0,
            Layer::Intermediate => (1..=cand.levels).contains(&c.level),
            Layer::Inside => c.level == inside_level,
        };
        if !level_ok {
            return Some(format!("component {i} ({c}) sits on the wrong level"));
        }
        let signs_ok = match c.layer {
            Layer::Outside => c.positive.is_empty(),
            Layer::Intermediate => !c.positive.is_empty() && !c.negative.is_empty(),
            Layer::Inside => c.negative.is_empty(),
        };
        if !signs_ok {
            return Some(format!("component {i} ({c}) has punctures of the wrong sign for its layer"));
        }
        if c.layer != Layer::Outside && c.degree != 0 {
            return Some(format!("component {i} ({c}) carries a degree off the outside layer"));
        }
    }
    for p in &cand.pairings {
        if cand.components[p.upper].level + 1 != cand.components[p.lower].level {
            return Some(format!("pairing on {} joins non-adjacent levels", p.orbit));
        }
    }
    for level in 1..=cand.levels {
        let stable = cand
            .components
            .iter()
            .any(|c| c.level == level && c.layer == Layer::Intermediate && !c.is_trivial_cylinder());
        if !stable {
            return Some(format!("level {level} consists of trivial cylinders only"));
        }
    }
    None
}

/// Applies every filter in the order structure, F1, F2, F5, F4, index,
/// F3, F6. Point counts stored on the candidate are ignored; the placement
/// is searched for.
pub fn evaluate(spec: &EllipsoidSpec, cand: &BuildingCandidate, cfg: &EvalConfig) -> Result<Evaluation> {
    let areas: Vec<Q> = cand.components.iter().map(|c| component_area(spec, c)).collect();
    let layer_dims = |points: &[u32]| -> Result<Vec<Option<i64>>> {
        cand.components
            .iter()
            .zip(points)
            .map(|(c, &k)| match c.layer {
                Layer::Outside if c.degree > 0 => outside_dim(spec, &c.negative, k, c.degree).map(Some),
                Layer::Inside => inside_dim(spec, &c.positive, k).map(Some),
                _ => Ok(None),
            })
            .collect()
    };
    let stored: Vec<u32> = cand.components.iter().map(|c| c.points).collect();
    let killed = |filter: Filter, reason: String| -> Result<Evaluation> {
        Ok(Evaluation {
            verdict: Verdict::Killed { filter, reason },
            areas: areas.clone(),
            dims: layer_dims(&stored)?,
            witness: None,
        })
    };

    if let Some(reason) = structure_defect(cand) {
        return killed(Filter::Structure, reason);
    }
    for (c, a) in cand.components.iter().zip(&areas) {
        let ok = is_positive(a) || (is_zero(a) && c.is_trivial_cylinder());
        if !ok {
            return killed(Filter::F1, format!("{c} has area {}", format_q(a)));
        }
    }
    let total: Q = areas.iter().sum();
    if total != Q::from_integer(cfg.degree as i64) {
        return killed(Filter::F2, format!("areas sum to {} instead of {}", format_q(&total), cfg.degree));
    }
    let outside: Vec<&BuildingComponent> = cand.outside_components().collect();
    if outside.len() > cfg.degree as usize {
        return killed(Filter::F5, format!("{} outside components exceed degree {}", outside.len(), cfg.degree));
    }
    if !cand.is_tree() {
        return killed(
            Filter::F4,
            format!("{} components and {} pairings do not form a tree", cand.components.len(), cand.pairings.len()),
        );
    }
    if cfg.filters.symplectization_index {
        for c in &cand.components {
            if c.layer == Layer::Intermediate && !c.is_trivial_cylinder() && !c.may_be_multiple_cover() {
                let ind = symplectization_index(spec, &c.positive, &c.negative)?;
                if ind < 1 {
                    return killed(Filter::SymplectizationIndex, format!("{c} has index {ind}"));
                }
            }
        }
    }
    let Some(out_pts) = outside_placement(spec, &outside, cfg.points_outside)? else {
        return killed(
            Filter::F3,
            format!("no placement of {} outside points gives nonnegative dimensions", cfg.points_outside),
        );
    };
    let inside: Vec<&BuildingComponent> = cand.inside_components().collect();
    let in_pts = match inside_placement(spec, &inside, cfg.points_inside, cfg.filters.ball_capacity)? {
        InsideOutcome::Placement(p) => p,
        InsideOutcome::NoDimension => {
            return killed(
                Filter::F3,
                format!("no placement of {} inside points gives nonnegative dimensions", cfg.points_inside),
            )
        }
        InsideOutcome::NoArea => {
            return killed(
                Filter::F6,
                "every dimension-admissible placement puts too many points on a small component".into(),
            )
        }
    };
    let (mut oi, mut ii) = (out_pts.into_iter(), in_pts.into_iter());
    let witness: Vec<u32> = cand
        .components
        .iter()
        .map(|c| match c.layer {
            Layer::Outside => oi.next().unwrap_or(0),
            Layer::Inside => ii.next().unwrap_or(0),
            Layer::Intermediate => 0,
        })
        .collect();
    Ok(Evaluation { verdict: Verdict::Survivor, dims: layer_dims(&witness)?, areas, witness: Some(witness) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::sft::building::{Orbit, Pairing};

    fn line_spec() -> EllipsoidSpec {
        EllipsoidSpec::new(q(9, 10), q(7, 10)).unwrap()
    }

    fn cfg(d: u32, pin: u32, pout: u32) -> EvalConfig {
        EvalConfig { degree: d, points_inside: pin, points_outside: pout, filters: FilterConfig::default() }
    }

    fn disk_pair(o: Orbit) -> BuildingCandidate {
        BuildingCandidate::new(
            1,
            0,
            vec![BuildingComponent::outside(1, vec![o]), BuildingComponent::inside(1, vec![o])],
            vec![Pairing { upper: 0, lower: 1, orbit: o }],
        )
        .unwrap()
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(5, 2).len(), 6);
        assert_eq!(compositions(0, 0), vec![Vec::<u32>::new()]);
        assert!(compositions(1, 0).is_empty());
        assert_eq!(compositions(2, 3).len(), 6);
    }

    #[test]
    fn line_disk_survives() {
        let ev = evaluate(&line_spec(), &disk_pair(Orbit::minus(1)), &cfg(1, 1, 1)).unwrap();
        assert!(ev.survives());
        assert_eq!(ev.witness, Some(vec![1, 1]));
        assert_eq!(ev.dims, vec![Some(0), Some(0)]);
        assert_eq!(ev.areas, vec![q(3, 10), q(7, 10)]);
    }

    #[test]
    fn plus_disk_killed_by_dimension() {
        let ev = evaluate(&line_spec(), &disk_pair(Orbit::plus(1)), &cfg(1, 1, 1)).unwrap();
        assert!(matches!(ev.verdict, Verdict::Killed { filter: Filter::F3, .. }));
    }

    #[test]
    fn closed_inside_component_killed_by_area() {
        let c = BuildingCandidate::new(1, 0, vec![BuildingComponent::inside(1, vec![])], vec![]).unwrap();
        let ev = evaluate(&line_spec(), &c, &cfg(1, 1, 0)).unwrap();
        assert!(matches!(ev.verdict, Verdict::Killed { filter: Filter::F1, .. }));
    }

    #[test]
    fn closed_line_needs_no_inside_points() {
        let c = BuildingCandidate::new(1, 0, vec![BuildingComponent::outside(1, vec![])], vec![]).unwrap();
        assert!(evaluate(&line_spec(), &c, &cfg(1, 0, 2)).unwrap().survives());
        let ev = evaluate(&line_spec(), &c, &cfg(1, 1, 1)).unwrap();
        assert!(matches!(ev.verdict, Verdict::Killed { filter: Filter::F3, .. }));
    }

    #[test]
    fn area_bound_attribution() {
        let s = EllipsoidSpec::new(q(17, 10), q(41, 100)).unwrap();
        let o = Orbit::minus(4);
        let c = BuildingCandidate::new(
            2,
            0,
            vec![BuildingComponent::outside(2, vec![o]), BuildingComponent::inside(1, vec![o])],
            vec![Pairing { upper: 0, lower: 1, orbit: o }],
        )
        .unwrap();
        let eps = (s.a_plus - q(4, 1) * s.a_minus) / q(10, 1);
        let mut config = cfg(2, 5, 0);
        config.filters.ball_capacity = Some(s.a_plus / q(5, 1) - eps);
        let ev = evaluate(&s, &c, &config).unwrap();
        assert!(matches!(ev.verdict, Verdict::Killed { filter: Filter::F6, .. }), "{:?}", ev.verdict);
    }
}
