//! Holomorphic buildings as labelled trees.
//!
//! A building of degree `d` has an outside level (level `0`), intermediate
//! levels `1..=L` in the symplectization and an inside level `L + 1`. Its
//! components are punctured spheres; every negative puncture of a component
//! on level `i` is paired with a positive puncture, on the same orbit, of a
//! component on level `i + 1`.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Q;
use crate::reeb::{orbit_action, orbit_label, Axis, EllipsoidSpec};

/// An iterate `mult·γ_axis`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Orbit {
    pub axis: Axis,
    pub mult: u32,
}

impl Orbit {
    pub fn new(axis: Axis, mult: u32) -> Self {
        Orbit { axis, mult }
    }

    pub fn minus(mult: u32) -> Self {
        Orbit::new(Axis::Minus, mult)
    }

    pub fn plus(mult: u32) -> Self {
        Orbit::new(Axis::Plus, mult)
    }

    pub fn action(&self, spec: &EllipsoidSpec) -> Q {
        orbit_action(spec, self.axis, self.mult)
    }
}

impl fmt::Display for Orbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&orbit_label(self.axis, self.mult))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
}

/// A puncture: an orbit with the sign of the end asymptotic to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Puncture {
    pub sign: Sign,
    pub orbit: Orbit,
}

impl Puncture {
    pub fn positive(orbit: Orbit) -> Self {
        Puncture { sign: Sign::Positive, orbit }
    }

    pub fn negative(orbit: Orbit) -> Self {
        Puncture { sign: Sign::Negative, orbit }
    }
}

/// Total action of a list of orbits.
pub fn total_action(spec: &EllipsoidSpec, orbits: &[Orbit]) -> Q {
    orbits.iter().map(|o| o.action(spec)).sum()
}

/// Formats a list of orbits as `{γ-, 2γ+}`.
pub fn format_orbits(orbits: &[Orbit]) -> String {
    let inner: Vec<String> = orbits.iter().map(Orbit::to_string).collect();
    format!("{{{}}}", inner.join(", "))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layer {
    Outside,
    Intermediate,
    Inside,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildingComponent {
    pub layer: Layer,
    pub level: u32,
    /// Positive punctures, sorted.
    pub positive: Vec<Orbit>,
    /// Negative punctures, sorted.
    pub negative: Vec<Orbit>,
    /// Degree `m` of an outside component; zero elsewhere.
    pub degree: u32,
    pub points: u32,
}

impl BuildingComponent {
    pub fn outside(degree: u32, negative: Vec<Orbit>) -> Self {
        Self::new(Layer::Outside, 0, vec![], negative, degree)
    }

    pub fn inside(level: u32, positive: Vec<Orbit>) -> Self {
        Self::new(Layer::Inside, level, positive, vec![], 0)
    }

    pub fn intermediate(level: u32, positive: Vec<Orbit>, negative: Vec<Orbit>) -> Self {
        Self::new(Layer::Intermediate, level, positive, negative, 0)
    }

    fn new(layer: Layer, level: u32, mut positive: Vec<Orbit>, mut negative: Vec<Orbit>, degree: u32) -> Self {
        positive.sort();
        negative.sort();
        BuildingComponent { layer, level, positive, negative, degree, points: 0 }
    }

    pub fn with_points(mut self, points: u32) -> Self {
        self.points = points;
        self
    }

    pub fn punctures(&self) -> Vec<Puncture> {
        let pos = self.positive.iter().map(|o| Puncture::positive(*o));
        pos.chain(self.negative.iter().map(|o| Puncture::negative(*o))).collect()
    }

    /// An intermediate cylinder with both ends on the same orbit.
    pub fn is_trivial_cylinder(&self) -> bool {
        self.layer == Layer::Intermediate
            && self.positive.len() == 1
            && self.negative.len() == 1
            && self.positive[0] == self.negative[0]
    }

    /// True when the combinatorial data is compatible with a multiple cover:
    /// some `q ≥ 2` divides the degree and the total multiplicity on each
    /// axis.
    pub fn may_be_multiple_cover(&self) -> bool {
        let total = |axis: Axis| -> u32 {
            self.positive.iter().chain(&self.negative).filter(|o| o.axis == axis).map(|o| o.mult).sum()
        };
        self.degree.gcd(&total(Axis::Minus)).gcd(&total(Axis::Plus)) >= 2
    }

    fn label(&self) -> String {
        match self.layer {
            Layer::Outside => format!("O{}", self.degree),
            Layer::Intermediate => format!("M{}", self.level),
            Layer::Inside => "I".to_string(),
        }
    }
}

impl fmt::Display for BuildingComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.layer {
            Layer::Outside => write!(f, "outside(m={}, -{})", self.degree, format_orbits(&self.negative))?,
            Layer::Intermediate => write!(
                f,
                "level {}(+{}, -{})",
                self.level,
                format_orbits(&self.positive),
                format_orbits(&self.negative)
            )?,
            Layer::Inside => write!(f, "inside(+{})", format_orbits(&self.positive))?,
        }
        if self.points > 0 {
            write!(f, "[{} pt]", self.points)?;
        }
        Ok(())
    }
}

/// Area in units of `π`: positive minus negative actions, plus the degree
/// for outside components.
pub fn component_area(spec: &EllipsoidSpec, comp: &BuildingComponent) -> Q {
    Q::from_integer(comp.degree as i64) + total_action(spec, &comp.positive) - total_action(spec, &comp.negative)
}

/// A matched pair of punctures: a negative end of `upper` and a positive end
/// of `lower`, both on `orbit`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pairing {
    pub upper: usize,
    pub lower: usize,
    pub orbit: Orbit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildingCandidate {
    pub degree: u32,
    /// Number of intermediate levels.
    pub levels: u32,
    pub components: Vec<BuildingComponent>,
    pub pairings: Vec<Pairing>,
    pub total_points: u32,
}

impl BuildingCandidate {
    /// Assembles a candidate from its components and pairings, checking that
    /// every puncture is paired exactly once.
    pub fn new(
        degree: u32,
        levels: u32,
        components: Vec<BuildingComponent>,
        pairings: Vec<Pairing>,
    ) -> Result<Self> {
        let n = components.len();
        let mut neg: Vec<Vec<Orbit>> = vec![vec![]; n];
        let mut pos: Vec<Vec<Orbit>> = vec![vec![]; n];
        for p in &pairings {
            if p.upper >= n || p.lower >= n {
                return Err(Error::domain("pairing refers to a missing component"));
            }
            neg[p.upper].push(p.orbit);
            pos[p.lower].push(p.orbit);
        }
        for (i, c) in components.iter().enumerate() {
            neg[i].sort();
            pos[i].sort();
            if neg[i] != c.negative || pos[i] != c.positive {
                return Err(Error::domain(format!("punctures of component {i} ({c}) are not matched by the pairing")));
            }
        }
        let total_points = components.iter().map(|c| c.points).sum();
        Ok(BuildingCandidate { degree, levels, components, pairings, total_points })
    }

    pub fn outside_components(&self) -> impl Iterator<Item = &BuildingComponent> {
        self.components.iter().filter(|c| c.layer == Layer::Outside)
    }

    pub fn inside_components(&self) -> impl Iterator<Item = &BuildingComponent> {
        self.components.iter().filter(|c| c.layer == Layer::Inside)
    }

    /// Adjacency lists of the component graph, one entry per pairing.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![vec![]; self.components.len()];
        for (e, p) in self.pairings.iter().enumerate() {
            adj[p.upper].push((p.lower, e));
            adj[p.lower].push((p.upper, e));
        }
        adj
    }

    /// True when the component graph is connected and acyclic.
    pub fn is_tree(&self) -> bool {
        let n = self.components.len();
        if n == 0 || self.pairings.len() + 1 != n {
            return false;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(w, _) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Canonical string of the labelled tree, independent of component order
    /// and point assignment. Only meaningful for trees.
    pub fn canonical_key(&self) -> String {
        let adj = self.adjacency();
        (0..self.components.len())
            .map(|root| self.rooted_key(&adj, root, usize::MAX))
            .min()
            .unwrap_or_default()
    }

    fn rooted_key(&self, adj: &[Vec<(usize, usize)>], v: usize, parent_edge: usize) -> String {
        let mut children: Vec<String> = adj[v]
            .iter()
            .filter(|&&(_, e)| e != parent_edge)
            .map(|&(w, e)| {
                let p = &self.pairings[e];
                let dir = if p.upper == v { 'v' } else { '^' };
                format!("{dir}{}{}:{}", p.orbit.axis.as_str(), p.orbit.mult, self.rooted_key(adj, w, e))
            })
            .collect();
        children.sort();
        format!("{}({})", self.components[v].label(), children.join(","))
    }

    /// Sorted description of the outside layer, e.g. `outside(m=1, -{γ-})`.
    pub fn outside_configuration(&self) -> String {
        let mut parts: Vec<String> = self
            .outside_components()
            .map(|c| BuildingComponent { points: 0, ..c.clone() }.to_string())
            .collect();
        parts.sort();
        parts.join(" + ")
    }
}

impl fmt::Display for BuildingCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut by_level: BTreeMap<u32, Vec<String>> = BTreeMap::new();
        for c in &self.components {
            by_level.entry(c.level).or_default().push(c.to_string());
        }
        let levels: Vec<String> = by_level.into_values().map(|mut v| {
            v.sort();
            v.join(" + ")
        }).collect();
        f.write_str(&levels.join(" | "))
    }
}
