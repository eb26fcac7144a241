//! Exhaustive enumeration of building candidates with pruning.
//!
//! Candidates are generated from the outside level down. Total action is
//! nonincreasing across levels and strictly decreasing across a stable
//! symplectization level, so every interface carries action below `d` and
//! the search is finite once multiplicities are capped.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{format_q, Q};
use crate::reeb::{cz_index, orbit_action, Axis, EllipsoidSpec};
use crate::sft::building::{component_area, BuildingCandidate, BuildingComponent, Orbit, Pairing};
use crate::sft::filters::{evaluate, outside_placement, EvalConfig, Filter, FilterConfig, Verdict};

pub const DEFAULT_BUDGET: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationRequest {
    pub degree: u32,
    pub points_inside: u32,
    pub points_outside: u32,
    /// Largest orbit multiplicity considered; `⌈d/a₋⌉` when `None`.
    pub mult_cap: Option<u32>,
    pub filters: FilterConfig,
    /// Maximal number of partial and complete candidates generated.
    pub budget: usize,
}

impl EnumerationRequest {
    pub fn new(degree: u32, points_inside: u32, points_outside: u32) -> Self {
        EnumerationRequest {
            degree,
            points_inside,
            points_outside,
            mult_cap: None,
            filters: FilterConfig::default(),
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn with_mult_cap(mut self, cap: u32) -> Self {
        self.mult_cap = Some(cap);
        self
    }

    pub fn with_filters(mut self, filters: FilterConfig) -> Self {
        self.filters = filters;
        self
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    fn eval_config(&self) -> EvalConfig {
        EvalConfig {
            degree: self.degree,
            points_inside: self.points_inside,
            points_outside: self.points_outside,
            filters: self.filters.clone(),
        }
    }
}

/// A rejected complete or partial candidate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub candidate: String,
    pub killed_by: Filter,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Survivor {
    pub key: String,
    pub description: String,
    /// The candidate with the witness placement of points.
    pub candidate: BuildingCandidate,
    pub areas: Vec<String>,
    pub dims: Vec<Option<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumerationResult {
    pub spec: EllipsoidSpec,
    pub degree: u32,
    pub points_inside: u32,
    pub points_outside: u32,
    pub mult_cap: u32,
    /// Some orbit of action below `d` exceeds the multiplicity cap.
    pub cap_limited: bool,
    pub filters: FilterConfig,
    pub survivors: Vec<Survivor>,
    pub trace: Vec<TraceEntry>,
    /// Largest number of outside components among generated outside levels.
    pub max_outside_components: usize,
    pub generated: usize,
}

impl EnumerationResult {
    pub fn survivor_keys(&self) -> Vec<String> {
        self.survivors.iter().map(|s| s.key.clone()).collect()
    }
}

#[derive(Debug, Clone, Copy)]
struct Slot {
    orbit: Orbit,
    upper: usize,
}

#[derive(Debug, Clone)]
struct Partial {
    comps: Vec<BuildingComponent>,
    pairings: Vec<Pairing>,
    parent: Vec<usize>,
}

impl Partial {
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Adds a component fed by the given upper slots; false on a cycle.
    fn attach(&mut self, comp: BuildingComponent, feeds: &[Slot]) -> bool {
        let id = self.comps.len();
        self.comps.push(comp);
        self.parent.push(id);
        for s in feeds {
            let (a, b) = (self.find(s.upper), self.find(id));
            if a == b {
                return false;
            }
            self.parent[a] = b;
            self.pairings.push(Pairing { upper: s.upper, lower: id, orbit: s.orbit });
        }
        true
    }
}

/// Restricted-growth encodings of the set partitions of `n` items.
fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, n: usize, blocks: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=blocks {
            cur.push(b);
            rec(i + 1, n, blocks.max(b + 1), cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    rec(0, n, 0, &mut vec![], &mut out);
    out
}

fn block_count(p: &[usize]) -> usize {
    p.iter().map(|b| b + 1).max().unwrap_or(0)
}

fn integer_partitions(d: u32) -> Vec<Vec<u32>> {
    fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    rec(d, d, &mut vec![], &mut out);
    out
}

struct Gen<'a> {
    spec: &'a EllipsoidSpec,
    cfg: EvalConfig,
    alphabet: Vec<(Orbit, Q)>,
    survivors: BTreeMap<String, Survivor>,
    trace: Vec<TraceEntry>,
    generated: usize,
    budget: usize,
    max_outside: usize,
}

impl Gen<'_> {
    fn reject(&mut self, candidate: String, killed_by: Filter, reason: String) {
        self.trace.push(TraceEntry { candidate, killed_by, reason });
    }

    fn tick(&mut self) -> Result<()> {
        self.generated += 1;
        if self.generated > self.budget {
            return Err(Error::Budget(format!("more than {} candidates generated", self.budget)));
        }
        Ok(())
    }

    /// Multisets of orbits, as sorted lists, with total action below `bound`.
    /// Extensions reaching the bound are reported through `on_prune`.
    fn multisets_below(&self, bound: Q, mut on_prune: impl FnMut(&[Orbit])) -> Vec<Vec<Orbit>> {
        fn rec(
            alpha: &[(Orbit, Q)],
            start: usize,
            bound: Q,
            action: Q,
            cur: &mut Vec<Orbit>,
            out: &mut Vec<Vec<Orbit>>,
            on_prune: &mut dyn FnMut(&[Orbit]),
        ) {
            out.push(cur.clone());
            for i in start..alpha.len() {
                let a = action + alpha[i].1;
                cur.push(alpha[i].0);
                if a >= bound {
                    on_prune(cur);
                } else {
                    rec(alpha, i, bound, a, cur, out, on_prune);
                }
                cur.pop();
            }
        }
        let mut out = vec![];
        rec(&self.alphabet, 0, bound, Q::from_integer(0), &mut vec![], &mut out, &mut on_prune);
        out
    }

    fn run(&mut self) -> Result<()> {
        let d = self.cfg.degree;
        let mut options: BTreeMap<u32, Vec<Vec<Orbit>>> = BTreeMap::new();
        for m in 1..=d {
            let mut pruned = vec![];
            let opts = self.multisets_below(Q::from_integer(m as i64), |o| pruned.push(o.to_vec()));
            for o in pruned {
                self.reject(
                    BuildingComponent::outside(m, o).to_string(),
                    Filter::F1,
                    "negative actions reach the degree".into(),
                );
            }
            options.insert(m, opts);
        }
        for parts in integer_partitions(d) {
            self.max_outside = self.max_outside.max(parts.len());
            let mut choice = vec![0usize; parts.len()];
            self.outside_combos(&parts, &options, 0, &mut choice)?;
        }
        Ok(())
    }

    fn outside_combos(
        &mut self,
        parts: &[u32],
        options: &BTreeMap<u32, Vec<Vec<Orbit>>>,
        i: usize,
        choice: &mut Vec<usize>,
    ) -> Result<()> {
        if i == parts.len() {
            let comps: Vec<BuildingComponent> = parts
                .iter()
                .zip(choice.iter())
                .map(|(&m, &c)| BuildingComponent::outside(m, options[&m][c].clone()))
                .collect();
            return self.start(comps);
        }
        let lo = if i > 0 && parts[i - 1] == parts[i] { choice[i - 1] } else { 0 };
        for c in lo..options[&parts[i]].len() {
            choice[i] = c;
            self.outside_combos(parts, options, i + 1, choice)?;
        }
        Ok(())
    }

    fn start(&mut self, comps: Vec<BuildingComponent>) -> Result<()> {
        self.tick()?;
        let refs: Vec<&BuildingComponent> = comps.iter().collect();
        if outside_placement(self.spec, &refs, self.cfg.points_outside)?.is_none() {
            let desc: Vec<String> = comps.iter().map(ToString::to_string).collect();
            self.reject(
                desc.join(" + "),
                Filter::F3,
                format!("no placement of {} outside points gives nonnegative dimensions", self.cfg.points_outside),
            );
            return Ok(());
        }
        let slots: Vec<Slot> = comps
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.negative.iter().map(move |&orbit| Slot { orbit, upper: i }))
            .collect();
        let n = comps.len();
        let partial = Partial { comps, pairings: vec![], parent: (0..n).collect() };
        self.descend(&partial, &slots, 0)
    }

    fn descend(&mut self, partial: &Partial, slots: &[Slot], level: u32) -> Result<()> {
        self.finish_inside(partial, slots, level + 1)?;
        if !slots.is_empty() {
            self.intermediate(partial, slots, level + 1)?;
        }
        Ok(())
    }

    fn describe(partial: &Partial) -> String {
        let parts: Vec<String> = partial.comps.iter().map(ToString::to_string).collect();
        parts.join(" + ")
    }

    fn finish_inside(&mut self, partial: &Partial, slots: &[Slot], level: u32) -> Result<()> {
        for p in set_partitions(slots.len()) {
            self.tick()?;
            let mut next = partial.clone();
            let mut acyclic = true;
            for b in 0..block_count(&p) {
                let feeds: Vec<Slot> = slots.iter().zip(&p).filter(|(_, &x)| x == b).map(|(s, _)| *s).collect();
                let comp = BuildingComponent::inside(level, feeds.iter().map(|s| s.orbit).collect());
                acyclic &= next.attach(comp, &feeds);
            }
            if !acyclic {
                self.reject(Self::describe(&next), Filter::F4, "pairings close a cycle".into());
                continue;
            }
            let cand = BuildingCandidate::new(self.cfg.degree, level - 1, next.comps, next.pairings)?;
            self.record(cand)?;
        }
        Ok(())
    }

    fn record(&mut self, cand: BuildingCandidate) -> Result<()> {
        let ev = evaluate(self.spec, &cand, &self.cfg)?;
        match ev.verdict {
            Verdict::Killed { filter, reason } => self.reject(cand.to_string(), filter, reason),
            Verdict::Survivor => {
                let key = cand.canonical_key();
                if let Entry::Vacant(slot) = self.survivors.entry(key.clone()) {
                    let mut cand = cand;
                    for (c, k) in cand.components.iter_mut().zip(ev.witness.unwrap_or_default()) {
                        c.points = k;
                    }
                    cand.total_points = cand.components.iter().map(|c| c.points).sum();
                    let survivor = Survivor {
                        key: key.clone(),
                        description: cand.to_string(),
                        areas: ev.areas.iter().map(format_q).collect(),
                        dims: ev.dims,
                        candidate: cand,
                    };
                    slot.insert(survivor);
                }
            }
        }
        Ok(())
    }

    fn intermediate(&mut self, partial: &Partial, slots: &[Slot], level: u32) -> Result<()> {
        let upper_action: Q = slots.iter().map(|s| s.orbit.action(self.spec)).sum();
        let lowers = self.multisets_below(upper_action, |_| {});
        for lower in lowers.into_iter().filter(|l| !l.is_empty()) {
            for p in set_partitions(slots.len()) {
                let blocks = block_count(&p);
                let mut assign = vec![0usize; lower.len()];
                self.assign_lower(partial, slots, &p, blocks, &lower, 0, &mut assign, level)?;
            }
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn assign_lower(
        &mut self,
        partial: &Partial,
        slots: &[Slot],
        p: &[usize],
        blocks: usize,
        lower: &[Orbit],
        i: usize,
        assign: &mut Vec<usize>,
        level: u32,
    ) -> Result<()> {
        if i < lower.len() {
            let lo = if i > 0 && lower[i] == lower[i - 1] { assign[i - 1] } else { 0 };
            for b in lo..blocks {
                assign[i] = b;
                self.assign_lower(partial, slots, p, blocks, lower, i + 1, assign, level)?;
            }
            return Ok(());
        }
        if (0..blocks).any(|b| !assign.contains(&b)) {
            return Ok(());
        }
        self.tick()?;
        let mut next = partial.clone();
        let mut new_slots = vec![];
        let mut acyclic = true;
        let mut stable = false;
        for b in 0..blocks {
            let feeds: Vec<Slot> = slots.iter().zip(p).filter(|(_, &x)| x == b).map(|(s, _)| *s).collect();
            let neg: Vec<Orbit> = lower.iter().zip(assign.iter()).filter(|(_, &x)| x == b).map(|(o, _)| *o).collect();
            let comp = BuildingComponent::intermediate(level, feeds.iter().map(|s| s.orbit).collect(), neg.clone());
            let area = component_area(self.spec, &comp);
            let trivial = comp.is_trivial_cylinder();
            if !(area > Q::from_integer(0) || (area == Q::from_integer(0) && trivial)) {
                let desc = comp.to_string();
                self.reject(desc, Filter::F1, format!("area {}", format_q(&area)));
                return Ok(());
            }
            stable |= !trivial;
            let id = next.comps.len();
            acyclic &= next.attach(comp, &feeds);
            new_slots.extend(neg.into_iter().map(|orbit| Slot { orbit, upper: id }));
        }
        if !stable {
            return Ok(());
        }
        if !acyclic {
            self.reject(Self::describe(&next), Filter::F4, "pairings close a cycle".into());
            return Ok(());
        }
        self.descend(&next, &new_slots, level)
    }
}

fn default_mult_cap(spec: &EllipsoidSpec, d: u32) -> u32 {
    let ratio = Q::from_integer(d as i64) / spec.a_minus;
    ratio.ceil().to_integer() as u32
}

/// Every candidate of degree `d ∈ {1, 2}` with the given point constraints
/// passing all filters, sorted by canonical key, with the rejection trace.
pub fn enumerate_buildings(spec: &EllipsoidSpec, req: &EnumerationRequest) -> Result<EnumerationResult> {
    spec.validate()?;
    if !(1..=2).contains(&req.degree) {
        return Err(Error::precondition(format!("degree must be 1 or 2, got {}", req.degree)));
    }
    if let Some(c) = req.filters.ball_capacity {
        if c <= Q::from_integer(0) {
            return Err(Error::precondition(format!("ball capacity must be positive, got {}", format_q(&c))));
        }
    }
    let d = Q::from_integer(req.degree as i64);
    let cap = req.mult_cap.unwrap_or_else(|| default_mult_cap(spec, req.degree));
    let mut alphabet = vec![];
    let mut cap_limited = false;
    for axis in [Axis::Minus, Axis::Plus] {
        let mut mult = 1;
        while orbit_action(spec, axis, mult) < d {
            if mult > cap {
                cap_limited = true;
                break;
            }
            cz_index(spec, axis, mult)?;
            alphabet.push((Orbit::new(axis, mult), orbit_action(spec, axis, mult)));
            mult += 1;
        }
    }
    let mut gen = Gen {
        spec,
        cfg: req.eval_config(),
        alphabet,
        survivors: BTreeMap::new(),
        trace: vec![],
        generated: 0,
        budget: req.budget,
        max_outside: 0,
    };
    gen.run()?;
    Ok(EnumerationResult {
        spec: spec.clone(),
        degree: req.degree,
        points_inside: req.points_inside,
        points_outside: req.points_outside,
        mult_cap: cap,
        cap_limited,
        filters: req.filters.clone(),
        survivors: gen.survivors.into_values().collect(),
        trace: gen.trace,
        max_outside_components: gen.max_outside,
        generated: gen.generated,
    })
}
