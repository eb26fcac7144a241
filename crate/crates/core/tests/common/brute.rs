//! Unfiltered generator of level-structured buildings.
//!
//! Every component's positive punctures are matched with negative punctures
//! one level up, and nothing else is assumed: cycles, disconnected graphs,
//! negative areas, punctures of the wrong kind and levels of trivial
//! cylinders are all generated and left to the filters.

use std::collections::BTreeSet;

use llab_core::sft::{evaluate, BuildingCandidate, BuildingComponent, EvalConfig, Orbit, Pairing};
use llab_core::reeb::EllipsoidSpec;

#[derive(Debug, Clone, Copy)]
pub struct Caps {
    /// Largest number of punctures matched across one interface.
    pub interface: usize,
    /// Largest number of intermediate levels.
    pub levels: u32,
    pub mult_cap: u32,
}

#[derive(Debug, Default)]
pub struct BruteResult {
    pub survivors: BTreeSet<String>,
    pub generated: usize,
}

pub fn alphabet(cap: u32) -> Vec<Orbit> {
    let mut out = vec![];
    for m in 1..=cap {
        out.push(Orbit::minus(m));
        out.push(Orbit::plus(m));
    }
    out
}

/// Sorted multisets of size `lo..=hi`.
pub fn multisets(alpha: &[Orbit], lo: usize, hi: usize) -> Vec<Vec<Orbit>> {
    let mut out = vec![];
    let mut cur = vec![];
    fn rec(alpha: &[Orbit], start: usize, lo: usize, hi: usize, cur: &mut Vec<Orbit>, out: &mut Vec<Vec<Orbit>>) {
        if cur.len() >= lo {
            out.push(cur.clone());
        }
        if cur.len() == hi {
            return;
        }
        for i in start..alpha.len() {
            cur.push(alpha[i]);
            rec(alpha, i, lo, hi, cur, out);
            cur.pop();
        }
    }
    rec(alpha, 0, lo, hi, &mut cur, &mut out);
    out
}

/// Set partitions of `0..n` as lists of blocks.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for mut p in set_partitions(n - 1) {
        for b in 0..p.len() {
            let mut q = p.clone();
            q[b].push(n - 1);
            out.push(q);
        }
        p.push(vec![n - 1]);
        out.push(p);
    }
    out
}

/// All maps `0..n → 0..k`.
pub fn functions(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|f| (0..k).map(move |b| [f.clone(), vec![b]].concat())).collect();
    }
    if k == 0 && n > 0 {
        out.clear();
    }
    out
}

pub fn integer_partitions(d: u32) -> Vec<Vec<u32>> {
    if d == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for first in 1..=d {
        for rest in integer_partitions(d - first) {
            if rest.first().is_none_or(|&r| r <= first) {
                out.push([vec![first], rest].concat());
            }
        }
    }
    out
}

#[derive(Clone)]
struct State {
    comps: Vec<BuildingComponent>,
    pairings: Vec<Pairing>,
    /// Unmatched negative punctures: orbit and owning component.
    slots: Vec<(Orbit, usize)>,
}

struct Gen<'a> {
    spec: &'a EllipsoidSpec,
    cfg: &'a EvalConfig,
    caps: Caps,
    lowers: Vec<Vec<Orbit>>,
    out: BruteResult,
}

impl Gen<'_> {
    fn emit(&mut self, st: State, levels: u32) {
        self.out.generated += 1;
        let cand = BuildingCandidate::new(self.cfg.degree, levels, st.comps, st.pairings).expect("matched punctures");
        if evaluate(self.spec, &cand, self.cfg).expect("evaluation").survives() {
            self.out.survivors.insert(cand.canonical_key());
        }
    }

    /// Blocks of the slots become the components of the next level.
    fn grow(&mut self, st: &State, level: u32) {
        let n = st.slots.len();
        for blocks in set_partitions(n) {
            let mut next = st.clone();
            next.slots.clear();
            for b in &blocks {
                let pos: Vec<Orbit> = b.iter().map(|&i| st.slots[i].0).collect();
                let id = next.comps.len();
                next.comps.push(BuildingComponent::inside(level + 1, pos));
                for &i in b {
                    next.pairings.push(Pairing { upper: st.slots[i].1, lower: id, orbit: st.slots[i].0 });
                }
            }
            self.emit(next, level);
        }
        if level >= self.caps.levels || n == 0 {
            return;
        }
        for blocks in set_partitions(n) {
            for li in 0..self.lowers.len() {
                let lower = self.lowers[li].clone();
                for f in functions(lower.len(), blocks.len()) {
                    let mut next = st.clone();
                    next.slots.clear();
                    let first = next.comps.len();
                    for (bi, b) in blocks.iter().enumerate() {
                        let pos: Vec<Orbit> = b.iter().map(|&i| st.slots[i].0).collect();
                        let neg: Vec<Orbit> =
                            lower.iter().zip(&f).filter(|(_, &x)| x == bi).map(|(o, _)| *o).collect();
                        next.comps.push(BuildingComponent::intermediate(level + 1, pos, neg.clone()));
                        for &i in b {
                            next.pairings.push(Pairing {
                                upper: st.slots[i].1,
                                lower: first + bi,
                                orbit: st.slots[i].0,
                            });
                        }
                        next.slots.extend(neg.into_iter().map(|o| (o, first + bi)));
                    }
                    self.grow(&next, level + 1);
                }
            }
        }
    }
}

/// Survivor keys of every generated candidate within the caps.
pub fn brute_survivors(spec: &EllipsoidSpec, cfg: &EvalConfig, caps: Caps) -> BruteResult {
    let alpha = alphabet(caps.mult_cap);
    let negs = multisets(&alpha, 0, caps.interface);
    let mut gen = Gen { spec, cfg, caps, lowers: negs.clone(), out: BruteResult::default() };
    for parts in integer_partitions(cfg.degree) {
        let mut choices: Vec<Vec<usize>> = vec![vec![]];
        for _ in &parts {
            choices = choices.into_iter().flat_map(|c| (0..negs.len()).map(move |i| [c.clone(), vec![i]].concat())).collect();
        }
        for choice in choices {
            if choice.iter().map(|&i| negs[i].len()).sum::<usize>() > caps.interface {
                continue;
            }
            let mut st = State { comps: vec![], pairings: vec![], slots: vec![] };
            for (&m, &i) in parts.iter().zip(&choice) {
                let id = st.comps.len();
                st.comps.push(BuildingComponent::outside(m, negs[i].clone()));
                st.slots.extend(negs[i].iter().map(|&o| (o, id)));
            }
            gen.grow(&st, 0);
        }
    }
    // a closed curve entirely inside
    let closed = State { comps: vec![BuildingComponent::inside(1, vec![])], pairings: vec![], slots: vec![] };
    gen.emit(closed, 0);
    gen.out
}

/// Largest interface size and number of intermediate levels of a candidate.
pub fn extent(cand: &BuildingCandidate) -> (usize, u32) {
    let mut per_level = vec![0usize; cand.levels as usize + 1];
    for p in &cand.pairings {
        per_level[cand.components[p.upper].level as usize] += 1;
    }
    (per_level.into_iter().max().unwrap_or(0), cand.levels)
}
