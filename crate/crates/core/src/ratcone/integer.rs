//! Branch and bound for small integer points in a cone difference.
//!
//! Candidates are sums of groups from the first class's pool, enumerated as
//! non-increasing index sequences so every multiset of parts appears once.
//! A candidate is accepted when it is not decomposable over the excluded
//! pool and is decomposable in every other class. The incumbent objective
//! bounds the search; near the root an LP relaxation (real membership of
//! every completion in each class cone) prunes subtrees.

use std::collections::HashSet;

use num_traits::{One, Zero};
use serde::Serialize;

use super::lp::{self, Feasibility};
use super::{q, Rational};
use crate::catalog::{Catalog, GroupEntry};
use crate::decompose::{ClassDecomposition, Decomposer};
use crate::degvec::DegreeMultiset;
use crate::primecover::Regime;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    Rank,
    Dimension,
}

impl Objective {
    pub fn of(self, m: &DegreeMultiset) -> u64 {
        match self {
            Objective::Rank => m.rank() as u64,
            Objective::Dimension => m.dimension(),
        }
    }

    fn weight(self, degree: usize) -> i64 {
        match self {
            Objective::Rank => 1,
            Objective::Dimension => 2 * degree as i64 - 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct IntegerSearchLimits {
    /// Largest degree allowed in any part.
    pub truncation: u32,
    /// Node budget; the search reports itself incomplete when exceeded.
    pub node_limit: u64,
    /// Depth up to which the LP relaxation is solved at each node.
    pub lp_depth: usize,
}

impl Default for IntegerSearchLimits {
    fn default() -> Self {
        Self { truncation: crate::degvec::DEFAULT_TRUNCATION, node_limit: 2_000_000, lp_depth: 2 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegerWitness {
    pub degrees: DegreeMultiset,
    pub value: u64,
    pub classes: Vec<ClassDecomposition>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegerSearchReport {
    pub witness: Option<IntegerWitness>,
    pub nodes: u64,
    pub lp_prunes: u64,
    /// True when the whole tree under the bound was explored, so the witness
    /// (or its absence) is exact for this pool and bound.
    pub complete: bool,
}

struct State<'a> {
    parts: Vec<&'a GroupEntry>,
    excluded: HashSet<&'a str>,
    exclude: Decomposer<'a>,
    others: Vec<(&'a Regime, Decomposer<'a>)>,
    class_vectors: Vec<Vec<Vec<Rational>>>,
    objective: Objective,
    limits: IntegerSearchLimits,
    best: u64,
    witness: Option<IntegerWitness>,
    tested: HashSet<DegreeMultiset>,
    nodes: u64,
    lp_prunes: u64,
    aborted: bool,
}

/// Smallest multiset (by `objective`, at most `bound`) decomposable in every
/// class of `classes` but not over `exclude`.
///
/// `classes[0]` supplies the candidate parts. The result is minimal among
/// the multisets this search visits; when `complete` is true that is every
/// multiset of first-class parts within the bound.
pub fn minimal_integer_witness(
    classes: &[Regime],
    catalog: &Catalog,
    exclude: &[&GroupEntry],
    objective: Objective,
    bound: u64,
    limits: IntegerSearchLimits,
) -> IntegerSearchReport {
    let d = limits.truncation;
    let pool = |r: &Regime| -> Vec<&GroupEntry> {
        catalog
            .entries()
            .iter()
            .filter(|e| e.max_degree() <= d && r.condition.implies(&e.primes))
            .collect()
    };
    let Some((first, rest)) = classes.split_first() else {
        return IntegerSearchReport { witness: None, nodes: 0, lp_prunes: 0, complete: true };
    };
    let mut parts = pool(first);
    parts.sort_by_key(|e| (objective.of(&e.degrees), e.id.clone()));
    let vectors = |entries: &[&GroupEntry]| -> Vec<Vec<Rational>> {
        entries
            .iter()
            .map(|e| {
                let v = e.degrees.to_vector(d).expect("within truncation");
                v.entries().iter().map(|&x| q(x as i64)).collect()
            })
            .collect()
    };
    let others: Vec<(&Regime, Decomposer)> = rest.iter().map(|r| (r, Decomposer::new(pool(r)))).collect();
    let class_vectors = others.iter().map(|(_, dec)| vectors(dec.pool())).collect();
    let mut state = State {
        excluded: exclude.iter().map(|e| e.id.as_str()).collect(),
        exclude: Decomposer::new(exclude.iter().copied()),
        parts,
        others,
        class_vectors,
        objective,
        limits,
        best: bound.saturating_add(1),
        witness: None,
        tested: HashSet::new(),
        nodes: 0,
        lp_prunes: 0,
        aborted: false,
    };
    let n = state.parts.len();
    let mut chosen = Vec::new();
    state.descend(&mut chosen, &DegreeMultiset::new(), n);
    IntegerSearchReport {
        witness: state.witness,
        nodes: state.nodes,
        lp_prunes: state.lp_prunes,
        complete: !state.aborted,
    }
}

impl<'a> State<'a> {
    /// Explores extensions of `sum` by parts with index `< limit`.
    fn descend(&mut self, chosen: &mut Vec<usize>, sum: &DegreeMultiset, limit: usize) {
        for i in (0..limit).rev() {
            if self.aborted {
                return;
            }
            let part = self.parts[i];
            let next = sum.union(&part.degrees);
            if self.objective.of(&next) >= self.best {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.limits.node_limit {
                self.aborted = true;
                return;
            }
            chosen.push(i);
            self.evaluate(chosen, &next);
            if chosen.len() <= self.limits.lp_depth && !self.relaxation_feasible(&next, i + 1) {
                self.lp_prunes += 1;
            } else {
                self.descend(chosen, &next, i + 1);
            }
            chosen.pop();
        }
    }

    fn evaluate(&mut self, chosen: &[usize], candidate: &DegreeMultiset) {
        let has_new_part = chosen.iter().any(|&i| !self.excluded.contains(self.parts[i].id.as_str()));
        if !has_new_part || !self.tested.insert(candidate.clone()) {
            return;
        }
        if self.exclude.is_decomposable(candidate) {
            return;
        }
        let mut classes = Vec::with_capacity(self.others.len() + 1);
        for (regime, dec) in self.others.iter_mut() {
            match dec.decompose(candidate) {
                Some(decomposition) => classes.push(ClassDecomposition {
                    label: regime.label.clone(),
                    representative: regime.representative,
                    decomposition,
                }),
                None => return,
            }
        }
        let value = self.objective.of(candidate);
        self.best = value;
        self.witness = Some(IntegerWitness { degrees: candidate.clone(), value, classes });
    }

    /// Whether some `sum + y`, with `y` a nonnegative combination of parts
    /// `< limit`, lies in every other class cone with objective below the
    /// incumbent.
    fn relaxation_feasible(&self, sum: &DegreeMultiset, limit: usize) -> bool {
        let d = self.limits.truncation as usize;
        let s: Vec<Rational> = sum
            .to_vector(self.limits.truncation)
            .expect("within truncation")
            .entries()
            .iter()
            .map(|&x| q(x as i64))
            .collect();
        let y: Vec<Vec<Rational>> = self.parts[..limit]
            .iter()
            .map(|e| {
                let v = e.degrees.to_vector(self.limits.truncation).expect("within truncation");
                v.entries().iter().map(|&x| q(x as i64)).collect()
            })
            .collect();
        let widths: Vec<usize> = self.class_vectors.iter().map(Vec::len).collect();
        let width = y.len() + widths.iter().sum::<usize>() + 1;
        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut offset = y.len();
        for (c, gens) in self.class_vectors.iter().enumerate() {
            for k in 0..d {
                let mut row = vec![Rational::zero(); width];
                for (j, v) in y.iter().enumerate() {
                    row[j] = v[k].clone();
                }
                for (j, g) in gens.iter().enumerate() {
                    row[offset + j] = -g[k].clone();
                }
                a.push(row);
                b.push(-s[k].clone());
            }
            offset += widths[c];
        }
        // objective(sum + y) + slack = best - 1
        let mut row = vec![Rational::zero(); width];
        for (j, v) in y.iter().enumerate() {
            row[j] = v
                .iter()
                .enumerate()
                .map(|(k, x)| x * q(self.objective.weight(k + 1)))
                .sum();
        }
        row[width - 1] = Rational::one();
        a.push(row);
        b.push(q(self.best as i64 - 1 - self.objective.of(sum) as i64));
        matches!(lp::feasible(&a, &b), Feasibility::Feasible(_))
    }
}
