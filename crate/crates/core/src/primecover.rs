//! Congruence conditions on primes.
//!
//! A [`PrimeCondition`] is the splitting condition of an abelian number
//! field: a set of unit residues modulo the conductor, with primes dividing
//! the conductor decided only by the explicit include/exclude lists.
//! Whether a finite list of conditions covers every prime is decided exactly
//! by enumerating unit classes modulo the lcm of the moduli; each such class
//! contains infinitely many primes by Dirichlet's theorem, so an uncovered
//! class is a genuine counterexample.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper limit on the number of unit classes enumerated in one call.
pub const MAX_CLASSES: u64 = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeCondition {
    #[serde(rename = "mod")]
    pub modulus: u64,
    pub residues: Vec<u64>,
    #[serde(default)]
    pub include: Vec<u64>,
    #[serde(default)]
    pub exclude: Vec<u64>,
}

impl PrimeCondition {
    pub fn all_primes() -> Self {
        Self {
            modulus: 1,
            residues: vec![0],
            include: vec![],
            exclude: vec![],
        }
    }

    pub fn only(primes: &[u64]) -> Self {
        Self {
            modulus: 1,
            residues: vec![],
            include: primes.to_vec(),
            exclude: vec![],
        }
    }

    /// Primes congruent to one of `residues` modulo `modulus`.
    pub fn residues(modulus: u64, residues: &[u64]) -> Self {
        let mut r: Vec<u64> = residues.iter().map(|x| x % modulus).collect();
        r.sort_unstable();
        r.dedup();
        Self {
            modulus,
            residues: r,
            include: vec![],
            exclude: vec![],
        }
    }

    pub fn with_include(mut self, primes: &[u64]) -> Self {
        self.include.extend_from_slice(primes);
        self.include.sort_unstable();
        self.include.dedup();
        self
    }

    pub fn is_all_primes(&self) -> bool {
        self.modulus == 1 && self.residues == [0] && self.exclude.is_empty()
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.modulus == 0 {
            return Err("modulus must be positive".into());
        }
        for &r in &self.residues {
            if r >= self.modulus || r.gcd(&self.modulus) != 1 {
                return Err(format!("{r} is not a unit modulo {}", self.modulus));
            }
        }
        for p in self.include.iter().chain(&self.exclude) {
            if !is_prime(*p) {
                return Err(format!("{p} in include/exclude list is not prime"));
            }
        }
        if self.include.iter().any(|p| self.exclude.contains(p)) {
            return Err("include and exclude lists intersect".into());
        }
        Ok(())
    }

    pub fn holds(&self, p: u64) -> bool {
        if self.include.contains(&p) {
            return true;
        }
        if self.exclude.contains(&p) || self.modulus.is_multiple_of(p) && self.modulus > 1 {
            return false;
        }
        self.holds_for_class(p)
    }

    /// Residue test only; `r` must be coprime to the modulus.
    fn holds_for_class(&self, r: u64) -> bool {
        self.residues.binary_search(&(r % self.modulus)).is_ok()
    }

    fn special_primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.include.iter().chain(&self.exclude).copied()
    }

    /// Every prime satisfying `self` also satisfies `other`.
    pub fn implies(&self, other: &PrimeCondition) -> bool {
        let l = self.modulus.lcm(&other.modulus);
        let mut special: BTreeSet<u64> = prime_factors(l).into_iter().collect();
        special.extend(self.special_primes());
        special.extend(other.special_primes());
        if special.iter().any(|&p| self.holds(p) && !other.holds(p)) {
            return false;
        }
        units(l).all(|r| !self.holds_for_class(r) || other.holds_for_class(r))
    }

    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        if self.is_all_primes() {
            return "all p".into();
        }
        if !self.residues.is_empty() {
            let rs: Vec<String> = self.residues.iter().map(u64::to_string).collect();
            parts.push(format!("p = {} (mod {})", rs.join(","), self.modulus));
        }
        if !self.include.is_empty() {
            let ps: Vec<String> = self.include.iter().map(u64::to_string).collect();
            parts.push(format!("p in {{{}}}", ps.join(",")));
        }
        let mut s = parts.join(" or ");
        if !self.exclude.is_empty() {
            let ps: Vec<String> = self.exclude.iter().map(u64::to_string).collect();
            s.push_str(&format!(" except {{{}}}", ps.join(",")));
        }
        s
    }
}

/// A congruence regime together with the prime used to label it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Regime {
    pub label: String,
    pub condition: PrimeCondition,
    pub representative: u64,
}

impl Regime {
    pub fn new(label: &str, condition: PrimeCondition, representative: u64) -> Self {
        Self {
            label: label.to_string(),
            condition,
            representative,
        }
    }

    /// The regime consisting of a single prime.
    pub fn prime(p: u64) -> Self {
        Self::new(&format!("p = {p}"), PrimeCondition::only(&[p]), p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum CoverOutcome {
    Covered { modulus: u64 },
    UncoveredClass { modulus: u64, residue: u64 },
    UncoveredPrime { prime: u64 },
}

impl CoverOutcome {
    pub fn is_covered(&self) -> bool {
        matches!(self, CoverOutcome::Covered { .. })
    }
}

/// Decides whether every prime satisfies at least one condition.
pub fn covers(conditions: &[PrimeCondition]) -> CoverOutcome {
    let l = lcm_of_moduli(conditions);
    let mut special: BTreeSet<u64> = prime_factors(l).into_iter().collect();
    for c in conditions {
        special.extend(c.special_primes());
    }
    for &p in &special {
        if !conditions.iter().any(|c| c.holds(p)) {
            return CoverOutcome::UncoveredPrime { prime: p };
        }
    }
    for r in units(l) {
        if !conditions.iter().any(|c| c.holds_for_class(r)) {
            return CoverOutcome::UncoveredClass {
                modulus: l,
                residue: r,
            };
        }
    }
    CoverOutcome::Covered { modulus: l }
}

pub fn lcm_of_moduli<'a, I: IntoIterator<Item = &'a PrimeCondition>>(conditions: I) -> u64 {
    conditions
        .into_iter()
        .fold(1u64, |acc, c| acc.lcm(&c.modulus))
}

/// One prime per unit class modulo the lcm of the moduli (the smallest one),
/// plus the primes dividing the lcm; sorted and deduplicated.
pub fn class_representatives(conditions: &[PrimeCondition]) -> Result<Vec<u64>> {
    let l = lcm_of_moduli(conditions);
    representatives_mod(l)
}

pub fn representatives_mod(l: u64) -> Result<Vec<u64>> {
    let count = euler_phi(l);
    if count > MAX_CLASSES {
        return Err(Error::TooManyClasses { modulus: l, count });
    }
    let mut reps: BTreeSet<u64> = prime_factors(l).into_iter().collect();
    for r in units(l) {
        reps.insert(smallest_prime_in_class(r, l));
    }
    if reps.is_empty() {
        reps.insert(2);
    }
    Ok(reps.into_iter().collect())
}

/// Smallest prime congruent to `r` modulo `l`, with `gcd(r, l) = 1`.
pub fn smallest_prime_in_class(r: u64, l: u64) -> u64 {
    let mut p = if l == 1 { 2 } else { r % l };
    if p < 2 {
        p += l;
    }
    loop {
        if is_prime(p) {
            return p;
        }
        p += l.max(1);
    }
}

pub fn units(l: u64) -> impl Iterator<Item = u64> {
    let start = if l == 1 { 0 } else { 1 };
    (start..l.max(1)).filter(move |r| r.gcd(&l) == 1)
}

pub fn euler_phi(n: u64) -> u64 {
    prime_factors(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p - 1))
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| is_prime(p)).collect()
}

/// The five congruence regimes of the rank-66 example.
pub fn rank66_regimes() -> Vec<Regime> {
    vec![
        Regime::new("p = 2", PrimeCondition::only(&[2]), 2),
        Regime::new("p = 1,3 (mod 8)", PrimeCondition::residues(8, &[1, 3]), 17),
        Regime::new("p = 5 (mod 8)", PrimeCondition::residues(8, &[5]), 5),
        Regime::new("p = 7 (mod 24)", PrimeCondition::residues(24, &[7]), 31),
        Regime::new("p = 23 (mod 24)", PrimeCondition::residues(24, &[23]), 23),
    ]
}

/// The covering list used to reduce the intersection of all `K_p` to five cones.
pub fn cone_theorem_cover() -> Vec<PrimeCondition> {
    vec![
        PrimeCondition::only(&[2]),
        PrimeCondition::residues(8, &[1, 3]),
        PrimeCondition::residues(4, &[1]),
        PrimeCondition::residues(24, &[1, 7]),
        PrimeCondition::residues(24, &[1, 23]),
    ]
}
