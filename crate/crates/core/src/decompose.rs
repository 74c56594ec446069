//! Integer cone membership for degree multisets.
//!
//! A multiset is decomposable over a pool of groups when it is the multiset
//! union of the degrees of some finite list of pool entries (repetition
//! allowed). The search always branches on the largest remaining degree:
//! whichever part contains that degree has it as its own maximum, so only
//! pool entries with that maximum need to be tried. Residuals that failed are
//! remembered, and the memo is kept across calls on the same pool.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, GroupEntry};
use crate::degvec::DegreeMultiset;
use crate::error::{Error, Result};
use crate::primecover::{self, covers, units, PrimeCondition, Regime};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    /// Ids of the simple factors, in the order the search chose them.
    pub parts: Vec<String>,
}

impl Decomposition {
    /// Re-derives the degree multiset of the product from the catalog.
    pub fn degrees(&self, catalog: &Catalog) -> std::result::Result<DegreeMultiset, String> {
        let mut total = DegreeMultiset::new();
        for id in &self.parts {
            let entry = catalog
                .get(id)
                .ok_or_else(|| format!("unknown part {id}"))?;
            total.add_assign(&entry.degrees);
        }
        Ok(total)
    }

    pub fn verify(
        &self,
        target: &DegreeMultiset,
        catalog: &Catalog,
    ) -> std::result::Result<(), String> {
        let total = self.degrees(catalog)?;
        if &total != target {
            return Err(format!("parts sum to {total}, expected {target}"));
        }
        Ok(())
    }

    /// Parts sorted for display and comparison.
    pub fn sorted_parts(&self) -> Vec<String> {
        let mut p = self.parts.clone();
        p.sort();
        p
    }

    pub fn product_string(&self) -> String {
        self.parts.join(" x ")
    }
}

/// Reusable decomposition engine over a fixed pool.
pub struct Decomposer<'a> {
    entries: Vec<&'a GroupEntry>,
    by_max: HashMap<u32, Vec<usize>>,
    failures: HashSet<DegreeMultiset>,
    nodes: u64,
}

impl<'a> Decomposer<'a> {
    pub fn new<I: IntoIterator<Item = &'a GroupEntry>>(pool: I) -> Self {
        let mut seen = HashSet::new();
        let entries: Vec<&GroupEntry> = pool
            .into_iter()
            .filter(|e| seen.insert(e.id.clone()))
            .collect();
        let mut by_max: HashMap<u32, Vec<usize>> = HashMap::new();
        for (i, e) in entries.iter().enumerate() {
            by_max.entry(e.max_degree()).or_default().push(i);
        }
        Self {
            entries,
            by_max,
            failures: HashSet::new(),
            nodes: 0,
        }
    }

    pub fn pool(&self) -> &[&'a GroupEntry] {
        &self.entries
    }

    /// Search nodes visited so far.
    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    pub fn decompose(&mut self, target: &DegreeMultiset) -> Option<Decomposition> {
        let mut stack = Vec::new();
        let mut residual = target.clone();
        if self.search(&mut residual, &mut stack) {
            Some(Decomposition {
                parts: stack.iter().map(|&i| self.entries[i].id.clone()).collect(),
            })
        } else {
            None
        }
    }

    pub fn is_decomposable(&mut self, target: &DegreeMultiset) -> bool {
        let mut stack = Vec::new();
        self.search(&mut target.clone(), &mut stack)
    }

    fn search(&mut self, residual: &mut DegreeMultiset, stack: &mut Vec<usize>) -> bool {
        self.nodes += 1;
        let Some(h) = residual.max_degree() else {
            return true;
        };
        if self.failures.contains(residual) {
            return false;
        }
        let candidates = match self.by_max.get(&h) {
            Some(c) => c.clone(),
            None => Vec::new(),
        };
        for i in candidates {
            let part = &self.entries[i].degrees;
            if !part.is_submultiset_of(residual) {
                continue;
            }
            residual.subtract_unchecked(part);
            stack.push(i);
            if self.search(residual, stack) {
                residual.add_assign(part);
                return true;
            }
            stack.pop();
            residual.add_assign(part);
        }
        self.failures.insert(residual.clone());
        false
    }
}

/// Entries whose degree multiset could be a part of `target`.
pub fn fitting<'a>(target: &DegreeMultiset, pool: impl IntoIterator<Item = &'a GroupEntry>) -> Vec<&'a GroupEntry> {
    let h = target.max_degree().unwrap_or(0);
    pool.into_iter()
        .filter(|e| e.max_degree() <= h && e.degrees.is_submultiset_of(target))
        .collect()
}

pub fn decompose<'a>(
    target: &DegreeMultiset,
    pool: impl IntoIterator<Item = &'a GroupEntry>,
) -> Option<Decomposition> {
    Decomposer::new(fitting(target, pool)).decompose(target)
}

pub fn decompose_rational(target: &DegreeMultiset, catalog: &Catalog) -> Option<Decomposition> {
    decompose(target, catalog.entries().iter().filter(|e| e.is_rational()))
}

/// Decomposition using the `Q_p`-reflection groups for the prime `p`.
pub fn decomposable_at(target: &DegreeMultiset, p: u64, catalog: &Catalog) -> Option<Decomposition> {
    decompose(target, catalog.entries().iter().filter(|e| e.admissible_at(p)))
}

/// Entries realizable at every prime satisfying `condition`.
pub fn regime_pool<'a>(condition: &PrimeCondition, catalog: &'a Catalog) -> Vec<&'a GroupEntry> {
    catalog
        .entries()
        .iter()
        .filter(|e| condition.implies(&e.primes))
        .collect()
}

/// Decomposition valid simultaneously for every prime in the regime.
pub fn decomposable_in_regime(
    target: &DegreeMultiset,
    condition: &PrimeCondition,
    catalog: &Catalog,
) -> Option<Decomposition> {
    decompose(target, regime_pool(condition, catalog))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassDecomposition {
    pub label: String,
    pub representative: u64,
    pub decomposition: Decomposition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum ClassCheck {
    AllOk { classes: Vec<ClassDecomposition> },
    Fails { label: String, representative: u64 },
}

impl ClassCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, ClassCheck::AllOk { .. })
    }
}

/// Checks decomposability in each regime after confirming the regimes cover
/// all primes. Stops at the first regime without a decomposition.
pub fn all_prime_classes_ok(
    target: &DegreeMultiset,
    catalog: &Catalog,
    regimes: &[Regime],
) -> Result<ClassCheck> {
    let conditions: Vec<PrimeCondition> = regimes.iter().map(|r| r.condition.clone()).collect();
    let cover = covers(&conditions);
    if !cover.is_covered() {
        return Err(Error::ClassesDoNotCover(format!("{cover:?}")));
    }
    let mut classes = Vec::new();
    for r in regimes {
        match decomposable_in_regime(target, &r.condition, catalog) {
            Some(decomposition) => classes.push(ClassDecomposition {
                label: r.label.clone(),
                representative: r.representative,
                decomposition,
            }),
            None => {
                return Ok(ClassCheck::Fails {
                    label: r.label.clone(),
                    representative: r.representative,
                })
            }
        }
    }
    Ok(ClassCheck::AllOk { classes })
}

/// The distinct admissible pools, restricted to a fixed list of entries,
/// over all primes. Classes are the unit residues modulo the lcm of the
/// entries' conductors together with the primes dividing it.
#[derive(Clone, Debug)]
pub struct PoolClasses {
    pub modulus: u64,
    /// `(label, representative prime, indices into the entry list)`, keeping
    /// only pools that are minimal under inclusion.
    pub minimal: Vec<(String, u64, Vec<usize>)>,
}

pub fn pool_classes(entries: &[&GroupEntry]) -> Result<PoolClasses> {
    let modulus = primecover::lcm_of_moduli(entries.iter().map(|e| &e.primes));
    let count = primecover::euler_phi(modulus);
    if count > primecover::MAX_CLASSES {
        return Err(Error::TooManyClasses { modulus, count });
    }
    let mut special: BTreeSet<u64> = primecover::prime_factors(modulus).into_iter().collect();
    for e in entries {
        special.extend(e.primes.include.iter().chain(&e.primes.exclude).copied());
    }
    // pool -> first (label, prime) producing it
    let mut pools: BTreeMap<Vec<usize>, (String, u64)> = BTreeMap::new();
    let pool_at = |p: u64| -> Vec<usize> {
        (0..entries.len())
            .filter(|&i| entries[i].admissible_at(p))
            .collect()
    };
    for &p in &special {
        pools.entry(pool_at(p)).or_insert_with(|| (format!("p = {p}"), p));
    }
    for r in units(modulus) {
        let p = primecover::smallest_prime_in_class(r, modulus);
        if special.contains(&p) {
            // Class representative coincides with a special prime; use the
            // next prime in the class so it reflects the class behaviour.
            let mut q = p + modulus;
            while !primecover::is_prime(q) {
                q += modulus;
            }
            pools
                .entry(pool_at(q))
                .or_insert_with(|| (format!("p = {r} (mod {modulus})"), q));
        } else {
            pools
                .entry(pool_at(p))
                .or_insert_with(|| (format!("p = {r} (mod {modulus})"), p));
        }
    }
    let all: Vec<(Vec<usize>, (String, u64))> = pools.into_iter().collect();
    let is_subset = |a: &[usize], b: &[usize]| a.iter().all(|x| b.binary_search(x).is_ok());
    let mut minimal: Vec<(String, u64, Vec<usize>)> = all
        .iter()
        .filter(|(pool, _)| {
            !all.iter()
                .any(|(other, _)| other.len() < pool.len() && is_subset(other, pool))
        })
        .map(|(pool, (label, p))| (label.clone(), *p, pool.clone()))
        .collect();
    minimal.sort_by_key(|(_, p, pool)| (pool.len(), *p));
    Ok(PoolClasses { modulus, minimal })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum EverywhereCheck {
    Decomposable { classes: Vec<ClassDecomposition> },
    FailsAt { label: String, prime: u64 },
}

/// Exact test of decomposability at every prime. Only groups whose degrees
/// fit inside the target matter, so the classes are taken modulo the lcm of
/// their conductors; decomposability is monotone in the pool, so only the
/// minimal pools are examined.
pub fn decomposable_everywhere(target: &DegreeMultiset, catalog: &Catalog) -> Result<EverywhereCheck> {
    let fit = fitting(target, catalog.entries());
    let (rational, other): (Vec<&GroupEntry>, Vec<&GroupEntry>) =
        fit.into_iter().partition(|e| e.is_rational());
    let classes = pool_classes(&other)?;
    let mut out = Vec::new();
    for (label, prime, pool) in &classes.minimal {
        let entries = rational
            .iter()
            .copied()
            .chain(pool.iter().map(|&i| other[i]));
        match Decomposer::new(entries).decompose(target) {
            Some(decomposition) => out.push(ClassDecomposition {
                label: label.clone(),
                representative: *prime,
                decomposition,
            }),
            None => {
                return Ok(EverywhereCheck::FailsAt {
                    label: label.clone(),
                    prime: *prime,
                })
            }
        }
    }
    Ok(EverywhereCheck::Decomposable { classes: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primecover::rank66_regimes;

    const RANK66: &str =
        "2^8,3^2,4^8,5^2,6^7,7,8^7,9,10^5,11,12^5,13,14^5,16^3,18^2,20^2,22,24^2,26,28,30";
    const RANK68: &str = "2^8,4^8,6^8,8^8,10^6,12^5,14^6,16^4,18^3,20^3,22^2,24^3,26^2,28,30";

    fn ms(s: &str) -> DegreeMultiset {
        s.parse().unwrap()
    }

    #[test]
    fn small_rational_cases() {
        let cat = Catalog::generate(30);
        let d = decompose_rational(&ms("2,3"), &cat).unwrap();
        assert_eq!(d.parts, ["W(A2)"]);
        assert!(decompose_rational(&ms("3"), &cat).is_none());
        assert!(decompose_rational(&ms(""), &cat).unwrap().parts.is_empty());
        for p in [2, 3, 5, 7, 101] {
            assert_eq!(decomposable_at(&ms("2"), p, &cat).unwrap().parts, ["W(A1)"]);
        }
    }

    #[test]
    fn rank66_not_rational_but_decomposable_at_primes() {
        let cat = Catalog::builtin();
        let target = ms(RANK66);
        assert!(decompose_rational(&target, &cat).is_none());

        let at2 = decomposable_at(&target, 2, &cat).unwrap();
        at2.verify(&target, &cat).unwrap();
        assert!(at2.parts.contains(&"G24".to_string()));

        for p in [3, 5, 7, 17, 23, 31] {
            let d = decomposable_at(&target, p, &cat).unwrap_or_else(|| panic!("p = {p}"));
            d.verify(&target, &cat).unwrap();
        }
        let check = all_prime_classes_ok(&target, &cat, &rank66_regimes()).unwrap();
        assert!(check.is_ok(), "{check:?}");
    }

    #[test]
    fn rank68_classes() {
        let cat = Catalog::builtin();
        let check = all_prime_classes_ok(&ms(RANK68), &cat, &rank66_regimes()).unwrap();
        assert!(check.is_ok());
    }

    #[test]
    fn failing_and_uncovered_classes() {
        let cat = Catalog::generate(30);
        let check = all_prime_classes_ok(&ms("3"), &cat, &rank66_regimes()).unwrap();
        assert_eq!(
            check,
            ClassCheck::Fails {
                label: "p = 2".into(),
                representative: 2
            }
        );
        let mut regimes = rank66_regimes();
        regimes.pop();
        assert!(matches!(
            all_prime_classes_ok(&ms("2"), &cat, &regimes),
            Err(Error::ClassesDoNotCover(_))
        ));
    }

    #[test]
    fn everywhere_check_small() {
        let cat = Catalog::generate(30);
        // G24 alone is only realizable where sqrt(-7) exists.
        let check = decomposable_everywhere(&ms("4,6,14"), &cat).unwrap();
        assert!(matches!(check, EverywhereCheck::FailsAt { .. }));
        let check = decomposable_everywhere(&ms("2,3,4"), &cat).unwrap();
        assert!(matches!(check, EverywhereCheck::Decomposable { .. }));
    }

    #[test]
    fn memo_is_reused() {
        let cat = Catalog::generate(30);
        let mut dec = Decomposer::new(cat.entries().iter().filter(|e| e.is_rational()));
        assert!(!dec.is_decomposable(&ms(RANK66)));
        let first = dec.nodes();
        assert!(!dec.is_decomposable(&ms(RANK66)));
        assert_eq!(dec.nodes() - first, 1);
    }
}
