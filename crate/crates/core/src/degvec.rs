//! Degree multisets and degree vectors.
//!
//! A multiset `{d_1, ..., d_r}` is stored as a sorted map from degree to
//! multiplicity. The textual form is the exponent notation `2^8,3^2,4,...`
//! with strictly increasing degrees, which is also the canonical key used for
//! memoization and JSON output.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default truncation degree for vectors and cones.
pub const DEFAULT_TRUNCATION: u32 = 30;

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegreeMultiset {
    counts: BTreeMap<u32, u32>,
}

/// Outcome of Clark's large-prime degree condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum ClarkVerdict {
    Pass,
    Fail { missing: Vec<u32> },
}

impl DegreeMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a multiset from a list of degrees. Degrees below 2 are rejected.
    pub fn from_degrees<I: IntoIterator<Item = u32>>(degrees: I) -> Result<Self> {
        let mut ms = Self::new();
        for d in degrees {
            if d < 2 {
                return Err(Error::DegreeSyntax {
                    input: d.to_string(),
                    reason: "degrees must be at least 2".into(),
                });
            }
            ms.insert(d, 1);
        }
        Ok(ms)
    }

    pub(crate) fn insert(&mut self, degree: u32, mult: u32) {
        if mult > 0 {
            *self.counts.entry(degree).or_insert(0) += mult;
        }
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn multiplicity(&self, degree: u32) -> u32 {
        self.counts.get(&degree).copied().unwrap_or(0)
    }

    /// `(degree, multiplicity)` pairs in increasing degree order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (u32, u32)> + '_ {
        self.counts.iter().map(|(&d, &m)| (d, m))
    }

    /// All degrees with repetition, increasing.
    pub fn degrees(&self) -> Vec<u32> {
        self.iter()
            .flat_map(|(d, m)| std::iter::repeat_n(d, m as usize))
            .collect()
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn rank(&self) -> u32 {
        self.counts.values().sum()
    }

    /// Sum of `2d - 1` over all degrees.
    pub fn dimension(&self) -> u64 {
        self.iter().map(|(d, m)| (2 * d as u64 - 1) * m as u64).sum()
    }

    pub fn degree_sum(&self) -> u64 {
        self.iter().map(|(d, m)| d as u64 * m as u64).sum()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.counts.keys().next_back().copied()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.counts.keys().next().copied()
    }

    pub fn all_even(&self) -> bool {
        self.counts.keys().all(|d| d % 2 == 0)
    }

    /// Multiset sum.
    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (d, m) in other.iter() {
            self.insert(d, m);
        }
    }

    pub fn is_submultiset_of(&self, other: &Self) -> bool {
        self.iter().all(|(d, m)| other.multiplicity(d) >= m)
    }

    /// `self - other`, defined only when `other` is contained in `self`.
    pub fn subtract(&self, other: &Self) -> Result<Self> {
        if !other.is_submultiset_of(self) {
            return Err(Error::NotASubmultiset(other.to_string()));
        }
        let mut out = self.clone();
        out.subtract_unchecked(other);
        Ok(out)
    }

    pub(crate) fn subtract_unchecked(&mut self, other: &Self) {
        for (d, m) in other.iter() {
            let slot = self.counts.get_mut(&d).expect("caller checked containment");
            *slot -= m;
            if *slot == 0 {
                self.counts.remove(&d);
            }
        }
    }

    pub fn to_vector(&self, bound: u32) -> Result<DegreeVector> {
        if let Some(max) = self.max_degree() {
            if max > bound {
                return Err(Error::DegreeExceedsBound { degree: max, bound });
            }
        }
        let mut entries = vec![0u32; bound as usize];
        for (d, m) in self.iter() {
            entries[d as usize - 1] = m;
        }
        Ok(DegreeVector { entries })
    }

    /// Clark's condition: with `h` the largest degree, every `m <= h` with
    /// `gcd(m - 1, h) = 1` must occur.
    pub fn clark_check(&self) -> Result<ClarkVerdict> {
        let h = self.max_degree().ok_or(Error::EmptyMultiset)?;
        let missing: Vec<u32> = (2..=h)
            .filter(|&m| (m - 1).gcd(&h) == 1 && self.multiplicity(m) == 0)
            .collect();
        Ok(if missing.is_empty() {
            ClarkVerdict::Pass
        } else {
            ClarkVerdict::Fail { missing }
        })
    }
}

impl fmt::Display for DegreeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, m) in self.iter() {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            if m == 1 {
                write!(f, "{d}")?;
            } else {
                write!(f, "{d}^{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DegreeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

impl FromStr for DegreeMultiset {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let bad = |reason: &str| Error::DegreeSyntax {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let mut ms = Self::new();
        let trimmed = input.trim();
        // Tolerate the brace-wrapped form used in prose.
        let body = trimmed
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .unwrap_or(trimmed);
        if body.trim().is_empty() {
            return Ok(ms);
        }
        let mut last = 0u32;
        for term in body.split(',') {
            let term = term.trim();
            let (d, m) = match term.split_once('^') {
                Some((d, m)) => (d.trim(), m.trim()),
                None => (term, "1"),
            };
            let d: u32 = d.parse().map_err(|_| bad(&format!("bad degree {d:?}")))?;
            let m: u32 = m
                .parse()
                .map_err(|_| bad(&format!("bad multiplicity {m:?}")))?;
            if d < 2 {
                return Err(bad("degrees must be at least 2"));
            }
            if m == 0 {
                return Err(bad("zero multiplicity"));
            }
            if d <= last {
                return Err(bad("degrees must be strictly increasing"));
            }
            last = d;
            ms.insert(d, m);
        }
        Ok(ms)
    }
}

impl Serialize for DegreeMultiset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DegreeMultiset {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `(x_1, ..., x_D)` where `x_i` counts the degrees equal to `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DegreeVector {
    entries: Vec<u32>,
}

impl DegreeVector {
    pub fn bound(&self) -> u32 {
        self.entries.len() as u32
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn to_multiset(&self) -> DegreeMultiset {
        let mut ms = DegreeMultiset::new();
        for (i, &x) in self.entries.iter().enumerate() {
            ms.insert(i as u32 + 1, x);
        }
        ms
    }

    /// `sum w_i x_i`, zero-padding the shorter side.
    pub fn inner_product(&self, weights: &[i64]) -> i64 {
        inner_product(weights, self)
    }
}

pub fn inner_product(weights: &[i64], v: &DegreeVector) -> i64 {
    weights
        .iter()
        .zip(&v.entries)
        .map(|(&w, &x)| w * x as i64)
        .sum()
}
