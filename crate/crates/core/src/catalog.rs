//! Simple rational and p-adic reflection groups.
//!
//! Each entry records the degrees of a simple complex reflection group and
//! the primes `p` at which it is realizable over the p-adic numbers. A group
//! is realizable over `Q_p` exactly when the field generated by the traces of
//! its reflection representation embeds in `Q_p`; all such fields are abelian,
//! so the condition is a congruence on `p` modulo the field's conductor.
//! Primes dividing the conductor ramify in the field and are never admissible.

use std::collections::BTreeSet;
use std::fmt;
use std::io::BufRead;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::degvec::DegreeMultiset;
use crate::error::{Error, Result};
use crate::primecover::{units, PrimeCondition};

/// Degree bound to which the builtin catalog lists the infinite families.
pub const BUILTIN_MAX_DEGREE: u32 = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WeylSeries {
    A,
    B,
    D,
    E6,
    E7,
    E8,
    F4,
    G2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "lowercase")]
pub enum Family {
    Weyl { series: WeylSeries, n: u32 },
    Imprimitive { m: u32, e: u32, n: u32 },
    Cyclic { m: u32 },
    Sporadic { index: u32 },
}

/// One row of the Shephard-Todd table of exceptional groups.
struct SporadicRow {
    index: u32,
    degrees: &'static [u32],
    /// Conductor and splitting residues of the field of definition.
    conductor: u64,
    residues: &'static [u64],
    cross_checked: bool,
}

const fn row(
    index: u32,
    degrees: &'static [u32],
    conductor: u64,
    residues: &'static [u64],
    cross_checked: bool,
) -> SporadicRow {
    SporadicRow {
        index,
        degrees,
        conductor,
        residues,
        cross_checked,
    }
}

#[rustfmt::skip]
static SPORADIC: &[SporadicRow] = &[
    row(4,  &[4, 6],                   3,  &[1],       false), // Q(zeta_3)
    row(5,  &[6, 12],                  3,  &[1],       false),
    row(6,  &[4, 12],                  12, &[1],       false), // Q(zeta_12)
    row(7,  &[12, 12],                 12, &[1],       false),
    row(8,  &[8, 12],                  4,  &[1],       true),  // Q(i)
    row(9,  &[8, 24],                  8,  &[1],       false), // Q(zeta_8)
    row(10, &[12, 24],                 12, &[1],       false),
    row(11, &[24, 24],                 24, &[1],       false), // Q(zeta_24)
    row(12, &[6, 8],                   8,  &[1, 3],    true),  // Q(sqrt -2)
    row(13, &[8, 12],                  8,  &[1],       false),
    row(14, &[6, 24],                  24, &[1, 19],   false), // Q(zeta_3, sqrt -2)
    row(15, &[12, 24],                 24, &[1],       false),
    row(16, &[20, 30],                 5,  &[1],       false), // Q(zeta_5)
    row(17, &[20, 60],                 20, &[1],       false), // Q(zeta_20)
    row(18, &[30, 60],                 15, &[1],       false), // Q(zeta_15)
    row(19, &[60, 60],                 60, &[1],       false), // Q(zeta_60)
    row(20, &[12, 30],                 15, &[1, 4],    false), // Q(zeta_3, sqrt 5)
    row(21, &[12, 60],                 60, &[1, 49],   false), // Q(zeta_12, sqrt 5)
    row(22, &[12, 20],                 20, &[1, 9],    false), // Q(i, sqrt 5)
    row(23, &[2, 6, 10],               5,  &[1, 4],    false), // H3, Q(sqrt 5)
    row(24, &[4, 6, 14],               7,  &[1, 2, 4], true),  // Q(sqrt -7)
    row(25, &[6, 9, 12],               3,  &[1],       false),
    row(26, &[6, 12, 18],              3,  &[1],       false),
    row(27, &[6, 12, 30],              15, &[1, 4],    false),
    row(28, &[2, 6, 8, 12],            1,  &[0],       true),  // F4
    row(29, &[4, 8, 12, 20],           4,  &[1],       true),
    row(30, &[2, 12, 20, 30],          5,  &[1, 4],    false), // H4
    row(31, &[8, 12, 20, 24],          4,  &[1],       true),
    row(32, &[12, 18, 24, 30],         3,  &[1],       false),
    row(33, &[4, 6, 10, 12, 18],       3,  &[1],       false),
    row(34, &[6, 12, 18, 24, 30, 42],  3,  &[1],       false),
    row(35, &[2, 5, 6, 8, 9, 12],      1,  &[0],       true),  // E6
    row(36, &[2, 6, 8, 10, 12, 14, 18], 1, &[0],       true),  // E7
    row(37, &[2, 8, 12, 14, 18, 20, 24, 30], 1, &[0],  true),  // E8
];

/// Shephard-Todd indices of the rational exceptional groups; these are
/// catalogued under their Weyl names.
pub const RATIONAL_SPORADIC: [u32; 4] = [28, 35, 36, 37];

fn sporadic_row(index: u32) -> Option<&'static SporadicRow> {
    SPORADIC.iter().find(|r| r.index == index)
}

impl Family {
    pub fn weyl(series: WeylSeries, n: u32) -> Self {
        Family::Weyl { series, n }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidFamily(msg));
        match *self {
            Family::Weyl { series, n } => {
                let ok = match series {
                    WeylSeries::A => n >= 1,
                    WeylSeries::B => n >= 2,
                    WeylSeries::D => n >= 4,
                    WeylSeries::E6 => n == 6,
                    WeylSeries::E7 => n == 7,
                    WeylSeries::E8 => n == 8,
                    WeylSeries::F4 => n == 4,
                    WeylSeries::G2 => n == 2,
                };
                if !ok {
                    return bad(format!("no Weyl group {series:?}{n}"));
                }
            }
            Family::Imprimitive { m, e, n } => {
                if m < 3 {
                    return bad(format!("G({m},{e},{n}): m must be at least 3"));
                }
                if e == 0 || m % e != 0 {
                    return bad(format!("G({m},{e},{n}): e must divide m"));
                }
                if n < 2 {
                    return bad(format!("G({m},{e},{n}): n must be at least 2"));
                }
                if e == m && n == 2 && matches!(m, 3 | 4 | 6) {
                    return bad(format!("G({m},{m},2) is a Weyl group"));
                }
            }
            Family::Cyclic { m } => {
                if m < 3 {
                    return bad(format!("Z/{m}: m must be at least 3"));
                }
            }
            Family::Sporadic { index } => {
                if !(4..=37).contains(&index) {
                    return bad(format!("G{index} is not a Shephard-Todd index"));
                }
            }
        }
        Ok(())
    }

    pub fn is_rational(&self) -> bool {
        match *self {
            Family::Weyl { .. } => true,
            Family::Sporadic { index } => RATIONAL_SPORADIC.contains(&index),
            _ => false,
        }
    }

    pub fn id(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::Weyl { series, n } => match series {
                WeylSeries::A | WeylSeries::B | WeylSeries::D => write!(f, "W({series:?}{n})"),
                _ => write!(f, "W({series:?})"),
            },
            Family::Imprimitive { m, e, n } => write!(f, "G({m},{e},{n})"),
            Family::Cyclic { m } => write!(f, "Z/{m}"),
            Family::Sporadic { index } => write!(f, "G{index}"),
        }
    }
}

/// Degrees of the group in a family.
pub fn degrees_of(family: &Family) -> Result<DegreeMultiset> {
    family.validate()?;
    let degrees: Vec<u32> = match *family {
        Family::Weyl { series, n } => match series {
            WeylSeries::A => (2..=n + 1).collect(),
            WeylSeries::B => (1..=n).map(|i| 2 * i).collect(),
            WeylSeries::D => (1..n).map(|i| 2 * i).chain([n]).collect(),
            WeylSeries::G2 => vec![2, 6],
            WeylSeries::F4 => vec![2, 6, 8, 12],
            WeylSeries::E6 => vec![2, 5, 6, 8, 9, 12],
            WeylSeries::E7 => vec![2, 6, 8, 10, 12, 14, 18],
            WeylSeries::E8 => vec![2, 8, 12, 14, 18, 20, 24, 30],
        },
        Family::Imprimitive { m, e, n } => (1..n).map(|i| i * m).chain([n * m / e]).collect(),
        Family::Cyclic { m } => vec![m],
        Family::Sporadic { index } => sporadic_row(index)
            .expect("validated index")
            .degrees
            .to_vec(),
    };
    DegreeMultiset::from_degrees(degrees)
}

fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Group order from the closed formulas (independent of the degrees for the
/// Weyl and imprimitive families).
pub fn order_of(family: &Family) -> Result<BigUint> {
    family.validate()?;
    Ok(match *family {
        Family::Weyl { series, n } => match series {
            WeylSeries::A => factorial(n + 1),
            WeylSeries::B => BigUint::from(2u32).pow(n) * factorial(n),
            WeylSeries::D => BigUint::from(2u32).pow(n - 1) * factorial(n),
            WeylSeries::G2 => BigUint::from(12u32),
            WeylSeries::F4 => BigUint::from(1152u32),
            WeylSeries::E6 => BigUint::from(51_840u32),
            WeylSeries::E7 => BigUint::from(2_903_040u32),
            WeylSeries::E8 => BigUint::from(696_729_600u32),
        },
        Family::Imprimitive { m, e, n } => BigUint::from(m).pow(n) * factorial(n) / e,
        Family::Cyclic { m } => BigUint::from(m),
        Family::Sporadic { .. } => degrees_of(family)?
            .degrees()
            .into_iter()
            .fold(BigUint::one(), |acc, d| acc * d),
    })
}

/// Reduces a subgroup `H` of `(Z/m)^*` (the Galois group fixing a subfield of
/// the `m`-th cyclotomic field) to the subfield's conductor and residue set.
pub fn condition_from_subgroup(m: u64, subgroup: &BTreeSet<u64>) -> PrimeCondition {
    let mut divisors: Vec<u64> = (1..=m).filter(|d| m.is_multiple_of(*d)).collect();
    divisors.sort_unstable();
    for n in divisors {
        let kernel_inside = units(m)
            .filter(|t| t % n == 1 % n)
            .all(|t| subgroup.contains(&t));
        if kernel_inside {
            let residues: Vec<u64> = subgroup.iter().map(|h| h % n).collect();
            return PrimeCondition::residues(n, &residues);
        }
    }
    unreachable!("n = m always qualifies")
}

/// `zeta^a + zeta^b == zeta^c + zeta^d` for a primitive `m`-th root of unity.
///
/// A vanishing sum of four roots of unity splits into two vanishing pairs,
/// so equality holds iff the exponent pairs agree or both pairs are antipodal.
fn two_term_sums_equal(m: u64, (a, b): (u64, u64), (c, d): (u64, u64)) -> bool {
    let (a, b, c, d) = (a % m, b % m, c % m, d % m);
    if (a == c && b == d) || (a == d && b == c) {
        return true;
    }
    m.is_multiple_of(2) && (a + m - b) % m == m / 2 && (c + m - d) % m == m / 2
}

/// Splitting condition for the field of definition of a family member.
pub fn field_condition(family: &Family) -> Result<PrimeCondition> {
    family.validate()?;
    Ok(match *family {
        Family::Weyl { .. } => PrimeCondition::all_primes(),
        Family::Cyclic { m } => condition_from_subgroup(m as u64, &BTreeSet::from([1])),
        Family::Imprimitive { m, n, .. } if n >= 3 => {
            condition_from_subgroup(m as u64, &BTreeSet::from([1]))
        }
        Family::Imprimitive { m, e, .. } => {
            // Rank 2: traces of the diagonal elements diag(z^k, z^j) with
            // e | k + j generate the field; antidiagonal elements have trace 0.
            let (m, e) = (m as u64, e as u64);
            let gens: Vec<(u64, u64)> = (0..m)
                .flat_map(|k| (0..m).map(move |j| (k, j)))
                .filter(|(k, j)| (k + j) % e == 0)
                .collect();
            let subgroup: BTreeSet<u64> = units(m)
                .filter(|&t| {
                    gens.iter()
                        .all(|&(k, j)| two_term_sums_equal(m, (t * k, t * j), (k, j)))
                })
                .collect();
            condition_from_subgroup(m, &subgroup)
        }
        Family::Sporadic { index } => {
            let r = sporadic_row(index).expect("validated index");
            PrimeCondition::residues(r.conductor, r.residues)
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupEntry {
    pub id: String,
    pub family: Family,
    pub rank: u32,
    pub degrees: DegreeMultiset,
    pub primes: PrimeCondition,
    pub order: BigUint,
    pub source: String,
}

impl GroupEntry {
    pub fn from_family(family: Family) -> Result<Self> {
        let degrees = degrees_of(&family)?;
        let source = match family {
            Family::Weyl { .. } => "weyl-formula".to_string(),
            Family::Imprimitive { .. } | Family::Cyclic { .. } => "family-formula".to_string(),
            Family::Sporadic { index } => {
                if sporadic_row(index).is_some_and(|r| r.cross_checked) {
                    "st-table:cross-checked".to_string()
                } else {
                    "st-table:unverified".to_string()
                }
            }
        };
        Ok(Self {
            id: family.id(),
            rank: degrees.rank(),
            primes: field_condition(&family)?,
            order: order_of(&family)?,
            degrees,
            family,
            source,
        })
    }

    pub fn is_rational(&self) -> bool {
        self.family.is_rational()
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees.max_degree().unwrap_or(0)
    }

    /// Checks the per-entry invariants.
    pub fn validate(&self) -> std::result::Result<(), String> {
        self.family.validate().map_err(|e| e.to_string())?;
        if self.id != self.family.id() {
            return Err(format!("id {} does not match family {}", self.id, self.family));
        }
        if self.degrees.rank() != self.rank {
            return Err(format!(
                "{}: {} degrees but rank {}",
                self.id,
                self.degrees.rank(),
                self.rank
            ));
        }
        if self.rank == 0 {
            return Err(format!("{}: rank must be positive", self.id));
        }
        let product = self
            .degrees
            .degrees()
            .into_iter()
            .fold(BigUint::one(), |acc, d| acc * d);
        if product != self.order {
            return Err(format!(
                "{}: product of degrees {product} differs from order {}",
                self.id, self.order
            ));
        }
        self.primes.validate().map_err(|e| format!("{}: {e}", self.id))?;
        if self.is_rational() && !self.primes.is_all_primes() {
            return Err(format!("{}: rational group must exist at every prime", self.id));
        }
        Ok(())
    }

    /// Whether the group is a `Q_p`-reflection group.
    pub fn admissible_at(&self, p: u64) -> bool {
        self.primes.holds(p)
    }

    /// The catalog line for this entry as a JSON value.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(EntryRecord::from(self)).expect("serializable")
    }
}

/// Wire form of a catalog line.
#[derive(Serialize, Deserialize)]
struct EntryRecord {
    id: String,
    family: Family,
    rank: u32,
    degrees: Vec<u32>,
    order: String,
    primes: PrimeCondition,
    source: String,
}

impl From<&GroupEntry> for EntryRecord {
    fn from(e: &GroupEntry) -> Self {
        EntryRecord {
            id: e.id.clone(),
            family: e.family,
            rank: e.rank,
            degrees: e.degrees.degrees(),
            order: e.order.to_string(),
            primes: e.primes.clone(),
            source: e.source.clone(),
        }
    }
}

impl TryFrom<EntryRecord> for GroupEntry {
    type Error = String;

    fn try_from(r: EntryRecord) -> std::result::Result<Self, String> {
        let degrees = DegreeMultiset::from_degrees(r.degrees).map_err(|e| e.to_string())?;
        let order: BigUint = r
            .order
            .parse()
            .map_err(|_| format!("bad order {:?}", r.order))?;
        Ok(GroupEntry {
            id: r.id,
            family: r.family,
            rank: r.rank,
            degrees,
            primes: r.primes,
            order,
            source: r.source,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum PrimeFilter {
    /// Every entry.
    Any,
    /// Simple `Q`-reflection groups.
    Rational,
    /// `Q_p`-reflection groups for this prime.
    Prime(u64),
    /// Groups realizable at every prime satisfying the condition.
    Class(PrimeCondition),
}

impl PrimeFilter {
    pub fn accepts(&self, entry: &GroupEntry) -> bool {
        match self {
            PrimeFilter::Any => true,
            PrimeFilter::Rational => entry.is_rational(),
            PrimeFilter::Prime(p) => entry.admissible_at(*p),
            PrimeFilter::Class(c) => c.implies(&entry.primes),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationFilter {
    pub max_rank: Option<u32>,
    pub max_degree: Option<u32>,
    pub primes: PrimeFilter,
    pub non_rational_only: bool,
}

impl EnumerationFilter {
    pub fn new(primes: PrimeFilter) -> Self {
        Self {
            max_rank: None,
            max_degree: None,
            primes,
            non_rational_only: false,
        }
    }

    pub fn max_rank(mut self, r: u32) -> Self {
        self.max_rank = Some(r);
        self
    }

    pub fn max_degree(mut self, d: u32) -> Self {
        self.max_degree = Some(d);
        self
    }

    pub fn non_rational(mut self) -> Self {
        self.non_rational_only = true;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    entries: Vec<GroupEntry>,
    pub source: String,
}

impl Catalog {
    /// Validates, sorts by `(rank, id)` and checks ids are unique.
    pub fn new(mut entries: Vec<GroupEntry>, source: &str) -> Result<Self> {
        for (index, e) in entries.iter().enumerate() {
            e.validate()
                .map_err(|reason| Error::CatalogRecord { index, reason })?;
        }
        entries.sort_by(|a, b| (a.rank, &a.id).cmp(&(b.rank, &b.id)));
        for w in entries.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::CatalogRecord {
                    index: 0,
                    reason: format!("duplicate id {}", w[0].id),
                });
            }
        }
        Ok(Self {
            entries,
            source: source.to_string(),
        })
    }

    /// Every simple reflection group whose degrees are at most `max_degree`.
    pub fn generate(max_degree: u32) -> Self {
        let d = max_degree;
        let mut families = Vec::new();
        for n in 1..d {
            families.push(Family::weyl(WeylSeries::A, n));
        }
        families.extend((2..=d / 2).map(|n| Family::weyl(WeylSeries::B, n)));
        families.extend(
            (4..)
                .take_while(|&n| 2 * n - 2 <= d)
                .map(|n| Family::weyl(WeylSeries::D, n)),
        );
        for (series, n) in [
            (WeylSeries::G2, 2),
            (WeylSeries::F4, 4),
            (WeylSeries::E6, 6),
            (WeylSeries::E7, 7),
            (WeylSeries::E8, 8),
        ] {
            families.push(Family::weyl(series, n));
        }
        families.extend((3..=d).map(|m| Family::Cyclic { m }));
        for m in 3..=d {
            for e in (1..=m).filter(|e| m % e == 0) {
                for n in 2.. {
                    if (n - 1) * m > d || n * m / e > d {
                        break;
                    }
                    let f = Family::Imprimitive { m, e, n };
                    if f.validate().is_ok() {
                        families.push(f);
                    }
                }
            }
        }
        families.extend(
            SPORADIC
                .iter()
                .filter(|r| !RATIONAL_SPORADIC.contains(&r.index))
                .map(|r| Family::Sporadic { index: r.index }),
        );
        let entries: Vec<GroupEntry> = families
            .into_iter()
            .map(|f| GroupEntry::from_family(f).expect("generated families are valid"))
            .filter(|e| e.max_degree() <= d)
            .collect();
        Self::new(entries, &format!("builtin:max_degree={d}")).expect("builtin catalog is valid")
    }

    pub fn builtin() -> Self {
        Self::generate(BUILTIN_MAX_DEGREE)
    }

    pub fn empty() -> Self {
        Self {
            entries: Vec::new(),
            source: "empty".into(),
        }
    }

    pub fn entries(&self) -> &[GroupEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&GroupEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    /// Entries admitted by the filter, in catalog order.
    pub fn enumerate(&self, filter: &EnumerationFilter) -> Result<Vec<&GroupEntry>> {
        if filter.max_rank.is_none() && filter.max_degree.is_none() {
            return Err(Error::UnboundedEnumeration);
        }
        Ok(self
            .entries
            .iter()
            .filter(|e| filter.max_rank.is_none_or(|r| e.rank <= r))
            .filter(|e| filter.max_degree.is_none_or(|d| e.max_degree() <= d))
            .filter(|e| !filter.non_rational_only || !e.is_rational())
            .filter(|e| filter.primes.accepts(e))
            .collect())
    }

    /// Entries matching the prime filter with degrees at most `max_degree`.
    pub fn slice(&self, primes: &PrimeFilter, max_degree: u32) -> Vec<GroupEntry> {
        self.enumerate(&EnumerationFilter::new(primes.clone()).max_degree(max_degree))
            .expect("bounded")
            .into_iter()
            .cloned()
            .collect()
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&serde_json::to_string(&EntryRecord::from(e)).expect("serializable"));
            out.push('\n');
        }
        out
    }

    pub fn from_reader<R: BufRead>(reader: R, source: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut seen = BTreeSet::new();
        for (index, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let record: EntryRecord = serde_json::from_str(&line).map_err(|e| {
                Error::CatalogRecord {
                    index,
                    reason: format!("malformed record: {e}"),
                }
            })?;
            let entry =
                GroupEntry::try_from(record).map_err(|reason| Error::CatalogRecord { index, reason })?;
            entry
                .validate()
                .map_err(|reason| Error::CatalogRecord { index, reason })?;
            if !seen.insert(entry.id.clone()) {
                return Err(Error::CatalogRecord {
                    index,
                    reason: format!("duplicate id {}", entry.id),
                });
            }
            entries.push(entry);
        }
        Self::new(entries, source)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::from_reader(std::io::BufReader::new(file), &path.display().to_string())
    }

    /// Stable digest of the catalog contents.
    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        hex::encode(Sha256::digest(self.to_jsonl().as_bytes()))
    }

    /// A copy with one entry's degrees replaced; the order is recomputed so
    /// the result still satisfies the entry invariants.
    pub fn with_degrees(&self, id: &str, degrees: DegreeMultiset) -> Result<Self> {
        let mut entries = self.entries.clone();
        let entry = entries
            .iter_mut()
            .find(|e| e.id == id)
            .ok_or_else(|| Error::InvalidFamily(format!("no entry {id}")))?;
        entry.order = degrees
            .degrees()
            .into_iter()
            .fold(BigUint::one(), |acc, d| acc * d);
        entry.rank = degrees.rank();
        entry.degrees = degrees;
        Self::new(entries, &format!("{}+mutated", self.source))
    }

    pub fn without(&self, id: &str) -> Self {
        Self {
            entries: self.entries.iter().filter(|e| e.id != id).cloned().collect(),
            source: format!("{}-{id}", self.source),
        }
    }

    pub fn filtered<F: Fn(&GroupEntry) -> bool>(&self, keep: F) -> Self {
        Self {
            entries: self.entries.iter().filter(|e| keep(e)).cloned().collect(),
            source: format!("{}+filtered", self.source),
        }
    }
}

/// Parses a group id such as `W(B14)`, `W(E8)`, `G(4,2,7)`, `G24` or `Z/5`.
pub fn parse_id(id: &str) -> Result<Family> {
    let bad = || Error::InvalidFamily(format!("unrecognized group id {id:?}"));
    let family = if let Some(inner) = id.strip_prefix("W(").and_then(|s| s.strip_suffix(')')) {
        let (series, n) = match inner {
            "G2" => (WeylSeries::G2, 2),
            "F4" => (WeylSeries::F4, 4),
            "E6" => (WeylSeries::E6, 6),
            "E7" => (WeylSeries::E7, 7),
            "E8" => (WeylSeries::E8, 8),
            _ => {
                let (s, n) = inner.split_at(1);
                let n: u32 = n.parse().map_err(|_| bad())?;
                let series = match s {
                    "A" => WeylSeries::A,
                    "B" | "C" => WeylSeries::B,
                    "D" => WeylSeries::D,
                    _ => return Err(bad()),
                };
                (series, n)
            }
        };
        Family::weyl(series, n)
    } else if let Some(inner) = id.strip_prefix("G(").and_then(|s| s.strip_suffix(')')) {
        let parts: Vec<u32> = inner
            .split(',')
            .map(|s| s.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let [m, e, n] = parts[..] else {
            return Err(bad());
        };
        Family::Imprimitive { m, e, n }
    } else if let Some(m) = id.strip_prefix("Z/") {
        Family::Cyclic {
            m: m.parse().map_err(|_| bad())?,
        }
    } else if let Some(i) = id.strip_prefix('G') {
        let index: u32 = i.parse().map_err(|_| bad())?;
        match index {
            28 => Family::weyl(WeylSeries::F4, 4),
            35 => Family::weyl(WeylSeries::E6, 6),
            36 => Family::weyl(WeylSeries::E7, 7),
            37 => Family::weyl(WeylSeries::E8, 8),
            _ => Family::Sporadic { index },
        }
    } else {
        return Err(bad());
    };
    family.validate()?;
    Ok(family)
}

/// Parses a product written in Dynkin shorthand, e.g. `A4B4B5B8B8E8A12B14`.
pub fn parse_weyl_word(word: &str) -> Result<Vec<Family>> {
    let bad = || Error::InvalidFamily(format!("bad Weyl product {word:?}"));
    let bytes = word.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let letter = bytes[i] as char;
        i += 1;
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let n: u32 = word[start..i].parse().map_err(|_| bad())?;
        out.push(parse_id(&format!("W({letter}{n})"))?);
    }
    Ok(out)
}
