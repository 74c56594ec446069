//! Exhaustive search for degree multisets that are realizable at every prime
//! but not over the rationals.
//!
//! Candidates are products of simple `Q_2`-reflection groups with total rank
//! at most `max_rank` and degrees at most `max_degree`, enumerated as
//! non-increasing sequences of pool indices. Work is split by the largest
//! index (the first part). A multiset reachable from several first parts is
//! tested only in the unit of the largest one, so every distinct multiset is
//! tested exactly once across the whole run. Products made only of rational
//! groups are skipped.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::catalog::{Catalog, GroupEntry};
use crate::decompose::{decomposable_everywhere, ClassDecomposition, Decomposer, EverywhereCheck};
use crate::degvec::{DegreeMultiset, DEFAULT_TRUNCATION};
use crate::error::{Error, Result};

pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub max_rank: u32,
    pub max_degree: u32,
    /// Fixed primes to test instead of the exact per-candidate classes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime_class_reps: Option<Vec<u64>>,
    #[serde(skip)]
    pub jobs: usize,
    #[serde(skip)]
    pub checkpoint_path: Option<PathBuf>,
    /// Process at most this many pending units, then stop with a frontier.
    #[serde(skip)]
    pub unit_limit: Option<usize>,
}

impl SearchConfig {
    pub fn new(max_rank: u32) -> Self {
        Self {
            max_rank,
            max_degree: DEFAULT_TRUNCATION,
            prime_class_reps: None,
            jobs: 1,
            checkpoint_path: None,
            unit_limit: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_rank < 1 {
            return Err(Error::InvalidConfig("max_rank must be at least 1".into()));
        }
        if self.jobs < 1 {
            return Err(Error::InvalidConfig("jobs must be at least 1".into()));
        }
        if self.max_degree < 2 {
            return Err(Error::InvalidConfig("max_degree must be at least 2".into()));
        }
        if let Some(reps) = &self.prime_class_reps {
            if reps.is_empty() || reps.iter().any(|&p| !crate::primecover::is_prime(p)) {
                return Err(Error::InvalidConfig("prime_class_reps must be a nonempty list of primes".into()));
            }
        }
        Ok(())
    }

    /// Hash of the fields that determine the result.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Found {
    pub degrees: DegreeMultiset,
    pub rank: u32,
    pub dimension: u64,
    pub classes: Vec<FoundClass>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoundClass {
    pub label: String,
    pub prime: u64,
    pub parts: Vec<String>,
}

impl From<ClassDecomposition> for FoundClass {
    fn from(c: ClassDecomposition) -> Self {
        Self { label: c.label, prime: c.representative, parts: c.decomposition.parts }
    }
}

fn sort_key(f: &Found) -> (u32, u64, String) {
    (f.rank, f.dimension, f.degrees.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitResult {
    pub unit: String,
    pub explored: u64,
    pub found: Vec<Found>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub explored: u64,
    pub found: Vec<Found>,
    pub units_total: usize,
    pub units_completed: usize,
    /// Units still to run; empty when the search is complete.
    pub frontier: Vec<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SearchReport {
    pub fn is_complete(&self) -> bool {
        self.frontier.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub config: SearchConfig,
    pub config_hash: String,
    pub catalog_hash: String,
    pub completed_units: Vec<UnitResult>,
    pub found: Vec<Found>,
    pub explored: u64,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let cp: Checkpoint = serde_json::from_str(&text)?;
        if cp.version != CHECKPOINT_VERSION {
            return Err(Error::CheckpointMismatch(format!("unsupported version {}", cp.version)));
        }
        Ok(cp)
    }

    /// Writes to a temporary sibling and renames it over `path`.
    pub fn store(&self, path: &Path) -> Result<()> {
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let tmp = PathBuf::from(tmp);
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(serde_json::to_string_pretty(self)?.as_bytes())?;
            f.write_all(b"\n")?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

/// Groups eligible as parts: realizable at 2, within the rank and degree bounds.
pub fn search_pool<'a>(config: &SearchConfig, catalog: &'a Catalog) -> Vec<&'a GroupEntry> {
    catalog
        .entries()
        .iter()
        .filter(|e| e.admissible_at(2) && e.rank <= config.max_rank && e.max_degree() <= config.max_degree)
        .collect()
}

pub fn run_search(config: &SearchConfig, catalog: &Catalog) -> Result<SearchReport> {
    config.validate()?;
    let start = Instant::now();
    let checkpoint = match &config.checkpoint_path {
        Some(path) if path.exists() => {
            let cp = Checkpoint::load(path)?;
            check_compatible(&cp, config, catalog)?;
            cp
        }
        _ => fresh_checkpoint(config, catalog),
    };
    let mut report = execute(config, catalog, checkpoint)?;
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Continues the run recorded at `path`, which must match `catalog` and, when
/// given, `config`.
pub fn resume(path: &Path, catalog: &Catalog, config: Option<&SearchConfig>) -> Result<SearchReport> {
    let start = Instant::now();
    let cp = Checkpoint::load(path)?;
    let mut cfg = match config {
        Some(c) => c.clone(),
        None => {
            let mut c = cp.config.clone();
            c.jobs = 1;
            c
        }
    };
    cfg.checkpoint_path = Some(path.to_path_buf());
    cfg.validate()?;
    check_compatible(&cp, &cfg, catalog)?;
    let mut report = execute(&cfg, catalog, cp)?;
    report.elapsed = start.elapsed();
    Ok(report)
}

fn fresh_checkpoint(config: &SearchConfig, catalog: &Catalog) -> Checkpoint {
    Checkpoint {
        version: CHECKPOINT_VERSION,
        config: config.clone(),
        config_hash: config.hash(),
        catalog_hash: catalog.hash(),
        completed_units: Vec::new(),
        found: Vec::new(),
        explored: 0,
    }
}

fn check_compatible(cp: &Checkpoint, config: &SearchConfig, catalog: &Catalog) -> Result<()> {
    if cp.config_hash != config.hash() || cp.config.hash() != cp.config_hash {
        return Err(Error::CheckpointMismatch("search configuration differs".into()));
    }
    if cp.catalog_hash != catalog.hash() {
        return Err(Error::CheckpointMismatch("catalog differs".into()));
    }
    Ok(())
}

fn execute(config: &SearchConfig, catalog: &Catalog, checkpoint: Checkpoint) -> Result<SearchReport> {
    let pool = search_pool(config, catalog);
    let done: HashSet<String> = checkpoint.completed_units.iter().map(|u| u.unit.clone()).collect();
    let pending: Vec<usize> = (0..pool.len()).filter(|&i| !done.contains(&pool[i].id)).collect();
    let batch: Vec<usize> = match config.unit_limit {
        Some(k) => pending.iter().copied().take(k).collect(),
        None => pending.clone(),
    };
    let state = Mutex::new(checkpoint);
    let io_error: Mutex<Option<Error>> = Mutex::new(None);
    let run_unit = |u: usize| -> Result<()> {
        let result = search_unit(config, catalog, &pool, u)?;
        let mut cp = state.lock().expect("checkpoint lock");
        cp.completed_units.push(result);
        merge(&mut cp);
        if let Some(path) = &config.checkpoint_path {
            if let Err(e) = cp.store(path) {
                io_error.lock().expect("error lock").get_or_insert(e);
            }
        }
        Ok(())
    };
    dispatch(config.jobs, &batch, &run_unit)?;
    if let Some(e) = io_error.into_inner().expect("error lock") {
        return Err(e);
    }
    let mut cp = state.into_inner().expect("checkpoint lock");
    merge(&mut cp);
    if let Some(path) = &config.checkpoint_path {
        cp.store(path)?;
    }
    let completed: HashSet<&str> = cp.completed_units.iter().map(|u| u.unit.as_str()).collect();
    let frontier = pool
        .iter()
        .filter(|e| !completed.contains(e.id.as_str()))
        .map(|e| e.id.clone())
        .collect();
    Ok(SearchReport {
        explored: cp.explored,
        found: cp.found.clone(),
        units_total: pool.len(),
        units_completed: cp.completed_units.len(),
        frontier,
        elapsed: Duration::ZERO,
    })
}

#[cfg(feature = "parallel")]
fn dispatch(jobs: usize, batch: &[usize], run_unit: &(dyn Fn(usize) -> Result<()> + Sync)) -> Result<()> {
    use rayon::prelude::*;
    if jobs <= 1 {
        return batch.iter().try_for_each(|&u| run_unit(u));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    pool.install(|| batch.par_iter().try_for_each(|&u| run_unit(u)))
}

#[cfg(not(feature = "parallel"))]
fn dispatch(_jobs: usize, batch: &[usize], run_unit: &(dyn Fn(usize) -> Result<()> + Sync)) -> Result<()> {
    batch.iter().try_for_each(|&u| run_unit(u))
}

/// Recomputes the totals from the per-unit results in canonical order.
fn merge(cp: &mut Checkpoint) {
    cp.completed_units.sort_by(|a, b| a.unit.cmp(&b.unit));
    cp.explored = cp.completed_units.iter().map(|u| u.explored).sum();
    let mut found: Vec<Found> = cp.completed_units.iter().flat_map(|u| u.found.clone()).collect();
    found.sort_by_key(sort_key);
    cp.found = found;
}

/// All candidates whose first (largest-index) part is `pool[unit]`.
pub fn search_unit(config: &SearchConfig, catalog: &Catalog, pool: &[&GroupEntry], unit: usize) -> Result<UnitResult> {
    let mut candidates: BTreeMap<DegreeMultiset, ()> = BTreeMap::new();
    let first = pool[unit];
    let mut seq = vec![unit];
    enumerate(config.max_rank, pool, &mut seq, first.degrees.clone(), first.rank, !first.is_rational(), &mut candidates);

    let mut owner = Decomposer::new(pool.iter().copied());
    let mut rational = Decomposer::new(catalog.entries().iter().filter(|e| e.is_rational()));
    let mut explored = 0;
    let mut found = Vec::new();
    for target in candidates.into_keys() {
        if owned_elsewhere(&target, pool, unit, &mut owner) {
            continue;
        }
        explored += 1;
        if rational.is_decomposable(&target) {
            continue;
        }
        if let Some(classes) = realizable_everywhere(config, catalog, &target)? {
            found.push(Found {
                rank: target.rank(),
                dimension: target.dimension(),
                degrees: target,
                classes,
            });
        }
    }
    found.sort_by_key(sort_key);
    Ok(UnitResult { unit: first.id.clone(), explored, found })
}

fn enumerate(
    max_rank: u32,
    pool: &[&GroupEntry],
    seq: &mut Vec<usize>,
    sum: DegreeMultiset,
    rank: u32,
    non_rational: bool,
    out: &mut BTreeMap<DegreeMultiset, ()>,
) {
    let last = *seq.last().expect("nonempty sequence");
    for i in 0..=last {
        let e = pool[i];
        if rank + e.rank > max_rank {
            continue;
        }
        seq.push(i);
        enumerate(max_rank, pool, seq, sum.union(&e.degrees), rank + e.rank, non_rational || !e.is_rational(), out);
        seq.pop();
    }
    if non_rational {
        out.insert(sum, ());
    }
}

/// Whether `target` also splits off a part with index above `unit`, in which
/// case that unit is responsible for it.
fn owned_elsewhere(target: &DegreeMultiset, pool: &[&GroupEntry], unit: usize, owner: &mut Decomposer) -> bool {
    pool.iter().skip(unit + 1).any(|e| {
        e.degrees.is_submultiset_of(target) && owner.is_decomposable(&target.subtract(&e.degrees).expect("submultiset"))
    })
}

fn realizable_everywhere(config: &SearchConfig, catalog: &Catalog, target: &DegreeMultiset) -> Result<Option<Vec<FoundClass>>> {
    match &config.prime_class_reps {
        Some(reps) => {
            let mut classes = Vec::new();
            for &p in reps {
                match crate::decompose::decomposable_at(target, p, catalog) {
                    Some(d) => classes.push(FoundClass { label: format!("p = {p}"), prime: p, parts: d.parts }),
                    None => return Ok(None),
                }
            }
            Ok(Some(classes))
        }
        None => Ok(match decomposable_everywhere(target, catalog)? {
            EverywhereCheck::Decomposable { classes } => Some(classes.into_iter().map(FoundClass::from).collect()),
            EverywhereCheck::FailsAt { .. } => None,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(SearchConfig::new(0).validate().is_err());
        let mut c = SearchConfig::new(3);
        c.jobs = 0;
        assert!(c.validate().is_err());
        c.jobs = 4;
        assert!(c.validate().is_ok());
        assert_eq!(c.hash(), SearchConfig::new(3).hash());
        assert_ne!(c.hash(), SearchConfig::new(4).hash());
    }

    #[test]
    fn small_ranks_find_nothing() {
        let cat = Catalog::builtin();
        let report = run_search(&SearchConfig::new(5), &cat).unwrap();
        assert!(report.found.is_empty());
        assert!(report.is_complete());
        assert!(report.explored > 0);
    }

    #[test]
    fn rational_catalog_finds_nothing() {
        let cat = Catalog::builtin().filtered(|e| e.is_rational());
        let report = run_search(&SearchConfig::new(8), &cat).unwrap();
        assert!(report.found.is_empty());
        assert_eq!(report.explored, 0);
    }

    #[test]
    fn each_multiset_tested_once() {
        let cat = Catalog::builtin();
        let config = SearchConfig::new(7);
        let pool = search_pool(&config, &cat);
        let mut seen = HashSet::new();
        let mut total = 0;
        for u in 0..pool.len() {
            let mut candidates = BTreeMap::new();
            let first = pool[u];
            enumerate(7, &pool, &mut vec![u], first.degrees.clone(), first.rank, !first.is_rational(), &mut candidates);
            let mut owner = Decomposer::new(pool.iter().copied());
            for t in candidates.into_keys() {
                if !owned_elsewhere(&t, &pool, u, &mut owner) {
                    assert!(seen.insert(t), "tested twice");
                    total += 1;
                }
            }
        }
        let report = run_search(&config, &cat).unwrap();
        assert_eq!(report.explored, total);
    }
}
