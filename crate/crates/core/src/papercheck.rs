//! Reproduction checks for the published counterexamples and cone statements.
//!
//! Each check returns a [`CheckResult`] whose `details` carry the evidence
//! (decompositions, inner products, certificates) in a form that [`audit`]
//! re-verifies from scratch.

use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{parse_weyl_word, Catalog, GroupEntry};
use crate::decompose::{decompose_rational, decomposable_at};
use crate::degvec::{ClarkVerdict, DegreeMultiset};
use crate::primecover::{self, covers, rank66_regimes, PrimeCondition, Regime};
use crate::ratcone::{
    self, cone_subset, difference_witness, parse_rational, render_vec, verify_witness, DifferenceWitness, Rational,
    RationalCone, SubsetOutcome,
};

pub const RANK66: &str = "2^8,3^2,4^8,5^2,6^7,7,8^7,9,10^5,11,12^5,13,14^5,16^3,18^2,20^2,22,24^2,26,28,30";
pub const RANK74: &str =
    "2^9,3^2,4^7,5^3,6^8,7^3,8^8,9^3,10^6,11^2,12^6,13^2,14^5,15,16^3,18^2,20^2,22,24";
pub const RANK68: &str = "2^8,4^8,6^8,8^8,10^6,12^5,14^6,16^4,18^3,20^3,22^2,24^3,26^2,28,30";

/// Separating functional on degree vectors `(x_1, ..., x_30)`.
pub const EQ1: [i64; 30] = [
    0, 2, -1, -1, 0, 0, 1, -1, 0, 0, 0, 1, -1, 0, 1, -1, 0, 0, 0, 0, 0, 4, -1, -3, 1, -1, 0, 0, 0, 1,
];

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// First violated assertion.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    pub details: Value,
}

struct Checker {
    name: String,
    failure: Option<String>,
    details: serde_json::Map<String, Value>,
}

impl Checker {
    fn new(name: &str) -> Self {
        Self { name: name.to_string(), failure: None, details: serde_json::Map::new() }
    }

    fn assert(&mut self, ok: bool, what: impl FnOnce() -> String) -> bool {
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
        ok
    }

    fn put(&mut self, key: &str, value: Value) {
        self.details.insert(key.to_string(), value);
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            name: self.name,
            passed: self.failure.is_none(),
            failure: self.failure,
            details: Value::Object(self.details),
        }
    }
}

/// One listed product: rational factors in Dynkin shorthand times one
/// exotic factor, valid in a congruence regime.
#[derive(Clone, Debug)]
pub struct ProductRow {
    pub regime: Regime,
    pub weyl: &'static str,
    pub extra: &'static str,
}

#[derive(Clone, Debug)]
pub struct Example {
    pub name: &'static str,
    pub degrees: &'static str,
    pub rank: u32,
    pub dimension: u64,
    pub all_even: bool,
    pub rows: Vec<ProductRow>,
}

fn row(regime: &Regime, weyl: &'static str, extra: &'static str) -> ProductRow {
    ProductRow { regime: regime.clone(), weyl, extra }
}

pub fn rank66_example() -> Example {
    let r = rank66_regimes();
    Example {
        name: "rank66",
        degrees: RANK66,
        rank: 66,
        dimension: 1254,
        all_even: false,
        rows: vec![
            row(&r[0], "A4B4B5B8B8E8A12B14", "G24"),
            row(&r[1], "A4D4B5B8B8E8A13B14", "G12"),
            row(&r[2], "G2A4B4B4B7D10A13B15", "G(4,2,7)"),
            row(&r[3], "A4B4B5B8B8E8A13B14", "G(6,3,2)"),
            row(&r[4], "D4A5D8D8B10A13D16", "G(24,24,2)"),
        ],
    }
}

pub fn rank74_regimes() -> Vec<Regime> {
    vec![
        Regime::new("p = 2", PrimeCondition::only(&[2]), 2),
        Regime::new("p = 1,3 (mod 8)", PrimeCondition::residues(8, &[1, 3]), 17),
        Regime::new("p = 5 (mod 8)", PrimeCondition::residues(8, &[5]), 5),
        Regime::new("p = 7 (mod 8)", PrimeCondition::residues(8, &[7]), 7),
    ]
}

pub fn rank74_example() -> Example {
    let r = rank74_regimes();
    Example {
        name: "rank74",
        degrees: RANK74,
        rank: 74,
        dimension: 1250,
        all_even: false,
        rows: vec![
            row(&r[0], "A1A1E6D7D8A9D11D13A15", "G24"),
            row(&r[1], "A1A1D5D7D9B10B12A13A14", "G12"),
            row(&r[2], "A1A1D5D6E7D9B11A13A14", "G(4,4,7)"),
            row(&r[3], "G2D5D7D9B10B12A13A14", "G(8,8,2)"),
        ],
    }
}

pub fn rank68_example() -> Example {
    let r = rank66_regimes();
    Example {
        name: "rank68",
        degrees: RANK68,
        rank: 68,
        dimension: 1468,
        all_even: true,
        rows: vec![
            row(&r[0], "B4B5B5B8B8E8B13B14", "G24"),
            row(&r[1], "D4B5B5B8B8E8B14D14", "G12"),
            row(&r[2], "G2B4B5B5B7B9D14B15", "G(4,2,7)"),
            row(&r[3], "B4B5B5B8B8E8B14D14", "G(6,3,2)"),
            row(&r[4], "D4D6D8D8B10D14D16", "G(24,24,2)"),
        ],
    }
}

fn row_parts(r: &ProductRow) -> Result<Vec<String>, String> {
    let mut ids: Vec<String> = parse_weyl_word(r.weyl)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|f| f.id())
        .collect();
    ids.push(r.extra.to_string());
    Ok(ids)
}

fn sum_parts<'a>(ids: &[String], catalog: &'a Catalog) -> Result<(DegreeMultiset, Vec<&'a GroupEntry>), String> {
    let mut total = DegreeMultiset::new();
    let mut entries = Vec::new();
    for id in ids {
        let e = catalog.get(id).ok_or_else(|| format!("catalog has no entry {id}"))?;
        total.add_assign(&e.degrees);
        entries.push(e);
    }
    Ok((total, entries))
}

/// Runs every assertion on one example. `regimes` replaces the regimes
/// attached to the rows when given, so coverage can be tested on its own.
pub fn check_example(ex: &Example, catalog: &Catalog, regimes: Option<&[Regime]>, target: Option<&DegreeMultiset>) -> CheckResult {
    let mut c = Checker::new(ex.name);
    let listed: DegreeMultiset = ex.degrees.parse().expect("example degree string");
    let target = target.cloned().unwrap_or(listed);
    c.put("degrees", json!(target.to_string()));

    // (a) every row sums to the multiset
    let mut rows_json = Vec::new();
    for r in &ex.rows {
        let parts = match row_parts(r) {
            Ok(p) => p,
            Err(e) => {
                c.assert(false, || e);
                continue;
            }
        };
        match sum_parts(&parts, catalog) {
            Ok((total, entries)) => {
                c.assert(total == target, || format!("(a) {} row sums to {total}, not {target}", r.regime.label));
                // (c) each part exists throughout the regime
                for e in &entries {
                    c.assert(e.admissible_at(r.regime.representative), || {
                        format!("(c) {} is not realizable at p = {}", e.id, r.regime.representative)
                    });
                    c.assert(r.regime.condition.implies(&e.primes), || {
                        format!("(c) {} is not realizable for all {}", e.id, r.regime.label)
                    });
                }
            }
            Err(e) => {
                c.assert(false, || format!("(a) {e}"));
            }
        }
        rows_json.push(json!({
            "regime": r.regime.label,
            "condition": r.regime.condition,
            "representative": r.regime.representative,
            "parts": parts,
        }));
    }
    c.put("rows", Value::Array(rows_json));

    // (b) rank and dimension
    c.put("rank", json!(target.rank()));
    c.put("dimension", json!(target.dimension()));
    c.assert(target.rank() == ex.rank, || format!("(b) rank {} != {}", target.rank(), ex.rank));
    c.assert(target.dimension() == ex.dimension, || {
        format!("(b) dimension {} != {}", target.dimension(), ex.dimension)
    });
    if ex.all_even {
        c.put("all_even", json!(target.all_even()));
        c.assert(target.all_even(), || "degrees are not all even".to_string());
    }

    // (d) the regimes cover every prime
    let regimes: Vec<Regime> = match regimes {
        Some(r) => r.to_vec(),
        None => ex.rows.iter().map(|r| r.regime.clone()).collect(),
    };
    let conditions: Vec<PrimeCondition> = regimes.iter().map(|r| r.condition.clone()).collect();
    let cover = covers(&conditions);
    c.put("cover", json!(cover));
    c.assert(cover.is_covered(), || format!("(d) regimes do not cover all primes: {cover:?}"));

    // (e) no rational decomposition
    let rational = decompose_rational(&target, catalog);
    c.put("rational_decomposition", json!(rational.as_ref().map(|d| d.parts.clone())));
    c.assert(rational.is_none(), || "(e) the multiset is rationally decomposable".to_string());
    c.finish()
}

pub fn verify_rank66() -> CheckResult {
    verify_rank66_with(&Catalog::builtin(), &rank66_regimes())
}

pub fn verify_rank66_with(catalog: &Catalog, regimes: &[Regime]) -> CheckResult {
    let mut r = check_example(&rank66_example(), catalog, Some(regimes), None);
    r.name = "rank66".into();
    // Extra prime in the 1,3 (mod 8) regime.
    let target: DegreeMultiset = RANK66.parse().expect("constant");
    let at3 = decomposable_at(&target, 3, catalog);
    if let Value::Object(m) = &mut r.details {
        m.insert("decomposition_at_3".into(), json!(at3.as_ref().map(|d| d.parts.clone())));
    }
    if at3.is_none() && r.passed {
        r.passed = false;
        r.failure = Some("(c) no decomposition at p = 3".into());
    }
    r
}

pub fn verify_hyperplane() -> CheckResult {
    verify_hyperplane_with(&Catalog::builtin(), &EQ1)
}

pub fn verify_hyperplane_with(catalog: &Catalog, functional: &[i64]) -> CheckResult {
    let mut c = Checker::new("hyperplane");
    let rational = catalog.slice(&crate::catalog::PrimeFilter::Rational, 30);
    c.put("rational_count", json!(rational.len()));
    c.assert(rational.len() == 61, || format!("{} rational groups with degrees <= 30, expected 61", rational.len()));
    let mut values = Vec::new();
    for e in &rational {
        let v = e.degrees.to_vector(30).expect("bounded").inner_product(functional);
        c.assert(v >= 0, || format!("functional is {v} on {}", e.id));
        values.push(json!({"id": e.id, "degrees": e.degrees.to_string(), "value": v}));
    }
    let target: DegreeMultiset = RANK66.parse().expect("constant");
    let value = target.to_vector(30).expect("bounded").inner_product(functional);
    c.put("functional", json!(functional));
    c.put("values", Value::Array(values));
    c.put("target_value", json!(value));
    c.assert(value == -1, || format!("functional is {value} on the rank-66 vector, expected -1"));
    c.finish()
}

pub fn verify_remark_examples() -> CheckResult {
    verify_remark_examples_with(&Catalog::builtin(), None)
}

/// `rank68_override` replaces the rank-68 multiset, for mutation tests.
pub fn verify_remark_examples_with(catalog: &Catalog, rank68_override: Option<&DegreeMultiset>) -> CheckResult {
    let a = check_example(&rank74_example(), catalog, None, None);
    let b = check_example(&rank68_example(), catalog, None, rank68_override);
    let mut c = Checker::new("remark");
    for r in [&a, &b] {
        if let Some(f) = &r.failure {
            c.assert(false, || format!("{}: {f}", r.name));
        }
    }
    c.put("rank74", a.details);
    c.put("rank68", b.details);
    c.finish()
}

/// Smallest primes in each unit class mod 24 (plus 2 and 3) that satisfy
/// `condition`.
pub fn class_primes(condition: &PrimeCondition) -> Vec<u64> {
    let mut out: Vec<u64> = [2, 3].into_iter().filter(|&p| condition.holds(p)).collect();
    for r in primecover::units(24) {
        let p = primecover::smallest_prime_in_class(r, 24);
        if condition.holds(p) && !out.contains(&p) {
            out.push(p);
        }
    }
    out.sort_unstable();
    out
}

/// Cones used by the intersection statement at truncation `d`.
pub struct ConeFamily {
    pub lie: RationalCone,
    pub k2: RationalCone,
    pub k3: RationalCone,
    pub k5: RationalCone,
    pub k7: RationalCone,
    pub lin: RationalCone,
}

impl ConeFamily {
    pub fn new(catalog: &Catalog, d: u32, lin_extra: &[&str]) -> Self {
        Self {
            lie: ratcone::lie_cone(catalog, d),
            k2: ratcone::prime_cone(catalog, 2, d),
            k3: ratcone::prime_cone(catalog, 3, d),
            k5: ratcone::prime_cone(catalog, 5, d),
            k7: ratcone::prime_cone(catalog, 7, d),
            lin: ratcone::lin_cone_with(catalog, d, lin_extra),
        }
    }

    pub fn intersected(&self) -> Vec<RationalCone> {
        vec![self.k2.clone(), self.k3.clone(), self.k5.clone(), self.k7.clone(), self.lin.clone()]
    }
}

pub fn witness_json(w: &DifferenceWitness) -> Value {
    json!({
        "point": render_vec(&w.point),
        "inside": w.inside.iter().map(|l| render_vec(l)).collect::<Vec<_>>(),
        "functional": render_vec(&w.functional),
    })
}

pub fn witness_from_json(v: &Value) -> Option<DifferenceWitness> {
    let vec = |v: &Value| -> Option<Vec<Rational>> {
        v.as_array()?.iter().map(|s| parse_rational(s.as_str()?).ok()).collect()
    };
    Some(DifferenceWitness {
        point: vec(&v["point"])?,
        inside: v["inside"].as_array()?.iter().map(vec).collect::<Option<_>>()?,
        functional: vec(&v["functional"])?,
    })
}

pub fn verify_conethm(d: u32) -> CheckResult {
    verify_conethm_with(&Catalog::builtin(), d, &ratcone::LIN_EXTRA)
}

pub fn verify_conethm_with(catalog: &Catalog, d: u32, lin_extra: &[&str]) -> CheckResult {
    let mut c = Checker::new("conethm");
    c.put("truncation", json!(d));
    let cones = ConeFamily::new(catalog, d, lin_extra);
    c.put(
        "generators",
        json!({"lie": cones.lie.len(), "k2": cones.k2.len(), "k3": cones.k3.len(), "k5": cones.k5.len(),
               "k7": cones.k7.len(), "lin": cones.lin.len()}),
    );

    // (a) K_Lie inside every K_p
    let mut primes_a: Vec<u64> = vec![2, 3];
    for r in primecover::units(24) {
        let p = primecover::smallest_prime_in_class(r, 24);
        if !primes_a.contains(&p) {
            primes_a.push(p);
        }
    }
    primes_a.sort_unstable();
    for &p in &primes_a {
        let kp = ratcone::prime_cone(catalog, p, d);
        let ok = cone_subset(&cones.lie, &kp).map(|o| o.holds()).unwrap_or(false);
        c.assert(ok, || format!("(a) K_Lie is not contained in K_{p}"));
    }
    c.put("lie_checked_at", json!(primes_a));

    // (c) inclusion chain, plus tightness: the groups realizable throughout
    // each class lie in the named cone
    let chain: [(&str, &RationalCone, PrimeCondition); 4] = [
        ("K_3", &cones.k3, PrimeCondition::residues(8, &[1, 3])),
        ("K_5", &cones.k5, PrimeCondition::residues(4, &[1])),
        ("K_7", &cones.k7, PrimeCondition::residues(24, &[1, 7])),
        ("K_Lin", &cones.lin, PrimeCondition::residues(24, &[1, 23])),
    ];
    let mut chain_json = Vec::new();
    for (name, cone, cond) in &chain {
        let reps = class_primes(cond);
        for &p in &reps {
            let kp = ratcone::prime_cone(catalog, p, d);
            match cone_subset(cone, &kp) {
                Ok(SubsetOutcome::Subset) => {}
                Ok(SubsetOutcome::Witness { label, .. }) => {
                    c.assert(false, || format!("(c) {name} not inside K_{p}: {label} is outside"));
                }
                Err(e) => {
                    c.assert(false, || format!("(c) {e}"));
                }
            }
        }
        let class = ratcone::class_cone(catalog, cond, d);
        match cone_subset(&class, cone) {
            Ok(SubsetOutcome::Subset) => {}
            Ok(SubsetOutcome::Witness { label, .. }) => {
                c.assert(false, || {
                    format!("(c) {label} is realizable for all p with {} but is outside {name}", cond.describe())
                });
            }
            Err(e) => {
                c.assert(false, || format!("(c) {e}"));
            }
        }
        chain_json.push(json!({"cone": name, "condition": cond, "representatives": reps}));
    }
    c.put("chain", Value::Array(chain_json));

    // (d) cover
    let cover = covers(&primecover::cone_theorem_cover());
    c.put("cover", json!(cover));
    c.assert(cover.is_covered(), || format!("(d) cover fails: {cover:?}"));

    // (b) a point of the intersection outside K_Lie
    let intersect = cones.intersected();
    match difference_witness(&intersect, &cones.lie) {
        Ok(Some(w)) => {
            let ok = verify_witness(&intersect, &cones.lie, &w);
            c.assert(ok, || "(b) witness certificates do not verify".to_string());
            c.put("witness", witness_json(&w));
        }
        Ok(None) => {
            c.put("witness", Value::Null);
            if d >= 30 {
                c.assert(false, || "(b) the intersection is contained in K_Lie".to_string());
            }
        }
        Err(e) => {
            c.assert(false, || format!("(b) {e}"));
        }
    }
    c.finish()
}

pub fn clark_examples() -> Vec<(&'static str, &'static str)> {
    vec![("rank66", RANK66), ("rank74", RANK74), ("rank68", RANK68)]
}

pub fn verify_clark() -> CheckResult {
    let mut c = Checker::new("clark");
    let mut out = Vec::new();
    for (name, s) in clark_examples() {
        let m: DegreeMultiset = s.parse().expect("constant");
        let verdict = m.clark_check();
        let pass = matches!(verdict, Ok(ClarkVerdict::Pass));
        c.assert(pass, || format!("{name} fails Clark's condition: {verdict:?}"));
        out.push(json!({"name": name, "passes": pass}));
    }
    let four: DegreeMultiset = "4".parse().expect("constant");
    let fails = matches!(four.clark_check(), Ok(ClarkVerdict::Fail { .. }));
    c.assert(fails, || "{4} unexpectedly passes Clark's condition".to_string());
    out.push(json!({"name": "{4}", "passes": !fails}));
    c.put("examples", Value::Array(out));
    c.finish()
}

pub fn verify_all() -> Vec<CheckResult> {
    verify_all_with(&Catalog::builtin())
}

pub fn verify_all_with(catalog: &Catalog) -> Vec<CheckResult> {
    if catalog.is_empty() {
        let mut c = Checker::new("catalog");
        c.assert(false, || "catalog is empty".to_string());
        return vec![c.finish()];
    }
    vec![
        verify_rank66_with(catalog, &rank66_regimes()),
        verify_hyperplane_with(catalog, &EQ1),
        verify_remark_examples_with(catalog, None),
        verify_conethm_with(catalog, 30, &ratcone::LIN_EXTRA),
        verify_clark(),
    ]
}

/// Re-checks the evidence recorded in passing results using only the
/// details and the catalog.
pub fn audit(results: &[CheckResult], catalog: &Catalog) -> Result<(), String> {
    for r in results.iter().filter(|r| r.passed) {
        match r.name.as_str() {
            "rank66" => audit_example(&r.details, catalog)?,
            "remark" => {
                audit_example(&r.details["rank74"], catalog)?;
                audit_example(&r.details["rank68"], catalog)?;
            }
            "hyperplane" => audit_hyperplane(&r.details, catalog)?,
            "conethm" => audit_conethm(&r.details, catalog)?,
            _ => {}
        }
    }
    Ok(())
}

fn audit_example(details: &Value, catalog: &Catalog) -> Result<(), String> {
    let target: DegreeMultiset = details["degrees"]
        .as_str()
        .ok_or("missing degrees")?
        .parse()
        .map_err(|e| format!("{e}"))?;
    let rows = details["rows"].as_array().ok_or("missing rows")?;
    let mut conditions = Vec::new();
    for row in rows {
        let parts: Vec<String> = serde_json::from_value(row["parts"].clone()).map_err(|e| e.to_string())?;
        let cond: PrimeCondition = serde_json::from_value(row["condition"].clone()).map_err(|e| e.to_string())?;
        let (total, entries) = sum_parts(&parts, catalog)?;
        if total != target {
            return Err(format!("audit: row {parts:?} sums to {total}"));
        }
        if let Some(e) = entries.iter().find(|e| !cond.implies(&e.primes)) {
            return Err(format!("audit: {} not realizable throughout {}", e.id, cond.describe()));
        }
        conditions.push(cond);
    }
    if !covers(&conditions).is_covered() {
        return Err("audit: regimes do not cover".into());
    }
    if decompose_rational(&target, catalog).is_some() {
        return Err("audit: rationally decomposable".into());
    }
    Ok(())
}

fn audit_hyperplane(details: &Value, catalog: &Catalog) -> Result<(), String> {
    let f: Vec<i64> = serde_json::from_value(details["functional"].clone()).map_err(|e| e.to_string())?;
    for v in details["values"].as_array().ok_or("missing values")? {
        let id = v["id"].as_str().ok_or("missing id")?;
        let e = catalog.get(id).ok_or("unknown id")?;
        let value = e.degrees.to_vector(30).map_err(|e| e.to_string())?.inner_product(&f);
        if value < 0 || Some(value) != v["value"].as_i64() {
            return Err(format!("audit: functional value on {id}"));
        }
    }
    let target: DegreeMultiset = RANK66.parse().expect("constant");
    if target.to_vector(30).map_err(|e| e.to_string())?.inner_product(&f) != -1 {
        return Err("audit: target value".into());
    }
    Ok(())
}

fn audit_conethm(details: &Value, catalog: &Catalog) -> Result<(), String> {
    let d = details["truncation"].as_u64().ok_or("missing truncation")? as u32;
    if details["witness"].is_null() {
        return Ok(());
    }
    let w = witness_from_json(&details["witness"]).ok_or("malformed witness")?;
    let cones = ConeFamily::new(catalog, d, &ratcone::LIN_EXTRA);
    if !verify_witness(&cones.intersected(), &cones.lie, &w) {
        return Err("audit: witness does not verify".into());
    }
    if w.point.iter().all(Zero::is_zero) {
        return Err("audit: zero witness".into());
    }
    Ok(())
}
