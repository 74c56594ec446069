//! Acceptance suite: one PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use loopdeg::catalog::GroupEntry;
use loopdeg::decompose::Decomposer;
use loopdeg::papercheck::{self, witness_from_json, ConeFamily, EQ1, RANK66, RANK68, RANK74};
use loopdeg::ratcone::{
    self, dd_facets, member, verify_witness, MembershipCertificate, Rational, RationalCone,
};
use loopdeg::search::{run_search, SearchConfig};
use loopdeg::{Catalog, DegreeMultiset};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ms(s: &str) -> DegreeMultiset {
    s.parse().expect("degree string")
}

fn rank66_reproduction() -> Outcome {
    let catalog = Catalog::builtin();
    let r = papercheck::verify_rank66();
    ensure(r.passed, format!("{:?}", r.failure))?;
    papercheck::audit(std::slice::from_ref(&r), &catalog)?;
    let m = ms(RANK66);
    ensure(m.rank() == 66 && m.dimension() == 1254, "rank or dimension")?;
    ensure(
        loopdeg::decompose::decompose_rational(&m, &catalog).is_none(),
        "rationally decomposable",
    )?;
    Ok("five rows sum to the target, cover holds, rank 66, dim 1254".into())
}

fn hyperplane() -> Outcome {
    let catalog = Catalog::builtin();
    let r = papercheck::verify_hyperplane();
    ensure(r.passed, format!("{:?}", r.failure))?;
    let rational: Vec<&GroupEntry> =
        catalog.entries().iter().filter(|e| e.is_rational() && e.max_degree() <= 30).collect();
    ensure(rational.len() == 61, format!("{} rational groups", rational.len()))?;
    for e in &rational {
        let v = e.degrees.to_vector(30).unwrap().inner_product(&EQ1);
        ensure(v >= 0, format!("{} has value {v}", e.id))?;
    }
    let y = ms(RANK66).to_vector(30).unwrap().inner_product(&EQ1);
    ensure(y == -1, format!("target value {y}"))?;
    Ok("61 groups nonnegative, target -1".into())
}

fn remark_examples() -> Outcome {
    let catalog = Catalog::builtin();
    let r = papercheck::verify_remark_examples();
    ensure(r.passed, format!("{:?}", r.failure))?;
    papercheck::audit(std::slice::from_ref(&r), &catalog)?;
    let (a, b) = (ms(RANK74), ms(RANK68));
    ensure(a.rank() == 74 && a.dimension() == 1250, "rank-74 example")?;
    ensure(b.rank() == 68 && b.dimension() == 1468 && b.all_even(), "rank-68 example")?;
    for m in [&a, &b] {
        ensure(loopdeg::decompose::decompose_rational(m, &catalog).is_none(), "rationally decomposable")?;
    }
    Ok("dims 1250 and 1468, both rationally indecomposable".into())
}

fn cone_theorem() -> Outcome {
    let catalog = Catalog::builtin();
    let start = Instant::now();
    let r = papercheck::verify_conethm(30);
    let elapsed = start.elapsed();
    ensure(r.passed, format!("{:?}", r.failure))?;
    let w = witness_from_json(&r.details["witness"]).ok_or("no witness recorded")?;
    let cones = ConeFamily::new(&catalog, 30, &ratcone::LIN_EXTRA);
    ensure(verify_witness(&cones.intersected(), &cones.lie, &w), "witness does not re-verify")?;
    papercheck::audit(std::slice::from_ref(&r), &catalog)?;
    ensure(elapsed < Duration::from_secs(300), format!("took {elapsed:?}"))?;
    Ok(format!("witness re-verifies, chain and cover pass ({:.1}s)", elapsed.as_secs_f64()))
}

/// Every degree multiset reachable as a sum of at most `max_rank` ranks of pool entries.
fn reachable(pool: &[&GroupEntry], max_rank: u32) -> BTreeSet<DegreeMultiset> {
    fn go(pool: &[&GroupEntry], from: usize, acc: DegreeMultiset, left: u32, out: &mut BTreeSet<DegreeMultiset>) {
        for i in from..pool.len() {
            if pool[i].rank <= left {
                let next = acc.union(&pool[i].degrees);
                out.insert(next.clone());
                go(pool, i, next, left - pool[i].rank, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    go(pool, 0, DegreeMultiset::new(), max_rank, &mut out);
    out
}

/// All multisets of degrees in `2..=max_degree` with rank in `1..=max_rank`.
fn all_multisets(max_degree: u32, max_rank: u32) -> Vec<DegreeMultiset> {
    fn go(d: u32, max_degree: u32, acc: Vec<u32>, left: u32, out: &mut Vec<DegreeMultiset>) {
        if d > max_degree {
            if !acc.is_empty() {
                out.push(DegreeMultiset::from_degrees(acc).unwrap());
            }
            return;
        }
        for k in 0..=left {
            let mut next = acc.clone();
            next.extend(std::iter::repeat_n(d, k as usize));
            go(d + 1, max_degree, next, left - k, out);
        }
    }
    let mut out = Vec::new();
    go(2, max_degree, Vec::new(), max_rank, &mut out);
    out
}

fn decomposition_oracle() -> Outcome {
    let catalog = Catalog::builtin();
    let targets = all_multisets(8, 8);
    let pools: Vec<(String, Vec<&GroupEntry>)> = std::iter::once((
        "rational".to_string(),
        catalog.entries().iter().filter(|e| e.is_rational()).collect(),
    ))
    .chain([2u64, 3, 5, 7, 13, 17].into_iter().map(|p| {
        (format!("p={p}"), catalog.entries().iter().filter(|e| e.admissible_at(p)).collect())
    }))
    .collect();
    let mut checked = 0;
    for (name, pool) in &pools {
        let small: Vec<&GroupEntry> = pool.iter().copied().filter(|e| e.max_degree() <= 8 && e.rank <= 8).collect();
        let oracle = reachable(&small, 8);
        let mut dec = Decomposer::new(pool.iter().copied());
        for t in &targets {
            let got = dec.decompose(t);
            if let Some(d) = &got {
                let sum = d.degrees(&catalog)?;
                ensure(&sum == t, format!("{name}: {t} decomposed into {sum}"))?;
            }
            ensure(got.is_some() == oracle.contains(t), format!("{name}: disagreement on {t}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} queries over {} pools agree", pools.len()))
}

fn random_cone(rng: &mut StdRng) -> RationalCone {
    let dim = rng.gen_range(1..=6);
    let n = rng.gen_range(1..=8);
    let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..dim).map(|_| rng.gen_range(-3..=3)).collect()).collect();
    RationalCone::from_integer_rows(dim, &rows).unwrap()
}

fn random_point(rng: &mut StdRng, cone: &RationalCone) -> Vec<Rational> {
    if rng.gen_bool(0.5) && !cone.is_empty() {
        let lambda: Vec<Rational> = (0..cone.len())
            .map(|_| Rational::new(rng.gen_range(0..4).into(), rng.gen_range(1..4).into()))
            .collect();
        cone.combine(&lambda)
    } else {
        (0..cone.dim()).map(|_| Rational::new(rng.gen_range(-5..=5).into(), rng.gen_range(1..4).into())).collect()
    }
}

fn certificate_soundness() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let (mut queries, mut points, mut inside) = (0, 0, 0);
    for _ in 0..50 {
        let cone = random_cone(&mut rng);
        for _ in 0..10 {
            let x = random_point(&mut rng, &cone);
            let cert = member(&cone, &x).map_err(|e| e.to_string())?;
            ensure(cert.verify(&cone, &x), "certificate does not verify")?;
            queries += 1;
        }
        let h = dd_facets(&cone);
        for _ in 0..200 {
            let x = random_point(&mut rng, &cone);
            let cert = member(&cone, &x).map_err(|e| e.to_string())?;
            ensure(
                matches!(cert, MembershipCertificate::Inside { .. }) == h.contains(&x),
                "member and dd_facets disagree",
            )?;
            inside += cert.is_inside() as usize;
            points += 1;
        }
    }
    ensure(queries == 500, "query count")?;
    Ok(format!("{queries} certificates verify, {points} points agree ({inside} inside)"))
}

fn search_minimality() -> Outcome {
    let catalog = Catalog::builtin();
    let mut reports = Vec::new();
    for jobs in [1, 8] {
        let mut config = SearchConfig::new(12);
        config.jobs = jobs;
        let report = run_search(&config, &catalog).map_err(|e| e.to_string())?;
        ensure(report.is_complete(), "search incomplete")?;
        ensure(report.found.is_empty(), format!("found {:?}", report.found))?;
        reports.push(serde_json::to_string(&report).unwrap());
    }
    ensure(reports[0] == reports[1], "jobs 1 and 8 differ")?;
    Ok("empty at rank 12, identical for 1 and 8 jobs".into())
}

fn catalog_integrity() -> Outcome {
    let catalog = Catalog::builtin();
    for e in catalog.entries() {
        e.validate().map_err(|why| format!("{}: {why}", e.id))?;
        ensure(e.degrees.rank() == e.rank, format!("{} rank", e.id))?;
        let product: num_bigint::BigUint = e.degrees.degrees().iter().map(|&d| num_bigint::BigUint::from(d)).product();
        ensure(product == e.order, format!("{} order", e.id))?;
    }
    let target = ms(RANK66);
    let expected = [("G24", "4,6,14"), ("G12", "6,8"), ("G(4,2,7)", "4,8,12,14,16,20,24"), ("G(24,24,2)", "2,24")];
    let ex = papercheck::rank66_example();
    for (id, degrees) in expected {
        let row = ex.rows.iter().find(|r| r.extra == id).ok_or(format!("no row for {id}"))?;
        let mut weyl = DegreeMultiset::new();
        for f in loopdeg::catalog::parse_weyl_word(row.weyl).map_err(|e| e.to_string())? {
            weyl.add_assign(&loopdeg::catalog::degrees_of(&f).map_err(|e| e.to_string())?);
        }
        let rest = target.subtract(&weyl).map_err(|e| e.to_string())?;
        ensure(rest == ms(degrees), format!("{id}: remainder {rest}"))?;
        let entry = catalog.get(id).ok_or(format!("no entry {id}"))?;
        ensure(entry.degrees == rest, format!("{id}: catalog degrees {}", entry.degrees))?;
    }
    Ok(format!("{} entries consistent, four remainders match", catalog.len()))
}

fn clark_filter() -> Outcome {
    let r = papercheck::verify_clark();
    ensure(r.passed, format!("{:?}", r.failure))?;
    for s in [RANK66, RANK74, RANK68] {
        ensure(ms(s).clark_check().unwrap() == loopdeg::degvec::ClarkVerdict::Pass, "example fails")?;
    }
    ensure(ms("4").clark_check().unwrap() != loopdeg::degvec::ClarkVerdict::Pass, "{4} passes")?;
    Ok("three examples pass, {4} fails".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("rank-66 reproduction", rank66_reproduction),
        ("hyperplane certificate", hyperplane),
        ("remark examples", remark_examples),
        ("cone theorem at D=30", cone_theorem),
        ("decomposition oracle", decomposition_oracle),
        ("LP/DD certificates", certificate_soundness),
        ("search minimality", search_minimality),
        ("catalog integrity", catalog_integrity),
        ("Clark filter", clark_filter),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS {} {name}: {msg} [{secs:.2}s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {} {name}: {msg} [{secs:.2}s]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
