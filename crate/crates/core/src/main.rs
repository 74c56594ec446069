use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use loopdeg::catalog::{EnumerationFilter, PrimeFilter};
use loopdeg::decompose::{decomposable_at, decomposable_everywhere, decompose_rational, EverywhereCheck};
use loopdeg::degvec::{ClarkVerdict, DEFAULT_TRUNCATION};
use loopdeg::papercheck::{self, witness_json, CheckResult};
use loopdeg::primecover::is_prime;
use loopdeg::ratcone::{
    self, cdd, cone_subset, dd_facets, difference_witness, member, parse_rational, render_vec,
    MembershipCertificate, Rational, RationalCone, SubsetOutcome,
};
use loopdeg::search::{run_search, SearchConfig};
use loopdeg::{Catalog, DegreeMultiset, Error};

// A closed stdout (for example `| head`) ends output quietly.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

macro_rules! out_raw {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = write!(std::io::stdout(), $($t)*);
    }};
}

#[derive(Parser)]
#[command(name = "loopdeg", version, about = "Degree combinatorics of finite loop spaces")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// JSON Lines catalog to use instead of the builtin one.
    #[arg(long, global = true, value_name = "FILE")]
    catalog: Option<PathBuf>,
    /// Largest degree of catalog entries taken into account.
    #[arg(long, global = true, default_value_t = DEFAULT_TRUNCATION)]
    max_degree: u32,
    /// Truncation degree of vectors and cones.
    #[arg(long, global = true, value_name = "D", default_value_t = DEFAULT_TRUNCATION)]
    truncate: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Query the group catalog.
    #[command(subcommand)]
    Catalog(CatalogCmd),
    /// Arithmetic on a degree multiset.
    #[command(subcommand)]
    Degrees(DegreesCmd),
    /// Exact cone operations.
    #[command(subcommand)]
    Cone(ConeCmd),
    /// Decompose a multiset into simple reflection groups.
    Decompose(DecomposeArgs),
    /// Search for multisets realizable at every prime but not rationally.
    Search(SearchArgs),
    /// Re-run the reproduction checks.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// List entries with degrees at most --max-degree.
    List {
        #[arg(long, conflicts_with = "prime")]
        rational: bool,
        /// Only entries realizable at this prime.
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long)]
        max_rank: Option<u32>,
    },
    /// Print the whole catalog as JSON Lines.
    Dump,
    /// Show one entry.
    Show { id: String },
}

#[derive(Args)]
struct DegreesArg {
    /// Degree string such as `2^8,3^2,4`.
    #[arg(long)]
    degrees: String,
}

#[derive(Subcommand)]
enum DegreesCmd {
    Rank(DegreesArg),
    Dim(DegreesArg),
    /// Degree vector truncated at --truncate.
    Vector(DegreesArg),
    /// Clark's large-prime condition; exits 1 when it fails.
    Clark(DegreesArg),
}

#[derive(Args)]
struct PointArg {
    /// Point given as a degree string.
    #[arg(long, conflicts_with = "point", required_unless_present = "point")]
    degrees: Option<String>,
    /// Point given as comma-separated rationals.
    #[arg(long)]
    point: Option<String>,
}

#[derive(Subcommand)]
enum ConeCmd {
    /// Membership with an exact certificate.
    Member {
        /// `lie`, `lin`, `p=<prime>` or a cdd V-representation file.
        #[arg(long)]
        cone: String,
        #[command(flatten)]
        point: PointArg,
    },
    /// Facets by double description.
    Facets {
        #[arg(long)]
        cone: String,
    },
    /// Generator-wise inclusion; exits 1 when it fails.
    Subset {
        #[arg(long)]
        cone: String,
        #[arg(long = "in")]
        within: String,
    },
    /// A point in every --intersect cone but outside --exclude; exits 1 when none exists.
    Witness {
        /// Defaults to p=2, p=3, p=5, p=7 and lin.
        #[arg(long)]
        intersect: Vec<String>,
        #[arg(long, default_value = "lie")]
        exclude: String,
    },
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    degrees: String,
    /// Decompose over the Q_p-reflection groups for this prime.
    #[arg(long, conflicts_with_all = ["rational", "everywhere"])]
    prime: Option<u64>,
    /// Decompose over the Q-reflection groups (the default).
    #[arg(long)]
    rational: bool,
    /// Decompose at every prime, one class at a time.
    #[arg(long, conflicts_with = "rational")]
    everywhere: bool,
    /// Exit 1 when no decomposition exists.
    #[arg(long)]
    expect_some: bool,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    max_rank: u32,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Checkpoint file; an existing one is resumed.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Stop after this many units.
    #[arg(long)]
    unit_limit: Option<usize>,
    /// Test these primes instead of the exact classes, e.g. `2,5,17,23,31`.
    #[arg(long, value_delimiter = ',')]
    primes: Option<Vec<u64>>,
}

#[derive(Args)]
struct VerifyArgs {
    /// rank66, hyperplane, remark, conethm or clark.
    check: Option<String>,
    #[arg(long, conflicts_with = "check")]
    all: bool,
}

/// Usage or I/O failure, reported with exit code 2.
struct Fatal(String);

impl From<Error> for Fatal {
    fn from(e: Error) -> Self {
        Fatal(e.to_string())
    }
}

type Outcome = Result<bool, Fatal>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fatal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let catalog = match &cli.catalog {
        Some(path) => Catalog::load(path)?,
        None => Catalog::builtin(),
    };
    match &cli.command {
        Command::Catalog(cmd) => catalog_cmd(cli, &catalog, cmd),
        Command::Degrees(cmd) => degrees_cmd(cli, cmd),
        Command::Cone(cmd) => cone_cmd(cli, &catalog, cmd),
        Command::Decompose(args) => decompose_cmd(cli, &catalog, args),
        Command::Search(args) => search_cmd(cli, &catalog, args),
        Command::Verify(args) => verify_cmd(cli, &catalog, args),
    }
}

fn emit(value: &Value) {
    out!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn parse_degrees(s: &str) -> Result<DegreeMultiset, Fatal> {
    Ok(s.parse::<DegreeMultiset>()?)
}

fn catalog_cmd(cli: &Cli, catalog: &Catalog, cmd: &CatalogCmd) -> Outcome {
    match cmd {
        CatalogCmd::List { rational, prime, max_rank } => {
            let primes = match (rational, prime) {
                (true, _) => PrimeFilter::Rational,
                (false, Some(p)) if is_prime(*p) => PrimeFilter::Prime(*p),
                (false, Some(p)) => return Err(Fatal(format!("{p} is not prime"))),
                (false, None) => PrimeFilter::Any,
            };
            let mut filter = EnumerationFilter::new(primes).max_degree(cli.max_degree);
            if let Some(r) = max_rank {
                filter = filter.max_rank(*r);
            }
            let entries = catalog.enumerate(&filter)?;
            if cli.json {
                emit(&Value::Array(entries.iter().map(|e| e.to_json()).collect()));
            } else {
                for e in entries {
                    out!("{:<14} rank {:<3} {:<28} {}", e.id, e.rank, e.degrees.to_string(), e.primes.describe());
                }
            }
        }
        CatalogCmd::Dump => out_raw!("{}", catalog.to_jsonl()),
        CatalogCmd::Show { id } => {
            let e = catalog.get(id).ok_or_else(|| Fatal(format!("no catalog entry {id:?}")))?;
            if cli.json {
                emit(&e.to_json());
            } else {
                out!("id       {}", e.id);
                out!("rank     {}", e.rank);
                out!("degrees  {}", e.degrees);
                out!("order    {}", e.order);
                out!("primes   {}", e.primes.describe());
                out!("source   {}", e.source);
            }
        }
    }
    Ok(true)
}

fn degrees_cmd(cli: &Cli, cmd: &DegreesCmd) -> Outcome {
    match cmd {
        DegreesCmd::Rank(a) => {
            let m = parse_degrees(&a.degrees)?;
            scalar(cli, "rank", m.rank() as u64);
        }
        DegreesCmd::Dim(a) => {
            let m = parse_degrees(&a.degrees)?;
            scalar(cli, "dimension", m.dimension());
        }
        DegreesCmd::Vector(a) => {
            let v = parse_degrees(&a.degrees)?.to_vector(cli.truncate)?;
            if cli.json {
                emit(&json!({"truncation": cli.truncate, "vector": v.entries()}));
            } else {
                let parts: Vec<String> = v.entries().iter().map(u32::to_string).collect();
                out!("{}", parts.join(","));
            }
        }
        DegreesCmd::Clark(a) => {
            let verdict = parse_degrees(&a.degrees)?.clark_check()?;
            if cli.json {
                emit(&serde_json::to_value(&verdict).expect("serializable"));
            } else {
                match &verdict {
                    ClarkVerdict::Pass => out!("PASS"),
                    ClarkVerdict::Fail { missing } => out!("FAIL missing {missing:?}"),
                }
            }
            return Ok(verdict == ClarkVerdict::Pass);
        }
    }
    Ok(true)
}

fn scalar(cli: &Cli, key: &str, value: u64) {
    if cli.json {
        emit(&json!({ key: value }));
    } else {
        out!("{value}");
    }
}

fn load_cone(spec: &str, catalog: &Catalog, d: u32) -> Result<RationalCone, Fatal> {
    match spec {
        "lie" => Ok(ratcone::lie_cone(catalog, d)),
        "lin" => Ok(ratcone::lin_cone(catalog, d)),
        _ => {
            if let Some(p) = spec.strip_prefix("p=") {
                let p: u64 = p.parse().map_err(|_| Fatal(format!("bad prime in {spec:?}")))?;
                if !is_prime(p) {
                    return Err(Fatal(format!("{p} is not prime")));
                }
                return Ok(ratcone::prime_cone(catalog, p, d));
            }
            let path = Path::new(spec);
            if !path.exists() {
                return Err(Fatal(format!("unknown cone {spec:?}: expected lie, lin, p=<prime> or a file")));
            }
            let text = std::fs::read_to_string(path).map_err(|e| Fatal(format!("{spec}: {e}")))?;
            Ok(cdd::read_v(&text)?)
        }
    }
}

fn parse_point(arg: &PointArg, dim: usize) -> Result<Vec<Rational>, Fatal> {
    let point: Vec<Rational> = match (&arg.degrees, &arg.point) {
        (Some(s), _) => {
            let v = parse_degrees(s)?.to_vector(dim as u32)?;
            v.entries().iter().map(|&x| ratcone::q(x as i64)).collect()
        }
        (None, Some(s)) => s.split(',').map(parse_rational).collect::<Result<_, _>>()?,
        (None, None) => return Err(Fatal("a point is required".into())),
    };
    if point.len() != dim {
        return Err(Fatal(format!("point has {} coordinates, cone has dimension {dim}", point.len())));
    }
    Ok(point)
}

fn cone_cmd(cli: &Cli, catalog: &Catalog, cmd: &ConeCmd) -> Outcome {
    let d = cli.truncate;
    match cmd {
        ConeCmd::Member { cone, point } => {
            let c = load_cone(cone, catalog, d)?;
            let x = parse_point(point, c.dim())?;
            let cert = member(&c, &x)?;
            let value = match &cert {
                MembershipCertificate::Inside { coefficients } => {
                    json!({"member": true, "coefficients": render_vec(coefficients), "labels": c.labels()})
                }
                MembershipCertificate::Outside { functional } => {
                    json!({"member": false, "functional": render_vec(functional)})
                }
            };
            if cli.json {
                emit(&value);
            } else {
                match &cert {
                    MembershipCertificate::Inside { coefficients } => {
                        out!("inside");
                        for (l, k) in c.labels().iter().zip(coefficients).filter(|(_, k)| !num_traits::Zero::is_zero(*k)) {
                            out!("  {} {}", ratcone::render(k), l);
                        }
                    }
                    MembershipCertificate::Outside { functional } => {
                        out!("outside");
                        out!("  functional {}", render_vec(functional).join(","));
                    }
                }
            }
            Ok(true)
        }
        ConeCmd::Facets { cone } => {
            let c = load_cone(cone, catalog, d)?;
            let h = dd_facets(&c);
            if cli.json {
                let rows = |rs: &[Vec<num_bigint::BigInt>]| -> Value {
                    rs.iter().map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>()).collect()
                };
                emit(&json!({
                    "dim": h.dim,
                    "equalities": rows(&h.equalities),
                    "inequalities": rows(&h.inequalities),
                }));
            } else {
                out_raw!("{}", cdd::write_h(&h));
            }
            Ok(true)
        }
        ConeCmd::Subset { cone, within } => {
            let a = load_cone(cone, catalog, d)?;
            let b = load_cone(within, catalog, d)?;
            let outcome = cone_subset(&a, &b)?;
            let value = match &outcome {
                SubsetOutcome::Subset => json!({"subset": true}),
                SubsetOutcome::Witness { label, generator, functional, .. } => json!({
                    "subset": false,
                    "generator": label,
                    "vector": render_vec(generator),
                    "functional": render_vec(functional),
                }),
            };
            if cli.json {
                emit(&value);
            } else {
                match &outcome {
                    SubsetOutcome::Subset => out!("subset"),
                    SubsetOutcome::Witness { label, functional, .. } => {
                        out!("not a subset: {label} lies outside");
                        out!("  functional {}", render_vec(functional).join(","));
                    }
                }
            }
            Ok(outcome.holds())
        }
        ConeCmd::Witness { intersect, exclude } => {
            let specs: Vec<String> = if intersect.is_empty() {
                ["p=2", "p=3", "p=5", "p=7", "lin"].iter().map(|s| s.to_string()).collect()
            } else {
                intersect.clone()
            };
            let cones: Vec<RationalCone> =
                specs.iter().map(|s| load_cone(s, catalog, d)).collect::<Result<_, _>>()?;
            let ex = load_cone(exclude, catalog, d)?;
            let w = difference_witness(&cones, &ex)?;
            if cli.json {
                emit(&json!({
                    "intersect": specs,
                    "exclude": exclude,
                    "witness": w.as_ref().map(witness_json),
                }));
            } else {
                match &w {
                    Some(w) => {
                        out!("witness {}", render_vec(&w.point).join(","));
                        out!("  functional {}", render_vec(&w.functional).join(","));
                    }
                    None => out!("NONE"),
                }
            }
            Ok(w.is_some())
        }
    }
}

fn decompose_cmd(cli: &Cli, catalog: &Catalog, args: &DecomposeArgs) -> Outcome {
    let target = parse_degrees(&args.degrees)?;
    let found = if args.everywhere {
        let check = decomposable_everywhere(&target, catalog)?;
        let ok = matches!(check, EverywhereCheck::Decomposable { .. });
        let value = json!({"degrees": target.to_string(), "mode": "everywhere", "check": check});
        if !cli.json {
            match &check {
                EverywhereCheck::Decomposable { classes } => {
                    for c in classes {
                        out!("{} (p = {}): {}", c.label, c.representative, c.decomposition.product_string());
                    }
                }
                EverywhereCheck::FailsAt { label, prime } => out!("NONE at {label} (p = {prime})"),
            }
        }
        emit(&value);
        ok
    } else {
        let (mode, result) = match args.prime {
            Some(p) if !is_prime(p) => return Err(Fatal(format!("{p} is not prime"))),
            Some(p) => (json!({"prime": p}), decomposable_at(&target, p, catalog)),
            None => (json!("rational"), decompose_rational(&target, catalog)),
        };
        if !cli.json {
            match &result {
                Some(dec) => out!("{}", dec.product_string()),
                None => out!("NONE"),
            }
        }
        emit(&json!({
            "degrees": target.to_string(),
            "mode": mode,
            "parts": result.as_ref().map(|dec| dec.sorted_parts()),
        }));
        result.is_some()
    };
    Ok(found || !args.expect_some)
}

fn search_cmd(cli: &Cli, catalog: &Catalog, args: &SearchArgs) -> Outcome {
    let mut config = SearchConfig::new(args.max_rank);
    config.max_degree = cli.max_degree;
    config.jobs = args.jobs;
    config.checkpoint_path = args.checkpoint.clone();
    config.unit_limit = args.unit_limit;
    config.prime_class_reps = args.primes.clone();
    let report = run_search(&config, catalog)?;
    if cli.json {
        emit(&serde_json::to_value(&report).expect("serializable"));
    } else {
        out!(
            "explored {} candidates in {}/{} units ({:.1?})",
            report.explored, report.units_completed, report.units_total, report.elapsed
        );
        if !report.is_complete() {
            out!("incomplete: {} units pending", report.frontier.len());
        }
        if report.found.is_empty() {
            out!("found none");
        }
        for f in &report.found {
            out!("found rank {} dim {}: {}", f.rank, f.dimension, f.degrees);
        }
    }
    Ok(true)
}

fn verify_cmd(cli: &Cli, catalog: &Catalog, args: &VerifyArgs) -> Outcome {
    let results: Vec<CheckResult> = match args.check.as_deref() {
        None | Some("all") => papercheck::verify_all_with(catalog),
        Some("rank66") => vec![papercheck::verify_rank66_with(catalog, &loopdeg::primecover::rank66_regimes())],
        Some("hyperplane") => vec![papercheck::verify_hyperplane_with(catalog, &papercheck::EQ1)],
        Some("remark") => vec![papercheck::verify_remark_examples_with(catalog, None)],
        Some("conethm") => vec![papercheck::verify_conethm_with(catalog, cli.truncate, &ratcone::LIN_EXTRA)],
        Some("clark") => vec![papercheck::verify_clark()],
        Some(other) => return Err(Fatal(format!("unknown check {other:?}"))),
    };
    let audit = papercheck::audit(&results, catalog);
    let passed = results.iter().all(|r| r.passed) && audit.is_ok();
    if cli.json {
        emit(&json!({
            "passed": passed,
            "audit": audit.as_ref().err(),
            "checks": results,
        }));
    } else {
        for r in &results {
            match &r.failure {
                None => out!("PASS {}", r.name),
                Some(why) => out!("FAIL {}: {why}", r.name),
            }
        }
        if let Err(why) = &audit {
            out!("FAIL audit: {why}");
        }
    }
    Ok(passed)
}
