use std::process::{Command, Output};

use loopdeg::papercheck::RANK66;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loopdeg")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn degree_queries() {
    let o = run(&["degrees", "dim", "--degrees", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "3");
    let o = run(&["degrees", "rank", "--degrees", RANK66]);
    assert_eq!(stdout(&o).trim(), "66");
    let o = run(&["degrees", "vector", "--degrees", "2^2,4", "--truncate", "5"]);
    assert_eq!(stdout(&o).trim(), "0,2,0,1,0");
    assert_eq!(run(&["degrees", "clark", "--degrees", RANK66]).status.code(), Some(0));
    assert_eq!(run(&["degrees", "clark", "--degrees", "4"]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["degrees", "dim", "--degrees", "3,2"]).status.code(), Some(2));
    assert_eq!(run(&["degrees", "dim", "--degrees", "1"]).status.code(), Some(2));
    assert_eq!(run(&["degrees", "dim", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["--catalog", "/nonexistent/file", "catalog", "list"]).status.code(), Some(2));
    assert_eq!(run(&["degrees", "vector", "--degrees", "40"]).status.code(), Some(2));
}

#[test]
fn decompose_exit_codes() {
    let o = run(&["decompose", "--degrees", RANK66, "--rational"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("NONE"));
    let o = run(&["decompose", "--degrees", RANK66, "--rational", "--expect-some"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["--json", "decompose", "--degrees", RANK66, "--prime", "2", "--expect-some"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["parts"].as_array().unwrap().iter().any(|p| p == "G24"));
}

#[test]
fn json_output_is_canonical_and_stable() {
    let args = ["--json", "cone", "member", "--cone", "p=5", "--truncate", "8", "--degrees", "4,8"];
    let a = stdout(&run(&args));
    let b = stdout(&run(&args));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", a);
    assert_eq!(v["member"], true);
}

#[test]
fn catalog_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("catalog.jsonl");
    let dump = stdout(&run(&["catalog", "dump"]));
    std::fs::write(&path, &dump).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(stdout(&run(&["--catalog", p, "catalog", "dump"])), dump);
    let o = run(&["--catalog", p, "--json", "catalog", "show", "G24"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["degrees"], serde_json::json!([4, 6, 14]));
    std::fs::write(&path, "{not json}\n").unwrap();
    assert_eq!(run(&["--catalog", p, "catalog", "dump"]).status.code(), Some(2));
}

#[test]
fn cones_from_cdd_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cone.ine");
    std::fs::write(&path, "V-representation\nbegin\n 2 4 rational\n 0 1 0 0\n 0 0 1 1/2\nend\n").unwrap();
    let p = path.to_str().unwrap();
    let o = run(&["--json", "cone", "member", "--cone", p, "--point", "2,3,3/2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["member"], true);
    let o = run(&["--json", "cone", "member", "--cone", p, "--point", "2,3,1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["member"], false);
    let o = run(&["cone", "facets", "--cone", p]);
    assert!(stdout(&o).starts_with("H-representation"));
}

#[test]
fn cone_subset_and_witness() {
    assert_eq!(run(&["cone", "subset", "--cone", "lie", "--in", "p=3", "--truncate", "10"]).status.code(), Some(0));
    assert_eq!(run(&["cone", "subset", "--cone", "p=3", "--in", "lie", "--truncate", "10"]).status.code(), Some(1));
    let o = run(&["cone", "witness", "--truncate", "10"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "NONE");
}

#[test]
fn verify_and_search() {
    let o = run(&["verify", "clark"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "PASS clark");
    let o = run(&["--json", "verify", "hyperplane"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(run(&["verify", "nonsense"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("cp.json");
    let cp = cp.to_str().unwrap();
    let first = run(&["--json", "search", "--max-rank", "8", "--jobs", "2", "--checkpoint", cp]);
    assert_eq!(first.status.code(), Some(0));
    let again = run(&["--json", "search", "--max-rank", "8", "--checkpoint", cp]);
    assert_eq!(stdout(&first), stdout(&again));
    let v: serde_json::Value = serde_json::from_str(&stdout(&first)).unwrap();
    assert_eq!(v["found"], serde_json::json!([]));
}
