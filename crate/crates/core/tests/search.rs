use loopdeg::search::{resume, run_search, Checkpoint, SearchConfig};
use loopdeg::{Catalog, Error};

fn config(max_rank: u32, jobs: usize) -> SearchConfig {
    let mut c = SearchConfig::new(max_rank);
    c.jobs = jobs;
    c
}

#[test]
fn resumed_run_matches_fresh_run() {
    let catalog = Catalog::builtin();
    let fresh = run_search(&config(10, 1), &catalog).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cp.json");
    let mut partial = config(10, 1);
    partial.checkpoint_path = Some(path.clone());
    partial.unit_limit = Some(5);
    let first = run_search(&partial, &catalog).unwrap();
    assert!(!first.is_complete());
    assert_eq!(first.units_completed, 5);
    let cp = Checkpoint::load(&path).unwrap();
    assert_eq!(cp.completed_units.len(), 5);
    let done = resume(&path, &catalog, None).unwrap();
    assert!(done.is_complete());
    assert_eq!(done.found, fresh.found);
    assert_eq!(done.explored, fresh.explored);
    assert_eq!(done.units_total, fresh.units_total);
}

#[test]
fn checkpoint_rejects_other_config_or_catalog() {
    let catalog = Catalog::builtin();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cp.json");
    let mut c = config(6, 1);
    c.checkpoint_path = Some(path.clone());
    run_search(&c, &catalog).unwrap();
    let mut other = config(7, 1);
    other.checkpoint_path = Some(path.clone());
    assert!(matches!(run_search(&other, &catalog), Err(Error::CheckpointMismatch(_))));
    let smaller = catalog.without("W(A1)");
    assert!(matches!(resume(&path, &smaller, None), Err(Error::CheckpointMismatch(_))));
}

#[test]
fn job_count_does_not_change_the_report() {
    let catalog = Catalog::builtin();
    let a = run_search(&config(10, 1), &catalog).unwrap();
    let b = run_search(&config(10, 3), &catalog).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn exploration_grows_with_rank() {
    let catalog = Catalog::builtin();
    let mut last = 0;
    for r in [4, 6, 8, 10] {
        let report = run_search(&config(r, 1), &catalog).unwrap();
        assert!(report.found.is_empty());
        assert!(report.explored >= last, "rank {r}");
        last = report.explored;
    }
}

#[test]
fn invalid_configs() {
    let catalog = Catalog::builtin();
    assert!(run_search(&config(0, 1), &catalog).is_err());
    assert!(run_search(&config(4, 0), &catalog).is_err());
    let mut c = config(4, 1);
    c.prime_class_reps = Some(vec![4]);
    assert!(run_search(&c, &catalog).is_err());
}
