//! Acceptance gate: runs the full suite and prints one line per criterion.

#[test]
fn acceptance() {
    let results = gordian::selftest::run_all();
    let mut failed = Vec::new();
    for r in &results {
        println!("{r}");
        if !r.passed {
            failed.push(r.name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
