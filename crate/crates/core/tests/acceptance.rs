//! One line per acceptance criterion, then a hard failure if any failed.
//!
//! Lines go straight to the stdout handle rather than through `println!`,
//! so they appear even when the harness captures test output.

use std::io::Write;

use kuforge::verify::{run_suite, Scope, SUITES};

#[test]
fn acceptance() {
    let mut out = std::io::stdout().lock();
    let mut failed = Vec::new();
    for name in SUITES {
        let rep = run_suite(name, Scope::default()).expect("known suite");
        let status = if rep.passed() { "PASS" } else { "FAIL" };
        writeln!(out, "{status} criterion {}: {name} ({} checks)", rep.criterion, rep.checks.len()).unwrap();
        for f in rep.failures() {
            writeln!(out, "    {}: {}", f.name, f.detail).unwrap();
        }
        if !rep.passed() {
            failed.push(name);
        }
    }
    out.flush().unwrap();
    assert!(failed.is_empty(), "failed suites: {failed:?}");
}
