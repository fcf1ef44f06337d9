mod common;

use common::{criterion_cstr, criterion_determinism, criterion_drift_comparison, criterion_ltv};

#[test]
fn example1_static_and_drift_contained() {
    let c = criterion_ltv();
    assert!(c.passed, "{}", c.detail);
}

#[test]
fn batch_ls_misses_under_drift() {
    let c = criterion_drift_comparison();
    assert!(c.passed, "{}", c.detail);
}

#[test]
fn cstr_contained_and_tighter_than_ls() {
    let c = criterion_cstr();
    assert!(c.passed, "{}", c.detail);
}

#[test]
fn same_seed_same_report() {
    let c = criterion_determinism();
    assert!(c.passed, "{}", c.detail);
}
