//! One test per acceptance criterion; each prints a PASS/FAIL line and then
//! asserts, so a red criterion is visible in the summary and in the output.

use treeminor::acceptance::run;

fn check(id: usize) {
    let r = run(id);
    let status = if r.pass { "PASS" } else { "FAIL" };
    println!("criterion {} {}: {} — {}", r.id, status, r.name, r.detail);
    assert!(r.pass, "criterion {} failed: {} — {}", r.id, r.name, r.detail);
}

#[test]
fn criterion_01_embedding_agrees_with_exhaustive_search() {
    check(1);
}

#[test]
fn criterion_02_mutual_embedding_is_isomorphism() {
    check(2);
}

#[test]
fn criterion_03_enumeration_counts() {
    check(3);
}

#[test]
fn criterion_04_sequence_domination_oracle() {
    check(4);
}

#[test]
fn criterion_05_sequence_caterpillar_checks() {
    check(5);
}

#[test]
fn criterion_06_hierarchy_order() {
    check(6);
}

#[test]
fn criterion_07_binary_tree_truncations() {
    check(7);
}

#[test]
fn criterion_08_comb_chains() {
    check(8);
}

#[test]
fn criterion_09_extraction_monotone() {
    check(9);
}

#[test]
fn criterion_10_family_pairs() {
    check(10);
}

#[test]
fn criterion_11_collapse_equivalence() {
    check(11);
}

#[test]
fn criterion_12_order_one_forms() {
    check(12);
}

#[test]
fn criterion_13_reroot_invariance() {
    check(13);
}

#[test]
fn criterion_14_notation_round_trip() {
    check(14);
}
