//! One pass/fail line per acceptance criterion. Tolerances are pinned in
//! `mbi_core::verify`.

use mbi_core::verify::run_criterion;

fn check(id: u8) {
    let report = run_criterion(id).unwrap_or_else(|e| panic!("criterion {id} errored: {e}"));
    println!("{}", report.line());
    assert!(report.passed, "{}", report.line());
}

#[test]
fn criterion_01_kernel_identity() {
    check(1);
}

#[test]
fn criterion_02_leading_asymptotics() {
    check(2);
}

#[test]
fn criterion_03_series_remainder_exponent() {
    check(3);
}

#[test]
fn criterion_04_u_bounds() {
    check(4);
}

#[test]
fn criterion_05_coulomb_benchmark() {
    check(5);
}

#[test]
fn criterion_06_klein_gordon_self_consistency() {
    check(6);
}

#[test]
fn criterion_07_perturbation_bound() {
    check(7);
}

#[test]
fn criterion_08_beta_upper_bound() {
    check(8);
}

#[test]
fn criterion_09_coulomb_validity_radius() {
    check(9);
}

#[test]
fn criterion_10_null_wave_exactness() {
    check(10);
}

#[test]
fn criterion_11_divergence_preservation() {
    check(11);
}

#[test]
fn criterion_12_bohmian_suite() {
    check(12);
}
