//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. Run with `cargo test --test acceptance -- --nocapture` to see the
//! lines; every criterion is exact (no floating-point verdicts).

use meshulam_core::theta::DEFAULT_ORACLE_CAP;
use meshulam_core::verify::{
    criterion_bounds_sandwich, criterion_chebotarev, criterion_diagonal_lemma,
    criterion_ds_classification, criterion_oracle_equals_closed, criterion_rank_dichotomy,
    criterion_tao_dimension, criterion_transform_algebra, criterion_two_prime_classification,
    criterion_vector_psq_classification, CriterionResult, DEFAULT_SEED,
};

fn check(result: CriterionResult) {
    result.print_line();
    assert!(result.pass, "{}: {}", result.id, result.details);
}

#[test]
fn criterion_1_theta_oracle_equals_closed_form() {
    check(criterion_oracle_equals_closed(DEFAULT_ORACLE_CAP));
}

#[test]
fn criterion_2_bounds_sandwich() {
    check(criterion_bounds_sandwich(DEFAULT_ORACLE_CAP));
}

#[test]
fn criterion_3_tao_dimension() {
    check(criterion_tao_dimension());
}

#[test]
fn criterion_4_donoho_stark_classification() {
    check(criterion_ds_classification(DEFAULT_ORACLE_CAP, DEFAULT_SEED));
}

#[test]
fn criterion_5_two_prime_classification_completeness() {
    check(criterion_two_prime_classification(DEFAULT_ORACLE_CAP));
}

#[test]
fn criterion_6_vector_and_prime_square_classification() {
    check(criterion_vector_psq_classification(DEFAULT_ORACLE_CAP));
}

#[test]
fn criterion_7_rank_dichotomy_and_decompositions() {
    check(criterion_rank_dichotomy(DEFAULT_ORACLE_CAP));
}

#[test]
fn criterion_8_chebotarev_minors() {
    check(criterion_chebotarev());
}

#[test]
fn criterion_9_diagonal_lemma() {
    check(criterion_diagonal_lemma(DEFAULT_SEED));
}

#[test]
fn criterion_10_transform_algebra() {
    check(criterion_transform_algebra(DEFAULT_SEED));
}
