//! Acceptance suite: each criterion of the reproduction checklist as its
//! own test, printing the same pass/fail line the `reproduce` subcommand
//! emits. Tolerances live in `vacline_cli::checks`, pinned in code.

use vacline_cli::checks;

fn assert_pass(outcome: checks::CheckOutcome) {
    println!("{}", outcome.line());
    assert!(outcome.passed, "{}", outcome.line());
}

#[test]
fn criterion_1_headline_variance_law() {
    assert_pass(checks::headline_formula(None));
}

#[test]
fn criterion_2_peak_location() {
    assert_pass(checks::peak_location());
}

#[test]
fn criterion_3_momentum_energy_equality() {
    assert_pass(checks::momentum_energy_equality(None));
}

#[test]
fn criterion_4_pulse_normalization() {
    assert_pass(checks::pulse_normalization());
}

#[test]
fn criterion_5_transmitted_convergence() {
    assert_pass(checks::transmitted_convergence());
}

#[test]
fn criterion_6_sinc_zeros() {
    assert_pass(checks::sinc_zeros());
}

#[test]
fn criterion_7_conservation() {
    assert_pass(checks::conservation());
}

#[test]
fn criterion_8_suppression() {
    assert_pass(checks::suppression(None));
}

#[test]
fn criterion_9_quantum_moments() {
    assert_pass(checks::quantum_moments());
}
