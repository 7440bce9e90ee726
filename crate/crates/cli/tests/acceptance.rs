//! One test per acceptance criterion; each prints its PASS/FAIL line.

use scalespace_cli::acceptance::{self, Outcome};

fn check(o: Outcome) {
    println!("{}", o.line());
    assert!(o.passed, "{}", o.line());
}

#[test]
fn criterion_01_exact_velocity_table() {
    check(acceptance::exact_velocity_table());
}

#[test]
fn criterion_02_numeric_velocity_table() {
    check(acceptance::numeric_velocity_table());
}

#[test]
fn criterion_03_off_dyadic_vanishing() {
    check(acceptance::off_dyadic_vanishing());
}

#[test]
fn criterion_04_scale_invariance() {
    check(acceptance::scale_invariance());
}

#[test]
fn criterion_05_limit_equivalence() {
    check(acceptance::equivalence());
}

#[test]
fn criterion_06_bridge() {
    check(acceptance::bridge());
}

#[test]
fn criterion_07_inversion() {
    check(acceptance::inversion());
}

#[test]
fn criterion_08_holder() {
    check(acceptance::holder());
}

#[test]
fn criterion_09_monte_carlo() {
    check(acceptance::monte_carlo());
}

#[test]
fn criterion_10_figure_shapes() {
    check(acceptance::figure_shapes());
}
