mod common;

use common::checks;

#[test]
fn plane_counts_match_full_scans() {
    checks::plane_counts(50);
}

#[test]
fn root_counts_match_field_scans() {
    checks::root_counts();
}

#[test]
fn every_weil_polynomial_satisfies_the_functional_equation() {
    checks::functional_equation(8);
}

#[test]
fn irreducibility_agrees_with_the_slow_oracle() {
    checks::irreducibility_oracle(1000);
}
