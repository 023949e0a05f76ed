mod common;

#[test]
fn sextic_model_counts_match_the_canonical_curve() {
    common::checks::p4_oracle(20);
}
