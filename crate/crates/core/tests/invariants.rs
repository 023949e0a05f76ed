mod common;

use common::checks;
use genus5::polynomials::TernaryForm;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn basis_change_scales_the_sextic_by_det(seed in any::<u64>()) {
        checks::basis_change(seed);
    }

    #[test]
    fn swapping_p_and_q_keeps_the_curve(seed in any::<u64>()) {
        checks::swap_p_q(seed);
    }

    #[test]
    fn shears_keep_the_curve(seed in any::<u64>()) {
        checks::shear(seed, 1);
    }
}

#[test]
fn shears_over_gf9_keep_the_curve() {
    for seed in 0..30 {
        checks::shear(1000 + seed, 2);
    }
}

#[test]
fn zero_shear_is_identity() {
    let (t, f) = checks::nondegenerate(7);
    let zero = TernaryForm::zero(1, 1);
    assert_eq!(t.shear(&zero, &zero).build_sextic().unwrap(), f);
}

#[test]
fn collinear_points_force_a_line_component() {
    checks::collinear_configurations();
}
