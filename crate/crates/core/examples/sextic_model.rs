//! From three quadrics in P^4 through P = (1:0:0:0:0) and Q = (0:0:0:0:1)
//! to the plane sextic model, and back to point counts.

use genus5::cli::infer_config;
use genus5::point_counting::count_smooth_model;
use genus5::sextic_model::{count_quadric_intersection, intersection_smooth_over, QuadricTriple};
use genus5::singularity::{non_special_check, DEFAULT_SEED};

fn main() {
    let text = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(
            "x0x2 + 2x1x2 + x1x3 + x2x3 + x2x4 + x3^2; ",
            "x0x2 + 2x0x3 + 2x0x4 + x1^2 + x1x3 + 2x1x4 + 2x2^2 + 2x2x4 + x3x4; ",
            "2x0x1 + 2x0x2 + x0x4 + x1^2 + x1x3 + x1x4 + 2x2^2 + 2x2x3 + x3x4"
        )
        .into()
    });
    let triple = QuadricTriple::parse(&text, 1).expect("three quadrics separated by ';'");
    println!("φ = {}", triple.render());
    let model = match triple.model() {
        Ok(m) => m,
        Err(e) => {
            println!("no sextic model: {e}");
            return;
        }
    };
    println!("det A = {}", model.det_a.render());
    for (i, v) in model.v.iter().enumerate() {
        println!("v{} = {}", i + 1, v.render());
    }
    println!("F = {}", model.sextic.render());

    let config = match infer_config(&model.sextic, DEFAULT_SEED) {
        Ok(c) => c,
        Err(e) => {
            println!("singular locus is not a genus-5 configuration: {e}");
            return;
        }
    };
    println!("singular configuration: {}", config.render());
    match non_special_check(&model.sextic, &config) {
        Ok(()) => println!("non-special genus-5 model"),
        Err(e) => {
            println!("not a non-special model: {e}");
            return;
        }
    }
    for e in [1, 2] {
        let via_model = count_smooth_model(&model.sextic, &config, e).unwrap();
        let smooth = intersection_smooth_over(&triple, e);
        let direct = count_quadric_intersection(&triple, e);
        println!("GF(3^{e}): sextic model {via_model}, V(φ) in P^4 {direct} (smooth there: {smooth})");
    }
}
