//! N_1..N_5 over GF(9^m) and the Weil polynomial of a non-special genus-5 curve.

use genus5::cli::infer_config;
use genus5::fixtures::curves;
use genus5::point_counting::{count_plane_curve, weil_polynomial};
use genus5::polynomials::TernaryForm;
use genus5::singularity::DEFAULT_SEED;

fn main() {
    let fischer = curves().curves.iter().find(|c| c.name == "fischer").unwrap();
    let text = std::env::args().nth(1).unwrap_or_else(|| fischer.sextic.clone());
    let f = TernaryForm::parse(&text, 1).expect("a sextic over GF(3)");
    let config = infer_config(&f, DEFAULT_SEED).expect("genus-5 singular configuration");
    println!("F = {}", f.render());
    println!("singular points {}", config.render());

    let (counts, w) = weil_polynomial(&f, &config).expect("non-special model");
    for (m, n) in counts.n.iter().enumerate() {
        let plane = count_plane_curve(&f, 2 * (m + 1));
        println!("  GF(9^{}): plane curve {plane:>9}, smooth model {n:>9}", m + 1);
    }
    println!("W(t) = {}", w.expanded());
    println!("     = {}", w.factored());
    println!("functional equation holds: {}", w.satisfies_functional_equation());
    println!("roots on |t| = 3: {}", w.roots_on_circle());
}
