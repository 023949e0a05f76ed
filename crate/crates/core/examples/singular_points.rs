//! Singular locus, tangent cones and blow-up data of a plane sextic.

use genus5::fixtures::curves;
use genus5::polynomials::TernaryForm;
use genus5::singularity::{point_report, singular_locus};

fn main() {
    let text = std::env::args().nth(1).unwrap_or_else(|| curves().curves[3].sextic.clone());
    let f = TernaryForm::parse(&text, 1).expect("a sextic over GF(3)");
    println!("F = {}", f.render());
    let locus = singular_locus(&f).expect("finite singular locus");
    println!("{} singular points in {} Frobenius orbits", locus.len(), locus.orbits.len());
    for orbit in &locus.orbits {
        let Some(p) = orbit.representative else {
            println!("  orbit of degree {} outside the tower", orbit.degree);
            continue;
        };
        let r = point_report(&f, &p);
        println!("  {}  (degree {}, multiplicity {})", r.point, r.field_degree, r.multiplicity);
        println!("      tangent cone {}", r.tangent_cone);
        if let Some(d) = &r.discriminant {
            println!("      discriminant {d}");
        }
        println!("      resolved by one blow-up: {}", r.resolved_in_one_blowup);
        let adj: Vec<String> = r.adjustments.iter().map(|(e, a)| format!("e={e}: {a:+}")).collect();
        println!("      count adjustments {}", adj.join(", "));
    }
}
