//! Arithmetic in the GF(3) extension tower.

use genus5::field_tower::{render_element, tower, FieldElement};

fn main() {
    let t = tower();
    print!("{}", t.manifest());

    let gf9 = t.field(2);
    let z = gf9.generator();
    println!("\nGF(9), generator ζ2:");
    for i in 0..8 {
        let a = gf9.exp(i);
        let kind = if gf9.is_square(a) { "square" } else { "non-square" };
        println!("  ζ2^{i} = {:<10} {kind}", render_element(FieldElement::new(2, a)));
    }
    assert_eq!(gf9.pow(z, 8), gf9.one());

    let gf = t.field(10);
    let a = gf.exp(12345);
    let b = gf.inv(a);
    println!("\nGF(3^10): (ζ10^12345)^-1 = ζ10^{}", gf.log(b).unwrap());
    assert_eq!(gf.mul(a, b), gf.one());
    println!("frobenius orbit of ζ10^12345 has length {}", gf.element_degree(a));

    // GF(9) sits inside GF(3^4) and GF(3^6)
    let w = t.embed(z, 2, 6);
    println!("ζ2 in GF(3^6) is ζ6^{}", t.field(6).log(w).unwrap());
}
