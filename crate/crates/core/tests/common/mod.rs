#![allow(dead_code)]

pub mod checks;

use genus5::cli::infer_config;
use genus5::field_tower::{tower, Fe};
use genus5::polynomials::{monomials, QuinaryQuadric, TernaryForm};
use genus5::sextic_model::QuadricTriple;
use genus5::singularity::{non_special_check, SingularConfig, DEFAULT_SEED};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random quadric over GF(3) vanishing at (1:0:0:0:0) and (0:0:0:0:1).
pub fn random_quadric(rng: &mut impl Rng) -> QuinaryQuadric {
    let terms: Vec<([u8; 5], Fe)> = monomials::<5>(2)
        .into_iter()
        .filter(|e| e[0] != 2 && e[4] != 2)
        .map(|e| (e, Fe::from_i64(rng.random_range(0..3))))
        .collect();
    QuinaryQuadric::from_terms(1, 2, terms)
}

pub fn random_triple(rng: &mut impl Rng) -> QuadricTriple {
    QuadricTriple::new([random_quadric(rng), random_quadric(rng), random_quadric(rng)])
}

/// Random triple whose sextic is a non-special genus-5 model, with its configuration.
pub fn random_good_triple(rng: &mut impl Rng) -> (QuadricTriple, TernaryForm, SingularConfig) {
    loop {
        let t = random_triple(rng);
        let Ok(f) = t.build_sextic() else { continue };
        if f.is_zero() || f.field_degree() != 1 {
            continue;
        }
        let Ok(cfg) = infer_config(&f, DEFAULT_SEED) else { continue };
        if non_special_check(&f, &cfg).is_ok() {
            return (t, f, cfg);
        }
    }
}

pub fn random_sextic(rng: &mut impl Rng) -> TernaryForm {
    let digits: Vec<u8> = (0..28).map(|_| rng.random_range(0..3)).collect();
    TernaryForm::sextic_from_digits(&digits)
}

pub fn random_matrix(rng: &mut impl Rng) -> [[i64; 3]; 3] {
    loop {
        let m: [[i64; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| rng.random_range(0..3)));
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        if det.rem_euclid(3) != 0 {
            return m;
        }
    }
}

/// Points of `V(f)` in P^2(GF(3^e)) by evaluating `f` everywhere, one row
/// `(1:a:*)` at a time with Horner's rule in the last coordinate.
pub fn scan_count(f: &TernaryForm, e: usize) -> u64 {
    let gf = tower().field(e);
    let f = f.embed(e);
    let d = f.degree();
    let elems: Vec<Fe> = gf.elements().collect();
    let mut count = 0;
    // row polynomial in the last coordinate: c_j = sum over terms with z-degree j
    let row = |x: Fe, y: Fe| -> Vec<Fe> {
        let mut c = vec![Fe::ZERO; d + 1];
        for (ex, &a) in f.terms() {
            let v = gf.mul(a, gf.mul(gf.pow(x, ex[0] as u64), gf.pow(y, ex[1] as u64)));
            c[ex[2] as usize] = c[ex[2] as usize].add(v);
        }
        c
    };
    let horner = |c: &[Fe], t: Fe| c.iter().rev().fold(Fe::ZERO, |acc, &a| gf.mul(acc, t).add(a));
    for &a in &elems {
        let c = row(Fe::ONE, a);
        count += elems.iter().filter(|&&t| horner(&c, t).is_zero()).count() as u64;
    }
    let c = row(Fe::ZERO, Fe::ONE);
    count += elems.iter().filter(|&&t| horner(&c, t).is_zero()).count() as u64;
    count += f.eval(&[Fe::ZERO, Fe::ZERO, Fe::ONE], e).is_zero() as u64;
    count
}

/// Geometric irreducibility decided without the library's fast path: a
/// GF(3) factor of degree at most 3 is searched by plain division (only
/// trying divisors that vanish nowhere off `V(f)` in P^2(GF(9))), and
/// conjugate components are detected by a full scan over GF(3^6).
pub fn slow_irreducible(f: &TernaryForm) -> bool {
    if f.is_zero() {
        return false;
    }
    let gf9 = tower().field(2);
    let mut off: Vec<[Fe; 3]> = Vec::new();
    for a in gf9.elements() {
        for b in gf9.elements() {
            off.push([Fe::ONE, a, b]);
        }
        off.push([Fe::ZERO, Fe::ONE, a]);
    }
    off.push([Fe::ZERO, Fe::ZERO, Fe::ONE]);
    off.retain(|p| !f.eval(p, 2).is_zero());
    for d in 1..=3usize {
        let monos = monomials::<3>(d);
        let vals: Vec<Vec<Fe>> = off
            .iter()
            .map(|p| monos.iter().map(|&m| TernaryForm::monomial(1, m, Fe::ONE).eval(p, 2)).collect())
            .collect();
        let n = monos.len();
        for code in 1..3u64.pow(n as u32) {
            let mut c = code;
            let digits: Vec<u8> = (0..n)
                .map(|_| {
                    let x = (c % 3) as u8;
                    c /= 3;
                    x
                })
                .collect();
            if digits.iter().find(|&&x| x != 0) != Some(&1) {
                continue;
            }
            let nowhere_zero = vals.iter().all(|row| {
                !row.iter().zip(&digits).fold(Fe::ZERO, |acc, (&v, &g)| acc.add(v.scale(g))).is_zero()
            });
            if !nowhere_zero {
                continue;
            }
            let g = TernaryForm::from_terms(1, d, monos.iter().zip(&digits).map(|(&m, &g)| (m, Fe::from_i64(g as i64))));
            if genus5::polynomials::form_divides(&g, f).unwrap() {
                return false;
            }
        }
    }
    scan_count(f, 6) <= genus5::point_counting::IRREDUCIBILITY_THRESHOLD
}

/// Random form of degree `d` over GF(3^k).
pub fn random_form(rng: &mut impl Rng, k: usize, d: usize) -> TernaryForm {
    let gf = tower().field(k);
    TernaryForm::from_terms(k, d, monomials::<3>(d).into_iter().map(|m| (m, gf.random(rng))))
}

/// Product of the Frobenius conjugates of a random degree-`d` form over GF(3^k).
pub fn random_norm(rng: &mut impl Rng, k: usize, d: usize) -> TernaryForm {
    let g = random_form(rng, k, d);
    let mut acc = g.clone();
    for i in 1..k {
        acc = acc.mul(&g.frobenius(i));
    }
    acc.descend(1).expect("norms are defined over GF(3)")
}

/// A sextic over GF(3) that is reducible by construction (or zero).
pub fn random_reducible(rng: &mut impl Rng) -> TernaryForm {
    match rng.random_range(0..7) {
        0 => random_form(rng, 1, 1).mul(&random_form(rng, 1, 5)),
        1 => random_form(rng, 1, 2).mul(&random_form(rng, 1, 4)),
        2 => random_form(rng, 1, 3).mul(&random_form(rng, 1, 3)),
        3 => random_norm(rng, 2, 3),
        4 => random_norm(rng, 3, 2),
        5 => random_norm(rng, 6, 1),
        _ => random_norm(rng, 2, 1).mul(&random_form(rng, 1, 4)),
    }
}
