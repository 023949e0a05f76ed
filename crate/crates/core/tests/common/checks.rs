//! Whole-property checks shared by the focused tests and the acceptance run.
//! Each panics with a description on the first disagreement.

use genus5::cli::infer_config;
use genus5::enumeration::null_basis;
use genus5::field_tower::{tower, Fe};
use genus5::fixtures::curves;
use genus5::point_counting::{count_plane_curve, count_smooth_model, is_geometrically_irreducible, weil_polynomial, WeilPoly};
use genus5::polynomials::{form_divides, PolyRing, ProjPoint, TernaryForm, UniPoly};
use genus5::sextic_model::{count_quadric_intersection, intersection_smooth_over, shear_invariance_check, QuadricTriple};
use genus5::singularity::{Case, SingularConfig, DEFAULT_SEED};
use num::BigInt;
use rand::Rng;

use super::*;

/// A triple with a nonzero sextic.
pub fn nondegenerate(seed: u64) -> (QuadricTriple, TernaryForm) {
    let mut rng = rng(seed);
    loop {
        let t = random_triple(&mut rng);
        if let Ok(f) = t.build_sextic() {
            if !f.is_zero() {
                return (t, f);
            }
        }
    }
}

pub fn det3(m: &[[i64; 3]; 3]) -> i64 {
    (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
        .rem_euclid(3)
}

pub fn random_linear(rng: &mut impl Rng, k: usize) -> TernaryForm {
    let gf = tower().field(k);
    let terms = [[1, 0, 0], [0, 1, 0], [0, 0, 1]].map(|e| (e, gf.random(rng)));
    TernaryForm::from_terms(k, 1, terms)
}

pub fn basis_change(seed: u64) {
    let (t, f) = nondegenerate(seed);
    let b = random_matrix(&mut rng(seed ^ 0xb));
    let g = t.change_basis(&b).build_sextic().unwrap();
    // observed: F' = det(B)^2 F, i.e. literally equal over GF(3)
    let ratio = g.projective_ratio(&f).expect("projectively equal");
    assert_eq!(ratio, Fe::from_i64(det3(&b) * det3(&b)), "seed {seed}");
}

pub fn swap_p_q(seed: u64) {
    let (t, f) = nondegenerate(seed);
    let g = t.swap_p_q().build_sextic().unwrap();
    assert!(g.projectively_equal(&f), "seed {seed}");
}

pub fn shear(seed: u64, k: usize) {
    let (t, _) = nondegenerate(seed);
    let mut rng = rng(seed ^ 0x5);
    let (phi, psi) = (random_linear(&mut rng, k), random_linear(&mut rng, 1));
    assert!(shear_invariance_check(&t, &phi, &psi).unwrap(), "seed {seed}");
}

/// Every sampled sextic singular at `config` is divisible by `line`.
pub fn line_splits_off(config: &SingularConfig, line: &TernaryForm) {
    let basis = null_basis(config).unwrap();
    assert!(basis.dim() > 0);
    let mut rng = rng(basis.dim() as u64);
    let mut sampled = 0;
    for _ in 0..300 {
        let v: Vec<u8> = (0..basis.dim()).map(|_| rng.random_range(0..3)).collect();
        let c = basis.combine(&v);
        if c.iter().all(|&x| x == 0) {
            continue;
        }
        let f = TernaryForm::sextic_from_digits(&c);
        assert!(form_divides(line, &f).unwrap(), "{} not divisible by {}", f.render(), line.render());
        sampled += 1;
    }
    assert!(sampled > 250);
}

fn pt(s: &str) -> ProjPoint {
    ProjPoint::parse(s, 1).unwrap()
}

pub fn collinear_configurations() {
    let z = TernaryForm::parse("z", 1).unwrap();
    let rational = [(pt("(1:0:0)"), 2), (pt("(0:1:0)"), 2), (pt("(1:1:0)"), 2), (pt("(1:2:0)"), 2), (pt("(0:0:1)"), 2)];
    let with_pair = [(pt("(1:0:0)"), 2), (pt("(0:1:0)"), 2), (pt("(1:ζ2:0)"), 2), (pt("(1:1:1)"), 2)];
    for reps in [&rational[..], &with_pair[..]] {
        let cfg = SingularConfig::from_orbits_unchecked(Case::I, reps, "");
        assert_eq!(cfg.points.len(), 5);
        assert_eq!(cfg.max_collinear(), 4);
        line_splits_off(&cfg, &z);
    }
    let x = TernaryForm::parse("x", 1).unwrap();
    let rational = [(pt("(0:0:1)"), 3), (pt("(0:1:0)"), 2), (pt("(0:1:1)"), 2)];
    let pair = [(pt("(0:0:1)"), 3), (pt("(0:1:ζ2)"), 2)];
    for reps in [&rational[..], &pair[..]] {
        let cfg = SingularConfig::from_orbits_unchecked(Case::II, reps, "");
        assert_eq!(cfg.points.len(), 3);
        line_splits_off(&cfg, &x);
    }
}

/// Smooth-model counts against the quadric intersection in P^4, over GF(3) and GF(9).
pub fn p4_oracle(triples: usize) {
    let mut rng = rng(41);
    let (mut checked, mut tried) = (0, 0);
    while checked < triples {
        tried += 1;
        assert!(tried < 20 * triples, "too few usable triples");
        let (t, f, cfg) = random_good_triple(&mut rng);
        if !intersection_smooth_over(&t, 2) {
            continue;
        }
        for e in [1, 2] {
            let model = count_smooth_model(&f, &cfg, e).unwrap();
            let direct = count_quadric_intersection(&t, e) as i64;
            assert_eq!(model, direct, "e = {e}, φ = {}", t.render());
        }
        checked += 1;
    }
}

pub fn plane_counts(sextics: usize) {
    let mut rng = rng(5);
    for _ in 0..sextics {
        let f = random_sextic(&mut rng);
        if f.is_zero() {
            continue;
        }
        for e in 1..=3 {
            assert_eq!(count_plane_curve(&f, e), scan_count(&f, e), "{} over GF(3^{e})", f.render());
        }
    }
}

pub fn root_counts() {
    let mut rng = rng(6);
    for k in 1..=3 {
        let gf = tower().field(k);
        let ring = PolyRing::new(gf);
        for _ in 0..60 {
            let deg = rng.random_range(1..=7);
            let mut c: Vec<_> = (0..deg).map(|_| gf.random(&mut rng)).collect();
            c.push(gf.random_nonzero(&mut rng));
            let f = UniPoly::new(c.clone());
            for m in (1..=3).filter(|m| m % k == 0) {
                let big = tower().field(m);
                let lifted: Vec<_> = c.iter().map(|&a| tower().embed(a, k, m)).collect();
                let scan = big
                    .elements()
                    .filter(|&t| lifted.iter().rev().fold(Fe::ZERO, |acc, &a| big.mul(acc, t).add(a)).is_zero())
                    .count();
                assert_eq!(ring.count_roots(&f, m), scan);
            }
        }
    }
}

pub fn assert_functional_equation(w: &WeilPoly) {
    assert_eq!(w.coeffs.len(), 11);
    for i in 0..=5u32 {
        let lhs = &w.coeffs[i as usize];
        let rhs = BigInt::from(9).pow(5 - i) * &w.coeffs[10 - i as usize];
        assert_eq!(*lhs, rhs, "c_{i} of {}", w.expanded());
    }
}

/// Fixture curves plus `random` curves from quadric triples.
pub fn functional_equation(random: usize) {
    for fx in &curves().curves {
        let (_, w) = weil_polynomial(&fx.form(), &fx.singular_config()).unwrap();
        assert_functional_equation(&w);
    }
    let mut rng = rng(12);
    for _ in 0..random {
        let (_, f, cfg) = random_good_triple(&mut rng);
        let (_, w) = weil_polynomial(&f, &cfg).unwrap();
        assert_functional_equation(&w);
        assert!(w.roots_on_circle());
        assert_eq!(infer_config(&f, DEFAULT_SEED).unwrap().point_set(), cfg.point_set());
    }
}

/// Half random sextics, half reducible by construction.
pub fn irreducibility_oracle(sextics: usize) {
    let mut rng = rng(1000);
    let (mut reducible, mut irreducible) = (0, 0);
    for i in 0..sextics {
        let f = if i % 2 == 0 { random_sextic(&mut rng) } else { random_reducible(&mut rng) };
        if f.is_zero() {
            continue;
        }
        let fast = is_geometrically_irreducible(&f);
        assert_eq!(fast, slow_irreducible(&f), "{}", f.render());
        if i % 2 == 1 {
            assert!(!fast, "constructed product {} reported irreducible", f.render());
        }
        if fast {
            irreducible += 1
        } else {
            reducible += 1
        }
    }
    assert!(reducible >= sextics * 9 / 20 && irreducible >= sextics * 3 / 10, "{reducible} reducible, {irreducible} irreducible");
}
