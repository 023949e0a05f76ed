//! Dense univariate polynomials over a field [`Gf`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field_tower::{Fe, Gf};

/// Coefficients lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct UniPoly {
    pub coeffs: Vec<Fe>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Fe) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        UniPoly { coeffs: vec![Fe::ZERO, Fe::ONE] }
    }

    pub fn new(mut coeffs: Vec<Fe>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    /// Polynomial with GF(3) coefficients given as small integers.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Fe::from_i64(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Fe::ONE
    }
}

/// Arithmetic in GF(3^k)[x] for a fixed field.
#[derive(Clone, Copy, Debug)]
pub struct PolyRing<'a> {
    pub gf: &'a Gf,
}

impl<'a> PolyRing<'a> {
    pub fn new(gf: &'a Gf) -> Self {
        PolyRing { gf }
    }

    pub fn add(&self, a: &UniPoly, b: &UniPoly) -> UniPoly {
        let n = a.coeffs.len().max(b.coeffs.len());
        UniPoly::new((0..n).map(|i| a.coeff(i).add(b.coeff(i))).collect())
    }

    pub fn sub(&self, a: &UniPoly, b: &UniPoly) -> UniPoly {
        let n = a.coeffs.len().max(b.coeffs.len());
        UniPoly::new((0..n).map(|i| a.coeff(i).sub(b.coeff(i))).collect())
    }

    pub fn scale(&self, a: &UniPoly, c: Fe) -> UniPoly {
        UniPoly::new(a.coeffs.iter().map(|&x| self.gf.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &UniPoly, b: &UniPoly) -> UniPoly {
        if a.is_zero() || b.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Fe::ZERO; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(self.gf.mul(x, y));
            }
        }
        UniPoly::new(out)
    }

    pub fn monic(&self, a: &UniPoly) -> UniPoly {
        if a.is_zero() {
            return UniPoly::zero();
        }
        let inv = self.gf.inv(a.lead());
        self.scale(a, inv)
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn divrem(&self, a: &UniPoly, b: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!b.is_zero(), "polynomial division by zero");
        let db = b.deg();
        if a.coeffs.len() <= db {
            return (UniPoly::zero(), a.clone());
        }
        let inv = self.gf.inv(b.lead());
        let mut r = a.coeffs.clone();
        let mut q = vec![Fe::ZERO; r.len() - db];
        for top in (db..r.len()).rev() {
            let c = self.gf.mul(r[top], inv);
            if c.is_zero() {
                continue;
            }
            let shift = top - db;
            q[shift] = c;
            for (i, &bi) in b.coeffs.iter().enumerate() {
                r[shift + i] = r[shift + i].sub(self.gf.mul(c, bi));
            }
        }
        r.truncate(db);
        (UniPoly::new(q), UniPoly::new(r))
    }

    pub fn rem(&self, a: &UniPoly, b: &UniPoly) -> UniPoly {
        self.divrem(a, b).1
    }

    /// Exact quotient; debug-asserts a zero remainder.
    pub fn div_exact(&self, a: &UniPoly, b: &UniPoly) -> UniPoly {
        let (q, r) = self.divrem(a, b);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, a: &UniPoly, b: &UniPoly) -> UniPoly {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    pub fn derivative(&self, a: &UniPoly) -> UniPoly {
        UniPoly::new(
            a.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c.scale((i % 3) as u8))
                .collect(),
        )
    }

    pub fn eval(&self, a: &UniPoly, x: Fe) -> Fe {
        a.coeffs.iter().rev().fold(Fe::ZERO, |acc, &c| self.gf.mul(acc, x).add(c))
    }

    pub fn mulmod(&self, a: &UniPoly, b: &UniPoly, m: &UniPoly) -> UniPoly {
        self.rem(&self.mul(a, b), m)
    }

    pub fn powmod(&self, a: &UniPoly, mut e: u64, m: &UniPoly) -> UniPoly {
        let mut base = self.rem(a, m);
        let mut acc = self.rem(&UniPoly::constant(Fe::ONE), m);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulmod(&acc, &base, m);
            }
            base = self.mulmod(&base, &base, m);
            e >>= 1;
        }
        acc
    }

    /// `a^(3^times) mod m` by repeated cubing.
    pub fn frobenius_mod(&self, a: &UniPoly, times: usize, m: &UniPoly) -> UniPoly {
        let mut r = self.rem(a, m);
        for _ in 0..times {
            let sq = self.mulmod(&r, &r, m);
            r = self.mulmod(&sq, &r, m);
        }
        r
    }

    /// Number of distinct roots of `f` in GF(3^m): `deg gcd(x^(3^m) - x, f)`.
    pub fn count_roots(&self, f: &UniPoly, m: usize) -> usize {
        assert!(!f.is_zero(), "count_roots of the zero polynomial");
        if f.deg() == 0 {
            return 0;
        }
        let h = self.frobenius_mod(&UniPoly::x(), m, f);
        self.gcd(&self.sub(&h, &UniPoly::x()), f).deg()
    }

    /// Distinct roots of `f` lying in the coefficient field.
    pub fn roots(&self, f: &UniPoly) -> Vec<Fe> {
        let mut out: Vec<Fe> = self
            .factor(f)
            .into_iter()
            .filter(|(g, _)| g.deg() == 1)
            .map(|(g, _)| g.coeffs[0].neg())
            .collect();
        out.sort();
        out
    }

    fn cube_root_poly(&self, a: &UniPoly) -> UniPoly {
        UniPoly::new(
            a.coeffs
                .iter()
                .step_by(3)
                .map(|&c| self.gf.cube_root(c))
                .collect(),
        )
    }

    /// Squarefree decomposition of a nonzero polynomial: monic pairwise
    /// coprime squarefree factors with multiplicities, product = monic(f).
    pub fn squarefree(&self, f: &UniPoly) -> Vec<(UniPoly, usize)> {
        assert!(!f.is_zero(), "squarefree decomposition of zero");
        let f = self.monic(f);
        let mut out = Vec::new();
        if f.deg() == 0 {
            return out;
        }
        let d = self.derivative(&f);
        if d.is_zero() {
            for (g, m) in self.squarefree(&self.cube_root_poly(&f)) {
                out.push((g, 3 * m));
            }
            return out;
        }
        let mut c = self.gcd(&f, &d);
        let mut w = self.div_exact(&f, &c);
        let mut i = 1;
        while w.deg() > 0 {
            let y = self.gcd(&w, &c);
            let z = self.div_exact(&w, &y);
            if z.deg() > 0 {
                out.push((z, i));
            }
            i += 1;
            c = self.div_exact(&c, &y);
            w = y;
        }
        if c.deg() > 0 {
            for (g, m) in self.squarefree(&self.cube_root_poly(&c)) {
                out.push((g, 3 * m));
            }
        }
        out.sort_by_key(|(_, m)| *m);
        out
    }

    /// Distinct-degree factorization of a monic squarefree polynomial.
    pub fn distinct_degree(&self, f: &UniPoly) -> Vec<(UniPoly, usize)> {
        let k = self.gf.degree();
        let x = UniPoly::x();
        let mut out = Vec::new();
        let mut rest = self.monic(f);
        let mut h = x.clone();
        let mut i = 0;
        while rest.deg() >= 2 * (i + 1) {
            i += 1;
            h = self.frobenius_mod(&h, k, &rest);
            let g = self.gcd(&rest, &self.sub(&h, &x));
            if g.deg() > 0 {
                rest = self.div_exact(&rest, &g);
                h = self.rem(&h, &rest);
                out.push((g, i));
            }
        }
        if rest.deg() > 0 {
            let d = rest.deg();
            out.push((rest, d));
        }
        out
    }

    /// Splits a monic squarefree product of degree-`d` irreducibles.
    pub fn equal_degree<R: Rng>(&self, f: &UniPoly, d: usize, rng: &mut R) -> Vec<UniPoly> {
        if f.deg() == d {
            return vec![self.monic(f)];
        }
        let n = self.gf.degree() * d;
        loop {
            let a = UniPoly::new((0..f.deg()).map(|_| self.gf.random(rng)).collect());
            if a.deg() == 0 {
                continue;
            }
            // a^((3^n - 1)/2) = prod_{i<n} a^(3^i)
            let mut cur = self.rem(&a, f);
            let mut acc = cur.clone();
            for _ in 1..n {
                cur = self.frobenius_mod(&cur, 1, f);
                acc = self.mulmod(&acc, &cur, f);
            }
            let g = self.gcd(f, &self.sub(&acc, &UniPoly::constant(Fe::ONE)));
            if g.deg() > 0 && g.deg() < f.deg() {
                let h = self.div_exact(f, &g);
                let mut out = self.equal_degree(&g, d, rng);
                out.extend(self.equal_degree(&h, d, rng));
                return out;
            }
        }
    }

    /// Complete factorization into monic irreducibles with multiplicities,
    /// sorted by (degree, coefficients). Uses a fixed seed.
    pub fn factor(&self, f: &UniPoly) -> Vec<(UniPoly, usize)> {
        self.factor_with_rng(f, &mut ChaCha8Rng::seed_from_u64(0x6735))
    }

    pub fn factor_with_rng<R: Rng>(&self, f: &UniPoly, rng: &mut R) -> Vec<(UniPoly, usize)> {
        let mut out = Vec::new();
        for (s, m) in self.squarefree(f) {
            for (g, d) in self.distinct_degree(&s) {
                for h in self.equal_degree(&g, d, rng) {
                    out.push((h, m));
                }
            }
        }
        out.sort_by(|(a, _), (b, _)| (a.deg(), &a.coeffs).cmp(&(b.deg(), &b.coeffs)));
        out
    }

    /// True iff `f` is irreducible over the coefficient field.
    pub fn is_irreducible(&self, f: &UniPoly) -> bool {
        let fac = self.factor(f);
        fac.len() == 1 && fac[0].1 == 1
    }

    /// Product of the radical's irreducible factors.
    pub fn radical(&self, f: &UniPoly) -> UniPoly {
        self.squarefree(f)
            .iter()
            .fold(UniPoly::constant(Fe::ONE), |acc, (g, _)| self.mul(&acc, g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_tower::tower;
    use proptest::prelude::{any, proptest, ProptestConfig};

    fn brute_roots(gf: &Gf, ring: &PolyRing, f: &UniPoly, m: usize) -> usize {
        // f over GF(3^k) with k | m: scan GF(3^m) after embedding the coefficients
        let k = gf.degree();
        let big = tower().field(m);
        let fm: Vec<Fe> = f.coeffs.iter().map(|&c| tower().embed(c, k, m)).collect();
        let _ = ring;
        big.elements()
            .filter(|&x| fm.iter().rev().fold(Fe::ZERO, |acc, &c| big.mul(acc, x).add(c)).is_zero())
            .count()
    }

    #[test]
    fn gcd_examples() {
        let gf = tower().field(1);
        let r = PolyRing::new(gf);
        let f = UniPoly::from_ints(&[-1, 0, 1]);
        assert_eq!(r.gcd(&f, &UniPoly::from_ints(&[-1, 1])), UniPoly::from_ints(&[2, 1]));
        // (x-1)^2 (x-2) and its derivative
        let g = r.mul(&r.mul(&UniPoly::from_ints(&[-1, 1]), &UniPoly::from_ints(&[-1, 1])), &UniPoly::from_ints(&[-2, 1]));
        assert_eq!(r.gcd(&g, &r.derivative(&g)), UniPoly::from_ints(&[2, 1]));
        assert_eq!(r.gcd(&r.scale(&g, Fe::TWO), &UniPoly::zero()), g);
    }

    #[test]
    fn count_roots_examples() {
        let g1 = tower().field(1);
        let r1 = PolyRing::new(g1);
        let x2p1 = UniPoly::from_ints(&[1, 0, 1]);
        assert_eq!(r1.count_roots(&x2p1, 1), 0);
        assert_eq!(r1.count_roots(&x2p1, 2), 2);
        let g2 = tower().field(2);
        let r2 = PolyRing::new(g2);
        let mut c = vec![0i64; 10];
        c[9] = 1;
        c[1] = -1;
        assert_eq!(r2.count_roots(&UniPoly::from_ints(&c), 2), 9);
    }

    #[test]
    fn factor_examples() {
        let r = PolyRing::new(tower().field(1));
        let f = UniPoly::from_ints(&[0, -1, 1]);
        assert_eq!(
            r.factor(&f),
            vec![(UniPoly::from_ints(&[0, 1]), 1), (UniPoly::from_ints(&[2, 1]), 1)]
        );
        let z = UniPoly::from_ints(&[2, 2, 1]);
        assert_eq!(r.factor(&z), vec![(z.clone(), 1)]);
        // x^9 - x^3 = x^3 (x - 1)^3 (x + 1)^3 needs the cube-root step
        let mut c = vec![0i64; 10];
        c[9] = 1;
        c[3] = -1;
        let fac = r.factor(&UniPoly::from_ints(&c));
        assert_eq!(fac.len(), 3);
        assert!(fac.iter().all(|(g, m)| g.deg() == 1 && *m == 3));
    }

    #[test]
    fn count_roots_matches_field_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for k in 1..=3 {
            let gf = tower().field(k);
            let r = PolyRing::new(gf);
            for _ in 0..40 {
                let deg = rng.random_range(1..=6);
                let mut c: Vec<Fe> = (0..deg).map(|_| gf.random(&mut rng)).collect();
                c.push(gf.random_nonzero(&mut rng));
                let f = UniPoly::new(c);
                for m in (1..=3).filter(|m| m % k == 0) {
                    assert_eq!(r.count_roots(&f, m), brute_roots(gf, &r, &f, m));
                }
            }
        }
    }

    fn check_factorization(r: &PolyRing, f: &UniPoly) {
        let fac = r.factor(f);
        let mut prod = UniPoly::constant(Fe::ONE);
        for (g, m) in &fac {
            assert_eq!(g.lead(), Fe::ONE);
            // irreducible of degree d: no roots over any GF(q^j), j < d... use DDF
            let dd = r.distinct_degree(g);
            assert_eq!(dd.len(), 1);
            assert_eq!(dd[0].1, g.deg());
            for _ in 0..*m {
                prod = r.mul(&prod, g);
            }
        }
        for (i, (a, _)) in fac.iter().enumerate() {
            for (b, _) in &fac[i + 1..] {
                assert!(r.gcd(a, b).is_one());
            }
        }
        assert_eq!(prod, r.monic(f));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn factorization_reconstructs(seed in any::<u64>(), k in 1usize..=3) {
            let gf = tower().field(k);
            let r = PolyRing::new(gf);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut c: Vec<Fe> = (0..8).map(|_| gf.random(&mut rng)).collect();
            c.push(Fe::ONE);
            let mut f = UniPoly::new(c);
            // bias towards repeated factors
            if seed % 3 == 0 {
                let g = UniPoly::new(vec![gf.random(&mut rng), gf.random(&mut rng), Fe::ONE]);
                f = r.mul(&f, &r.mul(&g, &r.mul(&g, &g)));
            }
            check_factorization(&r, &f);
        }
    }

    #[test]
    fn random_degree_eight_over_gf9() {
        let gf = tower().field(2);
        let r = PolyRing::new(gf);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..50 {
            let mut c: Vec<Fe> = (0..8).map(|_| gf.random(&mut rng)).collect();
            c.push(Fe::ONE);
            check_factorization(&r, &UniPoly::new(c));
        }
    }

    #[test]
    fn factors_over_a_large_ad_hoc_field() {
        // GF(3^13): x^13 + 2x + 1
        let gf = Gf::new(&[1, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]).unwrap();
        let r = PolyRing::new(&gf);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut c: Vec<Fe> = (0..6).map(|_| gf.random(&mut rng)).collect();
        c.push(Fe::ONE);
        check_factorization(&r, &UniPoly::new(c));
    }
}
