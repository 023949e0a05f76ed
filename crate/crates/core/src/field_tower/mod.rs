//! Arithmetic in GF(3^k).
//!
//! An element is stored as two bit planes over the power basis of the
//! field's modulus: bit `i` of `ones` is set when the coefficient of `x^i`
//! is 1, bit `i` of `twos` when it is 2. Addition is a handful of word
//! operations; multiplication goes through discrete-log tables for the
//! tower fields (k <= 10) and through shift-and-add otherwise.

mod text;
mod tower;

pub use text::{parse_element, render_element};
pub use tower::{tower, FieldElement, FieldOp, FieldTower, CONWAY_MODULI, MAX_TOWER_DEGREE};

use std::fmt;

use rand::Rng;
use thiserror::Error;

/// Largest extension degree representable in the packed planes.
pub const MAX_DEGREE: usize = 32;

/// Largest field order for which log tables are built.
const TABLE_LIMIT: u64 = 59_049;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus of degree {degree} is reducible over GF(3)")]
    Reducible { degree: usize },
    #[error("modulus {0:?} is not monic or has unsupported degree")]
    BadModulus(Vec<u8>),
    #[error("modulus of degree {degree} is not compatible with the lower tower levels")]
    Incompatible { degree: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in GF(3^{0}) and GF(3^{1}); embed them first")]
    DegreeMismatch(usize, usize),
    #[error("degree {from} does not divide degree {to}")]
    NotDivisible { from: usize, to: usize },
    #[error("degree {0} is not registered in the tower")]
    Unregistered(usize),
    #[error("cannot parse field element {0:?}")]
    Parse(String),
}

/// Packed element of some GF(3^k); meaningless without its [`Gf`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fe {
    ones: u32,
    twos: u32,
}

impl Fe {
    pub const ZERO: Fe = Fe { ones: 0, twos: 0 };
    pub const ONE: Fe = Fe { ones: 1, twos: 0 };
    pub const TWO: Fe = Fe { ones: 0, twos: 1 };

    #[inline]
    pub fn is_zero(self) -> bool {
        (self.ones | self.twos) == 0
    }

    /// True when the element lies in the prime field (constant coefficient only).
    #[inline]
    pub fn in_prime_field(self) -> bool {
        ((self.ones | self.twos) >> 1) == 0
    }

    /// GF(3) residue from an integer.
    #[inline]
    pub fn from_i64(c: i64) -> Fe {
        match c.rem_euclid(3) {
            0 => Fe::ZERO,
            1 => Fe::ONE,
            _ => Fe::TWO,
        }
    }

    /// Value of a prime-field element as 0, 1 or 2. Panics otherwise.
    #[inline]
    pub fn prime_value(self) -> u8 {
        assert!(self.in_prime_field(), "element is not in GF(3)");
        (self.ones as u8) | ((self.twos as u8) << 1)
    }

    #[inline]
    pub fn digit(self, i: usize) -> u8 {
        (((self.ones >> i) & 1) | (((self.twos >> i) & 1) << 1)) as u8
    }

    pub fn raw(self) -> (u32, u32) {
        (self.ones, self.twos)
    }

    pub fn from_raw(ones: u32, twos: u32) -> Fe {
        debug_assert_eq!(ones & twos, 0);
        Fe { ones, twos }
    }

    #[inline]
    pub fn neg(self) -> Fe {
        Fe { ones: self.twos, twos: self.ones }
    }

    #[inline]
    pub fn add(self, b: Fe) -> Fe {
        let a_zero = !(self.ones | self.twos);
        let b_zero = !(b.ones | b.twos);
        Fe {
            ones: (self.ones & b_zero) | (b.ones & a_zero) | (self.twos & b.twos),
            twos: (self.twos & b_zero) | (b.twos & a_zero) | (self.ones & b.ones),
        }
    }

    #[inline]
    pub fn sub(self, b: Fe) -> Fe {
        self.add(b.neg())
    }

    /// Multiply by a GF(3) scalar given as 0, 1 or 2.
    #[inline]
    pub fn scale(self, c: u8) -> Fe {
        match c % 3 {
            0 => Fe::ZERO,
            1 => self,
            _ => self.neg(),
        }
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fe[")?;
        let width = 32 - (self.ones | self.twos).leading_zeros() as usize;
        for i in 0..width.max(1) {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.digit(i))?;
        }
        write!(f, "]")
    }
}

struct LogTables {
    base3: Vec<u32>,
    log: Vec<u32>,
    // exp has length 2(q-1) so that log sums need no reduction
    exp: Vec<Fe>,
}

/// The field GF(3)[x]/(modulus).
pub struct Gf {
    degree: usize,
    modulus: Vec<u8>,
    order: u64,
    mask: u32,
    red: Fe,
    generator: Fe,
    tables: Option<LogTables>,
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Gf")
            .field("degree", &self.degree)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl Gf {
    /// Field defined by a monic modulus (coefficients low to high). The caller
    /// is responsible for irreducibility; [`FieldTower`] verifies it.
    pub fn new(modulus: &[u8]) -> Result<Gf, FieldError> {
        let degree = modulus.len().saturating_sub(1);
        if degree == 0 || degree > MAX_DEGREE || modulus[degree] % 3 != 1 {
            return Err(FieldError::BadModulus(modulus.to_vec()));
        }
        let modulus: Vec<u8> = modulus.iter().map(|c| c % 3).collect();
        let mask = if degree == 32 { u32::MAX } else { (1u32 << degree) - 1 };
        // x^k = -(m_0 + ... + m_{k-1} x^{k-1})
        let mut red = Fe::ZERO;
        for (i, &c) in modulus[..degree].iter().enumerate() {
            red = red.add(Fe::from_digit_at(c, i).neg());
        }
        let order = 3u64.pow(degree as u32);
        let mut gf = Gf {
            degree,
            modulus,
            order,
            mask,
            red,
            generator: Fe::ZERO,
            tables: None,
        };
        if order <= TABLE_LIMIT {
            gf.build_tables();
        } else {
            gf.generator = gf.gen();
        }
        Ok(gf)
    }

    fn build_tables(&mut self) {
        let q1 = (self.order - 1) as usize;
        let generator = self.find_generator();
        let k = self.degree;
        let mut base3 = vec![0u32; 1 << k];
        for bits in 0..(1usize << k) {
            let mut v = 0u32;
            let mut p = 1u32;
            for i in 0..k {
                if bits >> i & 1 == 1 {
                    v += p;
                }
                p *= 3;
            }
            base3[bits] = v;
        }
        let mut log = vec![u32::MAX; self.order as usize];
        let mut exp = Vec::with_capacity(2 * q1);
        let mut cur = Fe::ONE;
        for i in 0..q1 {
            exp.push(cur);
            let idx = base3[cur.ones as usize] + 2 * base3[cur.twos as usize];
            log[idx as usize] = i as u32;
            cur = self.mul_slow(cur, generator);
        }
        debug_assert_eq!(cur, Fe::ONE);
        for i in 0..q1 {
            let e = exp[i];
            exp.push(e);
        }
        self.generator = generator;
        self.tables = Some(LogTables { base3, log, exp });
    }

    fn find_generator(&self) -> Fe {
        let q1 = self.order - 1;
        let primes = prime_factors(q1);
        let is_primitive = |g: Fe| primes.iter().all(|&r| self.pow_slow(g, q1 / r) != Fe::ONE);
        let x = if self.degree == 1 { Fe::TWO } else { Fe { ones: 2, twos: 0 } };
        if is_primitive(x) {
            return x;
        }
        (1..self.order)
            .map(|n| self.from_index(n))
            .find(|&g| is_primitive(g))
            .expect("a finite field has a primitive element")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    /// The primitive element whose powers index the log tables (the class of
    /// `x` for Conway moduli).
    pub fn generator(&self) -> Fe {
        self.generator
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    /// The class of `x` in GF(3)[x]/(modulus).
    pub fn gen(&self) -> Fe {
        if self.degree == 1 {
            self.from_i64(-(self.modulus[0] as i64))
        } else {
            Fe { ones: 2, twos: 0 }
        }
    }

    #[inline]
    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    #[inline]
    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    #[inline]
    pub fn from_i64(&self, c: i64) -> Fe {
        Fe::from_i64(c)
    }

    /// Element with the given power-basis coefficients (low to high).
    pub fn from_coeffs(&self, coeffs: &[u8]) -> Fe {
        assert!(coeffs.len() <= self.degree, "too many coefficients for GF(3^{})", self.degree);
        let mut a = Fe::ZERO;
        for (i, &c) in coeffs.iter().enumerate() {
            a = a.add(Fe::from_digit_at(c, i));
        }
        a
    }

    pub fn coeffs(&self, a: Fe) -> Vec<u8> {
        (0..self.degree).map(|i| a.digit(i)).collect()
    }

    /// Base-3 integer of the coefficient vector, in `0..order`.
    #[inline]
    pub fn index(&self, a: Fe) -> u64 {
        match &self.tables {
            Some(t) => (t.base3[a.ones as usize] + 2 * t.base3[a.twos as usize]) as u64,
            None => {
                let mut v = 0u64;
                for i in (0..self.degree).rev() {
                    v = 3 * v + a.digit(i) as u64;
                }
                v
            }
        }
    }

    pub fn from_index(&self, mut n: u64) -> Fe {
        debug_assert!(n < self.order);
        let mut a = Fe::ZERO;
        let mut i = 0;
        while n > 0 {
            match n % 3 {
                1 => a.ones |= 1 << i,
                2 => a.twos |= 1 << i,
                _ => {}
            }
            n /= 3;
            i += 1;
        }
        a
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.order).map(move |n| self.from_index(n))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        self.from_index(rng.random_range(0..self.order))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        self.from_index(rng.random_range(1..self.order))
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        a.add(b)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        a.sub(b)
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        a.neg()
    }

    #[inline]
    fn mul_x(&self, a: Fe) -> Fe {
        let top = self.degree - 1;
        let t1 = (a.ones >> top) & 1;
        let t2 = (a.twos >> top) & 1;
        let shifted = Fe {
            ones: (a.ones << 1) & self.mask,
            twos: (a.twos << 1) & self.mask,
        };
        if t1 != 0 {
            shifted.add(self.red)
        } else if t2 != 0 {
            shifted.sub(self.red)
        } else {
            shifted
        }
    }

    fn mul_slow(&self, a: Fe, b: Fe) -> Fe {
        let mut acc = Fe::ZERO;
        for i in (0..self.degree).rev() {
            acc = self.mul_x(acc);
            match a.digit(i) {
                1 => acc = acc.add(b),
                2 => acc = acc.sub(b),
                _ => {}
            }
        }
        acc
    }

    fn pow_slow(&self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        match &self.tables {
            Some(t) => {
                if a.is_zero() || b.is_zero() {
                    return Fe::ZERO;
                }
                let la = t.log[(t.base3[a.ones as usize] + 2 * t.base3[a.twos as usize]) as usize];
                let lb = t.log[(t.base3[b.ones as usize] + 2 * t.base3[b.twos as usize]) as usize];
                t.exp[(la + lb) as usize]
            }
            None => self.mul_slow(a, b),
        }
    }

    #[inline]
    pub fn square(&self, a: Fe) -> Fe {
        self.mul(a, a)
    }

    /// Discrete log with respect to [`Gf::generator`]; `None` for zero.
    pub fn log(&self, a: Fe) -> Option<u64> {
        if a.is_zero() {
            return None;
        }
        match &self.tables {
            Some(t) => Some(t.log[(t.base3[a.ones as usize] + 2 * t.base3[a.twos as usize]) as usize] as u64),
            None => {
                // only used for rendering; brute force is fine for the sizes that reach here
                let mut cur = Fe::ONE;
                for i in 0..self.order - 1 {
                    if cur == a {
                        return Some(i);
                    }
                    cur = self.mul(cur, self.generator);
                }
                None
            }
        }
    }

    /// `generator^e`.
    pub fn exp(&self, e: u64) -> Fe {
        let q1 = self.order - 1;
        match &self.tables {
            Some(t) => t.exp[(e % q1) as usize],
            None => self.pow_slow(self.generator, e % q1),
        }
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            return Fe::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let q1 = self.order - 1;
                let la = t.log[(t.base3[a.ones as usize] + 2 * t.base3[a.twos as usize]) as usize] as u64;
                t.exp[((la as u128 * e as u128) % q1 as u128) as usize]
            }
            None => self.pow_slow(a, e),
        }
    }

    pub fn try_inv(&self, a: Fe) -> Option<Fe> {
        if a.is_zero() {
            return None;
        }
        Some(match &self.tables {
            Some(t) => {
                let q1 = (self.order - 1) as u32;
                let la = t.log[(t.base3[a.ones as usize] + 2 * t.base3[a.twos as usize]) as usize];
                t.exp[((q1 - la) % q1) as usize]
            }
            None => self.pow_slow(a, self.order - 2),
        })
    }

    /// Inverse of a nonzero element.
    #[inline]
    pub fn inv(&self, a: Fe) -> Fe {
        self.try_inv(a).expect("inverse of zero")
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe, FieldError> {
        let inv = self.try_inv(b).ok_or(FieldError::DivisionByZero)?;
        Ok(self.mul(a, inv))
    }

    /// `a^(3^times)`.
    pub fn frobenius(&self, a: Fe, times: usize) -> Fe {
        let t = times % self.degree;
        if t == 0 || a.in_prime_field() {
            return a;
        }
        match &self.tables {
            Some(_) => self.pow(a, 3u64.pow(t as u32)),
            None => {
                let mut r = a;
                for _ in 0..t {
                    r = self.mul(self.mul(r, r), r);
                }
                r
            }
        }
    }

    pub fn is_square(&self, a: Fe) -> bool {
        if a.is_zero() {
            return true;
        }
        if self.tables.is_some() {
            self.log(a).is_some_and(|l| l % 2 == 0)
        } else {
            self.pow(a, (self.order - 1) / 2) == Fe::ONE
        }
    }

    /// A square root of a square, `None` for non-squares.
    pub fn sqrt(&self, a: Fe) -> Option<Fe> {
        if a.is_zero() {
            return Some(Fe::ZERO);
        }
        let l = self.log(a)?;
        if l % 2 != 0 {
            return None;
        }
        Some(self.exp(l / 2))
    }

    /// The cube root, i.e. the inverse Frobenius.
    pub fn cube_root(&self, a: Fe) -> Fe {
        self.frobenius(a, self.degree - 1)
    }

    /// Smallest `d` with `frobenius(a, d) == a`; the degree of `a` over GF(3).
    pub fn element_degree(&self, a: Fe) -> usize {
        (1..=self.degree)
            .filter(|d| self.degree % d == 0)
            .find(|&d| self.frobenius(a, d) == a)
            .unwrap_or(self.degree)
    }
}

impl Fe {
    #[inline]
    fn from_digit_at(c: u8, i: usize) -> Fe {
        match c % 3 {
            0 => Fe::ZERO,
            1 => Fe { ones: 1 << i, twos: 0 },
            _ => Fe { ones: 0, twos: 1 << i },
        }
    }
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn packed_addition_matches_residues() {
        for a in 0..3u8 {
            for b in 0..3u8 {
                let s = Fe::from_i64(a as i64).add(Fe::from_i64(b as i64));
                assert_eq!(s.prime_value(), (a + b) % 3);
                let d = Fe::from_i64(a as i64).sub(Fe::from_i64(b as i64));
                assert_eq!(d.prime_value(), (3 + a - b) % 3);
            }
        }
    }

    #[test]
    fn table_and_schoolbook_multiplication_agree() {
        let gf = Gf::new(&[2, 1, 0, 0, 1]).unwrap(); // x^4 + x + 2, primitive
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let a = gf.random(&mut rng);
            let b = gf.random(&mut rng);
            assert_eq!(gf.mul(a, b), gf.mul_slow(a, b));
        }
    }

    #[test]
    fn large_field_without_tables() {
        // x^13 + 2x + 1 is irreducible over GF(3)
        let gf = Gf::new(&[1, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]).unwrap();
        assert!(!gf.has_tables());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = gf.random_nonzero(&mut rng);
            assert_eq!(gf.mul(a, gf.inv(a)), Fe::ONE);
            assert_eq!(gf.frobenius(a, 13), a);
        }
    }

    #[test]
    fn index_round_trip() {
        let gf = Gf::new(&[2, 2, 1]).unwrap();
        for n in 0..9 {
            assert_eq!(gf.index(gf.from_index(n)), n);
        }
    }
}
