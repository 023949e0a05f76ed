use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use super::{prime_factors, Fe, FieldError, Gf};

pub const MAX_TOWER_DEGREE: usize = 10;

/// Conway polynomials C_{3,k} for k = 1..=10, coefficients low to high.
pub const CONWAY_MODULI: [&[u8]; MAX_TOWER_DEGREE] = [
    &[1, 1],
    &[2, 2, 1],
    &[1, 2, 0, 1],
    &[2, 0, 0, 2, 1],
    &[1, 2, 0, 0, 0, 1],
    &[2, 2, 1, 0, 2, 0, 1],
    &[1, 0, 2, 0, 0, 0, 0, 1],
    &[2, 2, 2, 0, 1, 2, 0, 0, 1],
    &[1, 1, 2, 2, 0, 0, 0, 0, 0, 1],
    &[2, 1, 0, 0, 2, 2, 2, 0, 0, 0, 1],
];

/// GF(3^k) for k up to some bound, with the Conway-compatible embeddings
/// between all levels `a | b`.
pub struct FieldTower {
    fields: Vec<Gf>,
    // images of x^0..x^{a-1} of GF(3^a) inside GF(3^b)
    embeddings: BTreeMap<(usize, usize), Vec<Fe>>,
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldTower").field("max_degree", &self.max_degree()).finish()
    }
}

static TOWER: OnceLock<FieldTower> = OnceLock::new();

/// Shared tower up to degree 10, built and verified on first use.
pub fn tower() -> &'static FieldTower {
    TOWER.get_or_init(|| FieldTower::new(MAX_TOWER_DEGREE).expect("Conway table verifies"))
}

impl FieldTower {
    /// Registers the Conway moduli for every degree up to `max_degree`.
    pub fn new(max_degree: usize) -> Result<FieldTower, FieldError> {
        if max_degree == 0 || max_degree > MAX_TOWER_DEGREE {
            return Err(FieldError::Unregistered(max_degree));
        }
        Self::with_moduli(&CONWAY_MODULI[..max_degree])
    }

    /// Builds a tower from explicit moduli (index `k-1` holds the degree-`k`
    /// modulus). Each is checked for irreducibility and primitivity, and each
    /// must be norm-compatible with the lower levels.
    pub fn with_moduli(moduli: &[&[u8]]) -> Result<FieldTower, FieldError> {
        let mut fields = Vec::with_capacity(moduli.len());
        for (i, m) in moduli.iter().enumerate() {
            let k = i + 1;
            if m.len() != k + 1 {
                return Err(FieldError::BadModulus(m.to_vec()));
            }
            if !gf3poly::is_irreducible(m) {
                return Err(FieldError::Reducible { degree: k });
            }
            let gf = Gf::new(m)?;
            if gf.generator() != gf.gen() {
                // not primitive, so not a Conway polynomial
                return Err(FieldError::Incompatible { degree: k });
            }
            fields.push(gf);
        }
        let mut embeddings = BTreeMap::new();
        for b in 1..=fields.len() {
            for a in (1..=b).filter(|a| b % a == 0) {
                let big = &fields[b - 1];
                let small = &fields[a - 1];
                let r = (big.order() - 1) / (small.order() - 1);
                let beta = big.exp(r);
                // compatibility: beta must be a root of the degree-a modulus
                let mut acc = Fe::ZERO;
                for &c in small.modulus().iter().rev() {
                    acc = big.mul(acc, beta).add(Fe::from_i64(c as i64));
                }
                if !acc.is_zero() {
                    return Err(FieldError::Incompatible { degree: b });
                }
                let mut images = Vec::with_capacity(a);
                let mut p = Fe::ONE;
                for _ in 0..a {
                    images.push(p);
                    p = big.mul(p, beta);
                }
                embeddings.insert((a, b), images);
            }
        }
        Ok(FieldTower { fields, embeddings })
    }

    pub fn max_degree(&self) -> usize {
        self.fields.len()
    }

    /// GF(3^k). Panics when `k` is not registered.
    pub fn field(&self, k: usize) -> &Gf {
        assert!(k >= 1 && k <= self.fields.len(), "GF(3^{k}) is not in the tower");
        &self.fields[k - 1]
    }

    pub fn try_field(&self, k: usize) -> Result<&Gf, FieldError> {
        if k >= 1 && k <= self.fields.len() {
            Ok(&self.fields[k - 1])
        } else {
            Err(FieldError::Unregistered(k))
        }
    }

    /// Image of `a` in GF(3^to) for `a` in GF(3^from).
    pub fn embed(&self, a: Fe, from: usize, to: usize) -> Fe {
        if from == to || a.in_prime_field() {
            return a;
        }
        let images = self
            .embeddings
            .get(&(from, to))
            .unwrap_or_else(|| panic!("no embedding GF(3^{from}) -> GF(3^{to})"));
        let mut acc = Fe::ZERO;
        for (i, &img) in images.iter().enumerate() {
            acc = acc.add(img.scale(a.digit(i)));
        }
        acc
    }

    pub fn try_embed(&self, a: Fe, from: usize, to: usize) -> Result<Fe, FieldError> {
        if to % from != 0 {
            return Err(FieldError::NotDivisible { from, to });
        }
        self.try_field(to)?;
        Ok(self.embed(a, from, to))
    }

    /// Preimage of `a` in GF(3^to) when `a` in GF(3^from) lies in that subfield.
    pub fn descend(&self, a: Fe, from: usize, to: usize) -> Option<Fe> {
        if from % to != 0 {
            return None;
        }
        if a.is_zero() || from == to {
            return Some(a);
        }
        let big = self.field(from);
        let small = self.field(to);
        let r = (big.order() - 1) / (small.order() - 1);
        let l = big.log(a)?;
        (l % r == 0).then(|| small.exp(l / r))
    }

    /// Smallest degree `d | from` such that `a` lies in GF(3^d).
    pub fn minimal_degree(&self, a: Fe, from: usize) -> usize {
        self.field(from).element_degree(a)
    }

    /// Plain-text description of the moduli, one line per degree.
    pub fn manifest(&self) -> String {
        let mut out = String::from("# GF(3) tower moduli, coefficients low to high\n");
        for gf in &self.fields {
            let coeffs: Vec<String> = gf.modulus().iter().map(|c| c.to_string()).collect();
            out.push_str(&format!("3^{}: {}\n", gf.degree(), coeffs.join(" ")));
        }
        out
    }

    /// Inverse of [`FieldTower::manifest`]; re-verifies every modulus.
    pub fn from_manifest(text: &str) -> Result<FieldTower, FieldError> {
        let mut moduli: Vec<Vec<u8>> = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (head, body) = line.split_once(':').ok_or_else(|| FieldError::Parse(line.into()))?;
            let k: usize = head
                .trim()
                .strip_prefix("3^")
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| FieldError::Parse(line.into()))?;
            if k != moduli.len() + 1 {
                return Err(FieldError::Parse(line.into()));
            }
            let coeffs = body
                .split_whitespace()
                .map(|t| t.parse::<u8>().map_err(|_| FieldError::Parse(line.into())))
                .collect::<Result<Vec<_>, _>>()?;
            moduli.push(coeffs);
        }
        let refs: Vec<&[u8]> = moduli.iter().map(Vec::as_slice).collect();
        Self::with_moduli(&refs)
    }

    /// Checked arithmetic on degree-tagged elements.
    pub fn arith(&self, a: FieldElement, b: FieldElement, op: FieldOp) -> Result<FieldElement, FieldError> {
        let k = a.degree as usize;
        let gf = self.try_field(k)?;
        if let FieldOp::Pow(e) = op {
            return Ok(FieldElement::new(k, gf.pow(a.value, e)));
        }
        if a.degree != b.degree {
            return Err(FieldError::DegreeMismatch(k, b.degree as usize));
        }
        let value = match op {
            FieldOp::Add => gf.add(a.value, b.value),
            FieldOp::Sub => gf.sub(a.value, b.value),
            FieldOp::Mul => gf.mul(a.value, b.value),
            FieldOp::Div => gf.div(a.value, b.value)?,
            FieldOp::Pow(_) => unreachable!(),
        };
        Ok(FieldElement::new(k, value))
    }

    pub fn frobenius(&self, a: FieldElement, times: usize) -> FieldElement {
        let gf = self.field(a.degree as usize);
        FieldElement::new(a.degree as usize, gf.frobenius(a.value, times))
    }

    pub fn embed_element(&self, a: FieldElement, target_degree: usize) -> Result<FieldElement, FieldError> {
        let v = self.try_embed(a.value, a.degree as usize, target_degree)?;
        Ok(FieldElement::new(target_degree, v))
    }

    pub fn is_square(&self, a: FieldElement) -> bool {
        self.field(a.degree as usize).is_square(a.value)
    }
}

/// An element tagged with the degree of the field it lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    pub degree: u8,
    pub value: Fe,
}

impl FieldElement {
    pub fn new(degree: usize, value: Fe) -> Self {
        FieldElement { degree: degree as u8, value }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow(u64),
}

/// Minimal dense GF(3)[x] helpers used to vet moduli before any field exists.
pub(crate) mod gf3poly {
    fn trim(mut a: Vec<u8>) -> Vec<u8> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv3(c: u8) -> u8 {
        // 1 -> 1, 2 -> 2
        c
    }

    pub(crate) fn rem(a: &[u8], m: &[u8]) -> Vec<u8> {
        let mut r = trim(a.to_vec());
        let m = trim(m.to_vec());
        let dm = m.len() - 1;
        let lc_inv = inv3(m[dm]);
        while r.len() > dm {
            let top = r.len() - 1;
            let c = (r[top] * lc_inv) % 3;
            let shift = top - dm;
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + 3 * 3 - c * mi % 3) % 3;
            }
            r = trim(r);
        }
        r
    }

    pub(crate) fn mulmod(a: &[u8], b: &[u8], m: &[u8]) -> Vec<u8> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut p = vec![0u8; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                p[i + j] = (p[i + j] + x * y) % 3;
            }
        }
        rem(&p, m)
    }

    pub(crate) fn powmod(a: &[u8], mut e: u64, m: &[u8]) -> Vec<u8> {
        let mut base = rem(a, m);
        let mut acc = vec![1u8];
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &base, m);
            }
            base = mulmod(&base, &base, m);
            e >>= 1;
        }
        acc
    }

    pub(crate) fn gcd(a: &[u8], b: &[u8]) -> Vec<u8> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b);
            a = b;
            b = r;
        }
        a
    }

    fn sub(a: &[u8], b: &[u8]) -> Vec<u8> {
        let n = a.len().max(b.len());
        let r = (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + 3 - b.get(i).copied().unwrap_or(0)) % 3)
            .collect();
        trim(r)
    }

    /// Rabin's test: x^(3^k) = x mod f and gcd(x^(3^(k/r)) - x, f) = 1 for primes r | k.
    pub(crate) fn is_irreducible(f: &[u8]) -> bool {
        let f = trim(f.to_vec());
        let k = f.len() - 1;
        if k == 0 {
            return false;
        }
        if k == 1 {
            return true;
        }
        let x = vec![0u8, 1];
        let frob = |t: usize| powmod(&x, 3u64.pow(t as u32), &f);
        if sub(&frob(k), &x) != Vec::<u8>::new() {
            return false;
        }
        super::prime_factors(k as u64).into_iter().all(|r| {
            let g = gcd(&f, &sub(&frob(k / r as usize), &x));
            g.len() == 1
        })
    }
}
