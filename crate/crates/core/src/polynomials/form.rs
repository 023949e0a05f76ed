//! Sparse homogeneous forms over the tower fields.

use std::collections::BTreeMap;
use std::fmt;

use crate::field_tower::{parse_element, render_element, tower, Fe, FieldElement, Gf};

use super::PolyError;

/// Homogeneous form of a fixed degree in `N` variables over GF(3^k).
///
/// Terms are keyed by exponent arrays; the map order (lexicographic on the
/// exponents) is graded lex with `x > y > z` because every key has the same
/// total degree, so the leading monomial is the last key.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Form<const N: usize> {
    field_degree: usize,
    degree: usize,
    terms: BTreeMap<[u8; N], Fe>,
}

pub type TernaryForm = Form<3>;
pub type QuinaryQuadric = Form<5>;

/// Variable names used for text I/O.
pub trait VarNames {
    const NAMES: &'static [&'static str];
}

impl VarNames for Form<3> {
    const NAMES: &'static [&'static str] = &["x", "y", "z"];
}

impl VarNames for Form<5> {
    const NAMES: &'static [&'static str] = &["x0", "x1", "x2", "x3", "x4"];
}

/// All exponent arrays of total degree `d` in `N` variables, grlex descending.
pub fn monomials<const N: usize>(d: usize) -> Vec<[u8; N]> {
    fn rec<const N: usize>(i: usize, left: usize, cur: &mut [u8; N], out: &mut Vec<[u8; N]>) {
        if i == N - 1 {
            cur[i] = left as u8;
            out.push(*cur);
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e as u8;
            rec(i + 1, left - e, cur, out);
        }
    }
    let mut out = Vec::new();
    rec(0, d, &mut [0u8; N], &mut out);
    out
}

/// The 28 sextic monomials in the canonical coefficient layout.
pub fn sextic_monomials() -> Vec<[u8; 3]> {
    monomials::<3>(6)
}

/// Position of an exponent triple of total degree `d` in [`monomials`] order.
pub fn ternary_index(e: [u8; 3]) -> usize {
    let d = (e[0] + e[1] + e[2]) as usize;
    let a = e[0] as usize;
    let r = d - a;
    // triples with larger x-exponent come first
    let before: usize = (a + 1..=d).map(|x| d - x + 1).sum();
    before + (r - e[1] as usize)
}

impl<const N: usize> Form<N> {
    pub fn zero(field_degree: usize, degree: usize) -> Self {
        Form { field_degree, degree, terms: BTreeMap::new() }
    }

    pub fn monomial(field_degree: usize, exps: [u8; N], c: Fe) -> Self {
        let mut f = Self::zero(field_degree, exps.iter().map(|&e| e as usize).sum());
        f.set(exps, c);
        f
    }

    /// Builds a form from terms; repeated monomials are summed.
    pub fn from_terms<I: IntoIterator<Item = ([u8; N], Fe)>>(field_degree: usize, degree: usize, terms: I) -> Self {
        let mut f = Self::zero(field_degree, degree);
        for (e, c) in terms {
            assert_eq!(e.iter().map(|&v| v as usize).sum::<usize>(), degree, "inhomogeneous term");
            let cur = f.coeff(e);
            f.set(e, cur.add(c));
        }
        f
    }

    /// Form with GF(3) coefficients given as integers.
    pub fn from_int_terms(degree: usize, terms: &[([u8; N], i64)]) -> Self {
        Self::from_terms(1, degree, terms.iter().map(|&(e, c)| (e, Fe::from_i64(c))))
    }

    pub fn field_degree(&self) -> usize {
        self.field_degree
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn gf(&self) -> &'static Gf {
        tower().field(self.field_degree)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8; N], &Fe)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, e: [u8; N]) -> Fe {
        self.terms.get(&e).copied().unwrap_or(Fe::ZERO)
    }

    pub fn set(&mut self, e: [u8; N], c: Fe) {
        if c.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, c);
        }
    }

    /// Leading (grlex-largest) term.
    pub fn leading(&self) -> Option<([u8; N], Fe)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, *c))
    }

    /// Image in GF(3^target).
    pub fn embed(&self, target: usize) -> Self {
        if target == self.field_degree {
            return self.clone();
        }
        let t = tower();
        Form {
            field_degree: target,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(e, &c)| (*e, t.embed(c, self.field_degree, target)))
                .collect(),
        }
    }

    /// Smallest field containing all coefficients.
    pub fn minimal_field_degree(&self) -> usize {
        let gf = self.gf();
        self.terms
            .values()
            .map(|&c| gf.element_degree(c))
            .fold(1, lcm)
    }

    /// Re-expresses the form over GF(3^target) when its coefficients lie there.
    pub fn descend(&self, target: usize) -> Option<Self> {
        let t = tower();
        let mut terms = BTreeMap::new();
        for (e, &c) in &self.terms {
            terms.insert(*e, t.descend(c, self.field_degree, target)?);
        }
        Some(Form { field_degree: target, degree: self.degree, terms })
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        if self.field_degree == other.field_degree {
            return (self.clone(), other.clone());
        }
        let k = lcm(self.field_degree, other.field_degree);
        (self.embed(k), other.embed(k))
    }

    fn check_degree(&self, other: &Self) -> usize {
        if self.is_zero() {
            other.degree
        } else if other.is_zero() {
            self.degree
        } else {
            assert_eq!(self.degree, other.degree, "adding forms of different degrees");
            self.degree
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut a, b) = self.common(other);
        a.degree = self.check_degree(other);
        for (e, &c) in &b.terms {
            let cur = a.coeff(*e);
            a.set(*e, cur.add(c));
        }
        a
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Form {
            field_degree: self.field_degree,
            degree: self.degree,
            terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: Fe) -> Self {
        let gf = self.gf();
        let mut out = Self::zero(self.field_degree, self.degree);
        for (e, &v) in &self.terms {
            out.set(*e, gf.mul(v, c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        let gf = a.gf();
        let mut out = Self::zero(a.field_degree, a.degree + b.degree);
        for (ea, &ca) in &a.terms {
            for (eb, &cb) in &b.terms {
                let mut e = [0u8; N];
                for i in 0..N {
                    e[i] = ea[i] + eb[i];
                }
                let cur = out.coeff(e);
                out.set(e, cur.add(gf.mul(ca, cb)));
            }
        }
        out
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Self::constant(self.field_degree, Fe::ONE);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn constant(field_degree: usize, c: Fe) -> Self {
        Self::monomial(field_degree, [0; N], c)
    }

    /// The `i`-th coordinate function.
    pub fn var(field_degree: usize, i: usize) -> Self {
        let mut e = [0u8; N];
        e[i] = 1;
        Self::monomial(field_degree, e, Fe::ONE)
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.field_degree, self.degree.saturating_sub(1));
        for (e, &c) in &self.terms {
            let m = (e[var] % 3) as u8;
            if m == 0 {
                continue;
            }
            let mut d = *e;
            d[var] -= 1;
            out.set(d, c.scale(m));
        }
        out
    }

    /// Coefficient-wise Frobenius.
    pub fn frobenius(&self, times: usize) -> Self {
        let gf = self.gf();
        let mut out = Self::zero(self.field_degree, self.degree);
        for (e, &c) in &self.terms {
            out.set(*e, gf.frobenius(c, times));
        }
        out
    }

    /// Value at a point with coordinates in GF(3^m), where `field_degree | m`.
    pub fn eval(&self, point: &[Fe; N], m: usize) -> Fe {
        let t = tower();
        let gf = t.field(m);
        let mut powers = [[Fe::ONE; 16]; N];
        for i in 0..N {
            for j in 1..=self.degree.min(15) {
                powers[i][j] = gf.mul(powers[i][j - 1], point[i]);
            }
        }
        let mut acc = Fe::ZERO;
        for (e, &c) in &self.terms {
            let mut v = t.embed(c, self.field_degree, m);
            for i in 0..N {
                v = gf.mul(v, powers[i][e[i] as usize]);
            }
            acc = acc.add(v);
        }
        acc
    }

    /// `F(L_0, ..., L_{N-1})` for linear forms `L_i` over a common field.
    pub fn substitute(&self, images: &[Form<N>; N]) -> Self {
        let k = images.iter().fold(self.field_degree, |a, f| lcm(a, f.field_degree));
        let me = self.embed(k);
        let images: Vec<Form<N>> = images.iter().map(|f| f.embed(k)).collect();
        let mut pow_cache: Vec<Vec<Form<N>>> = images
            .iter()
            .map(|l| vec![Form::constant(k, Fe::ONE), l.clone()])
            .collect();
        let mut out = Self::zero(k, self.degree);
        for (e, &c) in &me.terms {
            let mut term = Form::constant(k, c);
            for i in 0..N {
                let n = e[i] as usize;
                while pow_cache[i].len() <= n {
                    let next = pow_cache[i].last().unwrap().mul(&images[i]);
                    pow_cache[i].push(next);
                }
                term = term.mul(&pow_cache[i][n]);
            }
            out = out.add(&term);
        }
        out.degree = self.degree;
        out
    }

    /// True iff `self = λ·other` for some nonzero scalar `λ`; returns `λ`.
    pub fn projective_ratio(&self, other: &Self) -> Option<Fe> {
        let (a, b) = self.common(other);
        if a.terms.len() != b.terms.len() || a.is_zero() {
            return None;
        }
        let gf = a.gf();
        let (e0, c0) = a.leading()?;
        let d0 = b.coeff(e0);
        if d0.is_zero() {
            return None;
        }
        let lambda = gf.div(c0, d0).ok()?;
        for (e, &c) in &a.terms {
            if gf.mul(lambda, b.coeff(*e)) != c {
                return None;
            }
        }
        Some(lambda)
    }

    pub fn projectively_equal(&self, other: &Self) -> bool {
        self.projective_ratio(other).is_some()
    }

    /// Divides by the leading coefficient.
    pub fn normalized(&self) -> Self {
        match self.leading() {
            Some((_, c)) => self.scale(self.gf().inv(c)),
            None => self.clone(),
        }
    }
}

/// True iff `g` divides `f` in the polynomial ring. Uses division by the
/// single divisor with respect to grlex; the remainder is zero exactly for
/// multiples because a principal ideal's generator is a Gröbner basis.
pub fn form_divides<const N: usize>(g: &Form<N>, f: &Form<N>) -> Result<bool, PolyError> {
    if g.is_zero() {
        return Err(PolyError::ZeroDivisor);
    }
    if f.is_zero() {
        return Ok(true);
    }
    if g.degree > f.degree {
        return Ok(false);
    }
    let (g, f) = g.common(f);
    let gf = g.gf();
    let (lm, lc) = g.leading().unwrap();
    let lc_inv = gf.inv(lc);
    let mut rem = f.terms.clone();
    // walk monomials from the top; terms not divisible by lm can never be cancelled later
    let mut bound: Option<[u8; N]> = None;
    loop {
        let next = match bound {
            None => rem.iter().next_back().map(|(e, c)| (*e, *c)),
            Some(b) => rem.range(..b).next_back().map(|(e, c)| (*e, *c)),
        };
        let Some((e, c)) = next else { break };
        if (0..N).all(|i| e[i] >= lm[i]) {
            let q = gf.mul(c, lc_inv);
            for (ge, &gc) in &g.terms {
                let mut t = [0u8; N];
                for i in 0..N {
                    t[i] = ge[i] + e[i] - lm[i];
                }
                let v = rem.get(&t).copied().unwrap_or(Fe::ZERO).sub(gf.mul(q, gc));
                if v.is_zero() {
                    rem.remove(&t);
                } else {
                    rem.insert(t, v);
                }
            }
        } else {
            return Ok(false);
        }
        bound = Some(e);
    }
    Ok(rem.is_empty())
}

pub fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

impl<const N: usize> Form<N>
where
    Form<N>: VarNames,
{
    fn render_monomial(e: &[u8; N]) -> String {
        let mut s = String::new();
        for (i, &p) in e.iter().enumerate() {
            match p {
                0 => {}
                1 => s.push_str(Self::NAMES[i]),
                _ => s.push_str(&format!("{}^{}", Self::NAMES[i], p)),
            }
        }
        s
    }

    /// Human-readable sum of terms, grlex descending, e.g. `x^4y^2 + 2x^3y^3`.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, &c) in self.terms.iter().rev() {
            let mono = Self::render_monomial(e);
            let coeff = if c.in_prime_field() {
                match (c.prime_value(), mono.is_empty()) {
                    (1, false) => String::new(),
                    (v, _) => v.to_string(),
                }
            } else {
                format!("({})", render_element(FieldElement::new(self.field_degree, c)))
            };
            parts.push(format!("{coeff}{mono}"));
        }
        parts.join(" + ")
    }

    /// Parses the output of [`Form::render`]; also accepts `*`, `-`, spaces,
    /// and bare `ζk^e*` coefficients. Bare `ζ^e` is read in GF(3^default_degree).
    /// The result lives in the smallest tower field holding every coefficient
    /// and `default_degree`'s prime field.
    pub fn parse(text: &str, default_degree: usize) -> Result<Self, PolyError> {
        let err = |m: &str| PolyError::Parse(format!("{m} in {text:?}"));
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty form"));
        }
        // split into signed terms at top-level + and -
        let mut raw_terms: Vec<(bool, String)> = Vec::new();
        let mut depth = 0i32;
        let mut cur = String::new();
        let mut negative = false;
        for ch in s.chars() {
            match ch {
                '(' | '[' => depth += 1,
                ')' | ']' => depth -= 1,
                _ => {}
            }
            if depth == 0 && (ch == '+' || ch == '-') && !cur.is_empty() && !cur.ends_with('^') {
                raw_terms.push((negative, std::mem::take(&mut cur)));
                negative = ch == '-';
                continue;
            }
            if depth == 0 && cur.is_empty() && (ch == '+' || ch == '-') {
                negative ^= ch == '-';
                continue;
            }
            cur.push(ch);
        }
        if depth != 0 {
            return Err(err("unbalanced parentheses"));
        }
        if cur.is_empty() {
            return Err(err("dangling sign"));
        }
        raw_terms.push((negative, cur));

        let mut parsed: Vec<([u8; N], FieldElement)> = Vec::new();
        for (neg, t) in raw_terms {
            let (coeff_text, rest) = split_coefficient(&t);
            let mut c = match coeff_text {
                None => FieldElement::new(1, Fe::ONE),
                Some(ct) if ct.chars().all(|ch| ch.is_ascii_digit()) => {
                    FieldElement::new(1, Fe::from_i64(ct.parse::<i64>().map_err(|_| err("bad integer"))?))
                }
                Some(ct) => parse_element(ct, default_degree).map_err(|e| err(&e.to_string()))?,
            };
            if neg {
                c.value = c.value.neg();
            }
            let e = parse_monomial::<N>(rest, Self::NAMES).ok_or_else(|| err("bad monomial"))?;
            parsed.push((e, c));
        }
        let degree = parsed[0].0.iter().map(|&v| v as usize).sum();
        if parsed.iter().any(|(e, _)| e.iter().map(|&v| v as usize).sum::<usize>() != degree) {
            if parsed.len() == 1 || parsed.iter().all(|(_, c)| c.value.is_zero()) {
                return Ok(Self::zero(1, 0));
            }
            return Err(err("inhomogeneous terms"));
        }
        let k = parsed.iter().fold(1, |a, (_, c)| lcm(a, c.degree as usize));
        if k > crate::field_tower::MAX_TOWER_DEGREE {
            return Err(err("coefficients need a field outside the tower"));
        }
        let t = tower();
        Ok(Self::from_terms(
            k,
            degree,
            parsed.into_iter().map(|(e, c)| (e, t.embed(c.value, c.degree as usize, k))),
        ))
    }
}

fn split_coefficient(t: &str) -> (Option<&str>, &str) {
    if let Some(inner) = t.strip_prefix('(') {
        if let Some(end) = inner.find(')') {
            let rest = inner[end + 1..].trim_start_matches('*');
            return (Some(&inner[..end]), rest);
        }
    }
    if t.starts_with('[') {
        if let Some(end) = t.find(']') {
            return (Some(&t[..=end]), t[end + 1..].trim_start_matches('*'));
        }
    }
    // a bare ζ coefficient: ζ, optional field degree, optional ^exponent
    if let Some(after) = t.strip_prefix('ζ') {
        let deg_len = after.chars().take_while(|c| c.is_ascii_digit()).count();
        let mut end = 'ζ'.len_utf8() + deg_len;
        if let Some(r) = t[end..].strip_prefix('^') {
            let r = r.strip_prefix('{').unwrap_or(r);
            let exp_len = r.chars().take_while(|c| c.is_ascii_digit()).count();
            end = t.len() - r.len() + exp_len;
            if t[end..].starts_with('}') {
                end += 1;
            }
        }
        return (Some(&t[..end]), t[end..].trim_start_matches('*'));
    }
    let digits = t.chars().take_while(|c| c.is_ascii_digit()).count();
    if digits == 0 {
        return (None, t.trim_start_matches('*'));
    }
    (Some(&t[..digits]), t[digits..].trim_start_matches('*'))
}

fn parse_monomial<const N: usize>(s: &str, names: &[&str]) -> Option<[u8; N]> {
    let mut e = [0u8; N];
    let mut rest = s;
    while !rest.is_empty() {
        rest = rest.trim_start_matches('*');
        if rest.is_empty() {
            break;
        }
        // longest matching variable name
        let (idx, name) = names
            .iter()
            .enumerate()
            .filter(|(_, n)| rest.starts_with(**n))
            .max_by_key(|(_, n)| n.len())?;
        rest = &rest[name.len()..];
        let mut p = 1u32;
        if let Some(r) = rest.strip_prefix('^') {
            let digits = r.chars().take_while(|c| c.is_ascii_digit()).count();
            if digits == 0 {
                return None;
            }
            p = r[..digits].parse().ok()?;
            rest = &r[digits..];
        }
        e[idx] = e[idx].checked_add(p.try_into().ok()?)?;
    }
    Some(e)
}

impl<const N: usize> fmt::Display for Form<N>
where
    Form<N>: VarNames,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<const N: usize> fmt::Debug for Form<N>
where
    Form<N>: VarNames,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form[GF(3^{}), deg {}]({})", self.field_degree, self.degree, self.render())
    }
}

impl TernaryForm {
    /// Coefficients in the canonical grlex layout ([`monomials`] order).
    pub fn to_vector(&self) -> Vec<Fe> {
        monomials::<3>(self.degree).iter().map(|&e| self.coeff(e)).collect()
    }

    pub fn from_vector(field_degree: usize, degree: usize, v: &[Fe]) -> Self {
        let mons = monomials::<3>(degree);
        assert_eq!(v.len(), mons.len());
        Self::from_terms(field_degree, degree, mons.into_iter().zip(v.iter().copied()))
    }

    /// GF(3) sextic from 28 digits in the canonical layout.
    pub fn sextic_from_digits(digits: &[u8]) -> Self {
        let v: Vec<Fe> = digits.iter().map(|&d| Fe::from_i64(d as i64)).collect();
        Self::from_vector(1, 6, &v)
    }

    /// Image under `(x, y, z) -> M (x, y, z)` for a 3x3 matrix over GF(3).
    pub fn transform(&self, m: &[[i64; 3]; 3]) -> Self {
        let k = self.field_degree;
        let images: [TernaryForm; 3] = std::array::from_fn(|r| {
            TernaryForm::from_terms(k, 1, (0..3).map(|c| {
                let mut e = [0u8; 3];
                e[c] = 1;
                (e, Fe::from_i64(m[r][c]))
            }))
        });
        self.substitute(&images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_form(k: usize, d: usize, rng: &mut ChaCha8Rng) -> TernaryForm {
        let gf = tower().field(k);
        TernaryForm::from_terms(k, d, monomials::<3>(d).into_iter().map(|e| (e, gf.random(rng))))
    }

    #[test]
    fn sextic_layout() {
        let m = sextic_monomials();
        assert_eq!(m.len(), 28);
        assert_eq!(m[0], [6, 0, 0]);
        assert_eq!(m[1], [5, 1, 0]);
        assert_eq!(m[2], [5, 0, 1]);
        assert_eq!(m[3], [4, 2, 0]);
        assert_eq!(m[27], [0, 0, 6]);
        for d in 0..=7 {
            for (i, e) in monomials::<3>(d).into_iter().enumerate() {
                assert_eq!(ternary_index(e), i);
            }
        }
        assert_eq!(monomials::<5>(2).len(), 15);
    }

    #[test]
    fn text_round_trip() {
        let text = "x^2y^4 + x^4yz + 2y^4z^2 + x^2z^4 + 2y^2z^4";
        let f = TernaryForm::parse(text, 2).unwrap();
        assert_eq!(f.field_degree(), 1);
        assert_eq!(f.degree(), 6);
        assert_eq!(TernaryForm::parse(&f.render(), 1).unwrap(), f);
        let g = TernaryForm::parse("ζ^3*x^2 - y*z + (ζ2^5)z^2", 2).unwrap();
        assert_eq!(g.field_degree(), 2);
        assert_eq!(g.coeff([0, 1, 1]), Fe::TWO);
        assert_eq!(TernaryForm::parse(&g.render(), 1).unwrap(), g);
        let q = QuinaryQuadric::parse("x0x4 - x1^2", 1).unwrap();
        assert_eq!(q.coeff([1, 0, 0, 0, 1]), Fe::ONE);
        assert_eq!(q.coeff([0, 2, 0, 0, 0]), Fe::TWO);
        assert_eq!(QuinaryQuadric::parse(&q.render(), 1).unwrap(), q);
        assert!(TernaryForm::parse("x^2 + y", 1).is_err());
        assert!(TernaryForm::parse("x^2 + w^2", 1).is_err());
    }

    #[test]
    fn divisibility() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let y = TernaryForm::var(1, 1);
        let f = TernaryForm::parse("x^4y^2 + 2x^3y^3 + xy^4z", 1).unwrap();
        assert!(form_divides(&y, &f).unwrap());
        assert!(!form_divides(&y, &f.add(&TernaryForm::parse("x^6", 1).unwrap())).unwrap());
        for k in [1, 2] {
            for _ in 0..30 {
                let g = random_form(k, 2, &mut rng);
                let h = random_form(k, 4, &mut rng);
                if g.is_zero() || h.is_zero() {
                    continue;
                }
                let gh = g.mul(&h);
                assert!(form_divides(&g, &gh).unwrap());
                let bumped = gh.add(&TernaryForm::monomial(k, [6, 0, 0], Fe::ONE));
                // g | x^6 only when g is a multiple of x^2
                if g.normalized() != TernaryForm::monomial(k, [2, 0, 0], Fe::ONE) {
                    assert!(!form_divides(&g, &bumped).unwrap());
                }
            }
        }
        assert_eq!(form_divides(&TernaryForm::zero(1, 1), &f), Err(PolyError::ZeroDivisor));
    }

    #[test]
    fn substitution_and_eval_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let f = random_form(1, 6, &mut rng);
            let m: [[i64; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| rng.random_range(0..3)));
            let g = f.transform(&m);
            let gf = tower().field(2);
            let p = [gf.random(&mut rng), gf.random(&mut rng), gf.random(&mut rng)];
            let mp: [Fe; 3] = std::array::from_fn(|r| {
                (0..3).fold(Fe::ZERO, |acc, c| acc.add(gf.mul(Fe::from_i64(m[r][c]), p[c])))
            });
            assert_eq!(g.eval(&p, 2), f.eval(&mp, 2));
        }
    }

    #[test]
    fn projective_equality() {
        let f = TernaryForm::parse("x^2 + ζ^2yz", 2).unwrap();
        let g = f.scale(tower().field(2).exp(5));
        assert!(f.projectively_equal(&g));
        assert!(!f.projectively_equal(&f.add(&TernaryForm::parse("z^2", 1).unwrap())));
    }
}
