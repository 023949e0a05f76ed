//! Point counts of plane curves over GF(3^e), smooth-model counts, the
//! geometric irreducibility test for sextics over GF(3), and Weil
//! polynomials over GF(9).

use std::fmt;

use num::bigint::BigInt;
use num::complex::Complex64;
use num::{BigRational, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field_tower::{tower, Fe, Gf};
use crate::polynomials::{monomials, ternary_index, PolyRing, TernaryForm, UniPoly};
use crate::singularity::{tangent_adjustment, tangent_cone, SingularConfig};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("N_{m} = {n} violates the Weil bound for genus 5 over GF(9^{m})")]
    WeilBound { m: usize, n: i64 },
    #[error("{0}")]
    Singularity(#[from] crate::singularity::SingularityError),
    #[error("cannot parse Weil polynomial: {0}")]
    Parse(String),
}

/// Points of `V(F)` in P^2(GF(3^e)) with the number of identically vanishing
/// fibres `x = x0` (line components), reported for diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlaneCount {
    pub points: u64,
    pub zero_fibres: u64,
}

/// Elements of GF(3^e) up to Frobenius over GF(3^k), with orbit sizes.
fn orbit_representatives(gf: &Gf, k: usize) -> Vec<(Fe, u64)> {
    let e = gf.degree();
    let mut out = Vec::new();
    for n in 0..gf.order() {
        let x = gf.from_index(n);
        let mut size = 1u64;
        let mut y = gf.frobenius(x, k);
        let mut minimal = true;
        while y != x {
            if gf.index(y) < n {
                minimal = false;
                break;
            }
            size += 1;
            y = gf.frobenius(y, k);
        }
        if minimal {
            out.push((x, size));
        }
        debug_assert!(size as usize <= e);
    }
    out
}

/// `#V(F)(F_{3^e})` by fibre-wise root counting.
pub fn count_plane_curve_detailed(f: &TernaryForm, e: usize) -> PlaneCount {
    let t = tower();
    let k = f.field_degree();
    assert!(e % k == 0, "form is not defined over GF(3^{e})");
    let gf = t.field(e);
    let ring = PolyRing::new(gf);
    let q = gf.order();
    let d = f.degree();
    // columns[j] = coefficient of y^j in F(x, y, 1), a polynomial in x
    let mut columns = vec![vec![Fe::ZERO; d + 1]; d + 1];
    for (ex, &c) in f.terms() {
        columns[ex[1] as usize][ex[0] as usize] = t.embed(c, k, e);
    }
    let columns: Vec<UniPoly> = columns.into_iter().map(UniPoly::new).collect();
    let mut points = 0u64;
    let mut zero_fibres = 0u64;
    for (x0, weight) in orbit_representatives(gf, k) {
        let fibre = UniPoly::new(columns.iter().map(|c| ring.eval(c, x0)).collect());
        let n = if fibre.is_zero() {
            zero_fibres += weight;
            q
        } else {
            ring.count_roots(&fibre, e) as u64
        };
        points += weight * n;
    }
    // the line z = 0: points (x : 1 : 0) and (1 : 0 : 0)
    let mut at_infinity = vec![Fe::ZERO; d + 1];
    for (ex, &c) in f.terms() {
        if ex[2] == 0 {
            at_infinity[ex[0] as usize] = t.embed(c, k, e);
        }
    }
    let at_infinity = UniPoly::new(at_infinity);
    points += if at_infinity.is_zero() { q } else { ring.count_roots(&at_infinity, e) as u64 };
    if f.coeff([d as u8, 0, 0]).is_zero() {
        points += 1;
    }
    PlaneCount { points, zero_fibres }
}

pub fn count_plane_curve(f: &TernaryForm, e: usize) -> u64 {
    count_plane_curve_detailed(f, e).points
}

/// `#C(F_{3^e})` for the smooth model: the plane count corrected at the
/// configured singular points that are rational over GF(3^e).
pub fn count_smooth_model(f: &TernaryForm, config: &SingularConfig, e: usize) -> Result<i64, CountError> {
    let mut n = count_plane_curve(f, e) as i64;
    n += adjustment_sum(f, config, e)?;
    Ok(n)
}

/// `Σ (#V(h_P)(F_{3^e}) - 1)` over configured points defined over GF(3^e).
pub fn adjustment_sum(f: &TernaryForm, config: &SingularConfig, e: usize) -> Result<i64, CountError> {
    let mut n = 0;
    for c in &config.points {
        if e % c.point.field_degree() != 0 {
            continue;
        }
        let (h, _, k) = tangent_cone(f, &c.point);
        n += tangent_adjustment(&h, k, e)?;
    }
    Ok(n)
}

/// Dense long division of a GF(3) sextic by GF(3) forms of low degree.
struct DenseDivisor {
    /// `product[a][i][j]`: index of (degree-(6-a) monomial i) * (degree-a monomial j)
    product: Vec<Vec<Vec<u8>>>,
    /// `quotient_of[a][i][j]`: index of sextic monomial i divided by degree-a monomial j
    quotient_of: Vec<Vec<Vec<Option<u8>>>>,
}

impl DenseDivisor {
    fn new() -> Self {
        let six = monomials::<3>(6);
        let mut product = vec![Vec::new(); 4];
        let mut quotient_of = vec![Vec::new(); 4];
        for a in 1..=3 {
            let low = monomials::<3>(a);
            let high = monomials::<3>(6 - a);
            product[a] = high
                .iter()
                .map(|m| low.iter().map(|l| ternary_index([m[0] + l[0], m[1] + l[1], m[2] + l[2]]) as u8).collect())
                .collect();
            quotient_of[a] = six
                .iter()
                .map(|s| {
                    low.iter()
                        .map(|l| {
                            (s[0] >= l[0] && s[1] >= l[1] && s[2] >= l[2])
                                .then(|| ternary_index([s[0] - l[0], s[1] - l[1], s[2] - l[2]]) as u8)
                        })
                        .collect()
                })
                .collect();
        }
        DenseDivisor { product, quotient_of }
    }

    /// `g | f` for digit vectors in the canonical layouts; `g` is normalized
    /// so its first nonzero digit is 1.
    fn divides(&self, f: &[u8; 28], g: &[u8], a: usize) -> bool {
        let lead = g.iter().position(|&c| c != 0).expect("nonzero divisor");
        let support: Vec<(usize, u8)> = g.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i, c)).collect();
        let mut r = *f;
        let mut i = 0;
        while i < 28 {
            if r[i] == 0 {
                i += 1;
                continue;
            }
            let Some(qi) = self.quotient_of[a][i][lead] else { return false };
            let c = r[i];
            for &(j, gc) in &support {
                let idx = self.product[a][qi as usize][j] as usize;
                r[idx] = (r[idx] + 3 * 3 - c * gc) % 3;
            }
            debug_assert_eq!(r[i], 0);
        }
        true
    }
}

fn dense_divisor() -> &'static DenseDivisor {
    static CELL: std::sync::OnceLock<DenseDivisor> = std::sync::OnceLock::new();
    CELL.get_or_init(DenseDivisor::new)
}

/// A factor over GF(3) of degree at most 3, when one exists.
pub fn rational_factor_of_low_degree(f: &TernaryForm) -> Option<TernaryForm> {
    assert!(f.degree() == 6 && f.field_degree() == 1);
    let v = f.to_vector();
    let digits: [u8; 28] = std::array::from_fn(|i| v[i].prime_value());
    let div = dense_divisor();
    for a in 1..=3usize {
        let n = monomials::<3>(a).len();
        let mut g = vec![0u8; n];
        // every vector whose first nonzero digit is 1
        for lead in 0..n {
            let free = n - lead - 1;
            for code in 0..3u32.pow(free as u32) {
                g.iter_mut().for_each(|c| *c = 0);
                g[lead] = 1;
                let mut c = code;
                for slot in g.iter_mut().skip(lead + 1) {
                    *slot = (c % 3) as u8;
                    c /= 3;
                }
                if div.divides(&digits, &g, a) {
                    let v: Vec<Fe> = g.iter().map(|&d| Fe::from_i64(d as i64)).collect();
                    return Some(TernaryForm::from_vector(1, a, &v));
                }
            }
        }
    }
    None
}

/// Points over GF(3^6) above which a GF(3)-irreducible sextic must be
/// geometrically reducible.
pub const IRREDUCIBILITY_THRESHOLD: u64 = 1270;

/// Geometric irreducibility of a sextic over GF(3): no GF(3) factor of
/// degree at most 3, and at most 1270 points over GF(3^6).
pub fn is_geometrically_irreducible(f: &TernaryForm) -> bool {
    if f.is_zero() {
        return false;
    }
    rational_factor_of_low_degree(f).is_none() && count_plane_curve(f, 6) <= IRREDUCIBILITY_THRESHOLD
}

/// `N_1..N_5` over GF(9^m).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountVector {
    pub base: u64,
    pub n: Vec<i64>,
}

impl CountVector {
    pub fn check_weil_bound(&self) -> Result<(), CountError> {
        for (i, &n) in self.n.iter().enumerate() {
            let m = i as u32 + 1;
            let q = 9i64.pow(m);
            let slack = 10 * 3i64.pow(m);
            if n < 0 || (n - q - 1).abs() > slack {
                return Err(CountError::WeilBound { m: m as usize, n });
            }
        }
        Ok(())
    }
}

pub fn count_vector(f: &TernaryForm, config: &SingularConfig) -> Result<CountVector, CountError> {
    let n = (1..=5).map(|m| count_smooth_model(f, config, 2 * m)).collect::<Result<Vec<_>, _>>()?;
    let cv = CountVector { base: 9, n };
    cv.check_weil_bound()?;
    Ok(cv)
}

/// Monic degree-10 Weil polynomial over GF(9); `coeffs[i]` multiplies `t^i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeilPoly {
    pub coeffs: Vec<BigInt>,
}

impl fmt::Debug for WeilPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeilPoly({})", self.expanded())
    }
}

impl WeilPoly {
    /// From `N_1..N_5` via Newton's identities and the functional equation.
    pub fn from_counts(n: &[i64]) -> Result<WeilPoly, CountError> {
        assert_eq!(n.len(), 5);
        let cv = CountVector { base: 9, n: n.to_vec() };
        cv.check_weil_bound()?;
        let s: Vec<BigInt> = (1..=5u32)
            .map(|m| BigInt::from(9u64.pow(m)) + 1 - BigInt::from(n[m as usize - 1]))
            .collect();
        Ok(Self::from_power_sums(&s))
    }

    /// From power sums `s_1..s_5` of the ten Frobenius eigenvalues.
    pub fn from_power_sums(s: &[BigInt]) -> WeilPoly {
        let mut e = vec![BigInt::one()];
        for k in 1..=5usize {
            let mut acc = BigInt::zero();
            for i in 1..=k {
                let term = &e[k - i] * &s[i - 1];
                if i % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            debug_assert!((&acc % BigInt::from(k)).is_zero(), "Newton identity not integral");
            e.push(acc / BigInt::from(k));
        }
        let mut coeffs = vec![BigInt::zero(); 11];
        for k in 0..=5 {
            let c = if k % 2 == 0 { e[k].clone() } else { -e[k].clone() };
            coeffs[10 - k] = c;
        }
        for i in 0..5 {
            coeffs[i] = BigInt::from(9u64.pow(5 - i as u32)) * &coeffs[10 - i];
        }
        WeilPoly { coeffs }
    }

    /// `c_i = 9^(5-i) c_{10-i}` for all `i < 5`.
    pub fn satisfies_functional_equation(&self) -> bool {
        self.coeffs.len() == 11
            && (0..5).all(|i| self.coeffs[i] == BigInt::from(9u64.pow(5 - i as u32)) * &self.coeffs[10 - i])
    }

    /// Every complex root has absolute value 3 (to 1e-6), checked on the
    /// squarefree part with Durand–Kerner iteration.
    pub fn roots_on_circle(&self) -> bool {
        let sf = squarefree_part(&self.coeffs);
        let roots = durand_kerner(&sf);
        roots.iter().all(|r| (r.norm() - 3.0).abs() < 1e-6)
    }

    pub fn expanded(&self) -> String {
        render_int_poly(&self.coeffs)
    }

    /// Factorization over Z via the real Weil polynomial `P` with
    /// `W(t) = t^5 P(t + 9/t)`.
    pub fn factored(&self) -> String {
        let p = self.real_polynomial();
        let mut factors: Vec<(Vec<i64>, usize)> = Vec::new();
        for (g, mult) in factor_real_polynomial(&p) {
            let lifted = lift_real_factor(&g);
            // (t - 3)^2 and (t + 3)^2 are shown as powers of linear factors
            if g.len() == 2 && (g[0] == 6 || g[0] == -6) {
                let lin = vec![g[0] / 2, 1];
                push_factor(&mut factors, lin, 2 * mult);
            } else {
                push_factor(&mut factors, lifted, mult);
            }
        }
        factors.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.iter().rev().cmp(b.0.iter().rev())));
        factors
            .iter()
            .map(|(g, m)| {
                let inner = render_int_poly(&g.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>());
                if *m == 1 { format!("({inner})") } else { format!("({inner})^{m}") }
            })
            .collect()
    }

    /// Degree-5 integer polynomial `P` with `W(t) = t^5 P(t + 9/t)`, low first.
    pub fn real_polynomial(&self) -> Vec<i64> {
        // peel off u^k from the top: t^5 u^k contributes binomial terms
        let mut w: Vec<i64> = self.coeffs.iter().map(|c| c.to_i64().expect("small coefficients")).collect();
        let mut p = vec![0i64; 6];
        for k in (0..=5usize).rev() {
            let c = w[5 + k];
            p[k] = c;
            // t^5 (t + 9/t)^k = Σ_j C(k,j) 9^j t^(5+k-2j)
            let mut binom = 1i64;
            for j in 0..=k {
                let idx = 5 + k - 2 * j;
                w[idx] -= c * binom * 9i64.pow(j as u32);
                binom = binom * (k - j) as i64 / (j + 1) as i64;
            }
        }
        debug_assert!(w.iter().all(|&c| c == 0), "not a q-symmetric polynomial");
        p
    }

    /// Parses a product like `(t+3)^6(t^2+2t+9)^2` or an expanded polynomial.
    pub fn parse(text: &str) -> Result<WeilPoly, CountError> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut total = vec![BigInt::one()];
        let mut rest = s.as_str();
        if !rest.starts_with('(') {
            total = parse_int_poly(rest)?;
            rest = "";
        }
        while !rest.is_empty() {
            let body_end = rest.find(')').ok_or_else(|| CountError::Parse(text.into()))?;
            let body = parse_int_poly(&rest[1..body_end])?;
            rest = &rest[body_end + 1..];
            let mut exp = 1u32;
            if let Some(r) = rest.strip_prefix('^') {
                let n = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
                exp = r[..n].parse().map_err(|_| CountError::Parse(text.into()))?;
                rest = &r[n..];
            }
            for _ in 0..exp {
                total = mul_int_poly(&total, &body);
            }
            if !rest.is_empty() && !rest.starts_with('(') {
                return Err(CountError::Parse(text.into()));
            }
        }
        if total.len() != 11 {
            return Err(CountError::Parse(format!("{text}: degree {} instead of 10", total.len() as i64 - 1)));
        }
        Ok(WeilPoly { coeffs: total })
    }
}

impl fmt::Display for WeilPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.factored())
    }
}

fn push_factor(factors: &mut Vec<(Vec<i64>, usize)>, g: Vec<i64>, m: usize) {
    match factors.iter_mut().find(|(h, _)| *h == g) {
        Some(entry) => entry.1 += m,
        None => factors.push((g, m)),
    }
}

/// `t^r g(t + 9/t)` for `g` of degree `r`, low first.
fn lift_real_factor(g: &[i64]) -> Vec<i64> {
    let r = g.len() - 1;
    let mut out = vec![0i64; 2 * r + 1];
    for (k, &c) in g.iter().enumerate() {
        let mut binom = 1i64;
        for j in 0..=k {
            out[r + k - 2 * j] += c * binom * 9i64.pow(j as u32);
            binom = binom * (k - j) as i64 / (j + 1) as i64;
        }
    }
    out
}

/// Factors the real Weil polynomial, whose roots lie in [-6, 6]: linear and
/// quadratic factors with such roots are split off by search and the
/// remainder (degree at most 3 by then) is irreducible.
fn factor_real_polynomial(p: &[i64]) -> Vec<(Vec<i64>, usize)> {
    let mut rest = p.to_vec();
    let mut out: Vec<(Vec<i64>, usize)> = Vec::new();
    let mut split_off = |rest: &mut Vec<i64>, g: Vec<i64>| {
        while rest.len() > g.len() - 1 && rest.len() > 1 {
            match div_int_poly(rest, &g) {
                Some(q) => {
                    *rest = q;
                    push_factor(&mut out, g.clone(), 1);
                }
                None => break,
            }
        }
    };
    for a in -6..=6 {
        split_off(&mut rest, vec![-a, 1]);
    }
    for b in -12..=12i64 {
        for c in -36..=36i64 {
            if b * b - 4 * c > 0 && rest.len() > 3 {
                split_off(&mut rest, vec![c, b, 1]);
            }
        }
    }
    if rest.len() > 1 {
        push_factor(&mut out, rest, 1);
    }
    out
}

fn div_int_poly(a: &[i64], g: &[i64]) -> Option<Vec<i64>> {
    let mut r = a.to_vec();
    let dg = g.len() - 1;
    if r.len() < g.len() {
        return None;
    }
    let mut q = vec![0i64; r.len() - dg];
    for i in (0..q.len()).rev() {
        let c = r[i + dg];
        q[i] = c;
        for (j, &gj) in g.iter().enumerate() {
            r[i + j] = r[i + j].checked_sub(c.checked_mul(gj)?)?;
        }
    }
    r.iter().all(|&c| c == 0).then_some(q)
}

fn mul_int_poly(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn render_int_poly(c: &[BigInt]) -> String {
    let mut s = String::new();
    for i in (0..c.len()).rev() {
        let v = &c[i];
        if v.is_zero() {
            continue;
        }
        let neg = v.is_negative();
        let mag = v.abs();
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { "-" } else { "+" });
        }
        let mon = match i {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{i}"),
        };
        if mag != BigInt::one() || i == 0 {
            s.push_str(&mag.to_string());
        }
        s.push_str(&mon);
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

fn parse_int_poly(text: &str) -> Result<Vec<BigInt>, CountError> {
    let err = || CountError::Parse(text.to_string());
    let mut coeffs: Vec<BigInt> = Vec::new();
    let normalized = text.replace('-', "+-");
    for term in normalized.split('+').filter(|s| !s.is_empty()) {
        let (neg, body) = match term.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, term),
        };
        let (coef, exp) = match body.find('t') {
            Some(pos) => {
                let c = if pos == 0 { BigInt::one() } else { body[..pos].trim_end_matches('*').parse().map_err(|_| err())? };
                let e = match body[pos + 1..].strip_prefix('^') {
                    Some(e) => e.parse::<usize>().map_err(|_| err())?,
                    None if body.len() == pos + 1 => 1,
                    None => return Err(err()),
                };
                (c, e)
            }
            None => (body.parse().map_err(|_| err())?, 0),
        };
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, BigInt::zero());
        }
        coeffs[exp] += if neg { -coef } else { coef };
    }
    if coeffs.is_empty() {
        return Err(err());
    }
    Ok(coeffs)
}

/// Squarefree part over Q of an integer polynomial, as f64 coefficients.
fn squarefree_part(c: &[BigInt]) -> Vec<f64> {
    let p: Vec<BigRational> = c.iter().map(|v| BigRational::from_integer(v.clone())).collect();
    let dp: Vec<BigRational> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, v)| v * BigRational::from_integer(BigInt::from(i)))
        .collect();
    let g = rat_gcd(p.clone(), dp);
    let q = rat_div(&p, &g);
    let lead = q.last().unwrap().clone();
    q.iter().map(|v| (v / &lead).to_f64().unwrap()).collect()
}

fn rat_trim(mut a: Vec<BigRational>) -> Vec<BigRational> {
    while a.len() > 1 && a.last().unwrap().is_zero() {
        a.pop();
    }
    if a.is_empty() {
        a.push(BigRational::zero());
    }
    a
}

fn rat_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let c = r.last().unwrap() / b.last().unwrap();
        let shift = r.len() - 1 - db;
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &c * bj;
        }
        r.pop();
        r = rat_trim(r);
        if r.len() <= db {
            break;
        }
    }
    rat_trim(r)
}

fn rat_gcd(mut a: Vec<BigRational>, mut b: Vec<BigRational>) -> Vec<BigRational> {
    a = rat_trim(a);
    b = rat_trim(b);
    while !(b.len() == 1 && b[0].is_zero()) {
        let r = rat_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn rat_div(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![BigRational::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = &r[i + db] / b.last().unwrap();
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    q
}

/// Simultaneous root iteration for a monic polynomial (low first).
fn durand_kerner(p: &[f64]) -> Vec<Complex64> {
    let n = p.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let eval = |z: Complex64| p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
    let seed = Complex64::new(0.4, 0.9);
    let radius = 3.0;
    let mut roots: Vec<Complex64> = (0..n).map(|i| seed.powu(i as u32) * radius).collect();
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 {
            break;
        }
    }
    roots
}

/// Weil polynomial over GF(9) of the smooth model of `F`.
pub fn weil_polynomial(f: &TernaryForm, config: &SingularConfig) -> Result<(CountVector, WeilPoly), CountError> {
    let cv = count_vector(f, config)?;
    let w = WeilPoly::from_counts(&cv.n)?;
    Ok((cv, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sextic(s: &str) -> TernaryForm {
        TernaryForm::parse(s, 1).unwrap()
    }

    fn scan(f: &TernaryForm, e: usize) -> u64 {
        crate::singularity::tests::projective_points(e)
            .iter()
            .filter(|p| f.eval(p, e).is_zero())
            .count() as u64
    }

    #[test]
    fn cuspidal_cubic_has_four_points() {
        let f = sextic("y^2z - x^3");
        assert_eq!(count_plane_curve(&f, 1), 4);
        assert_eq!(scan(&f, 1), 4);
    }

    #[test]
    fn line_component_is_counted() {
        let f = sextic("x").mul(&sextic("x^5 + y^5 + z^5 + xy^2z^2"));
        let d = count_plane_curve_detailed(&f, 1);
        assert!(d.points >= 4);
        assert_eq!(d.zero_fibres, 1);
        assert_eq!(d.points, scan(&f, 1));
    }

    #[test]
    fn counts_match_scans_on_random_sextics() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let digits: Vec<u8> = (0..28).map(|_| rng.random_range(0..3)).collect();
            let f = TernaryForm::sextic_from_digits(&digits);
            if f.is_zero() {
                continue;
            }
            for e in 1..=2 {
                assert_eq!(count_plane_curve(&f, e), scan(&f, e));
            }
        }
    }

    #[test]
    fn squarefree_weil_polynomial_roots() {
        let w = WeilPoly::parse("t^10+9t^9+47t^8+202t^7+789t^6+2615t^5+7101t^4+16362t^3+34263t^2+59049t+59049").unwrap();
        assert!(w.satisfies_functional_equation());
        assert!(w.roots_on_circle());
    }

    #[test]
    fn maximal_curve_power_sums() {
        let s: Vec<BigInt> = (1..=5u32).map(|m| BigInt::from(10) * BigInt::from(-3).pow(m)).collect();
        let w = WeilPoly::from_power_sums(&s);
        assert_eq!(w, WeilPoly::parse("(t+3)^10").unwrap());
        assert!(w.satisfies_functional_equation());
        assert!(w.roots_on_circle());
        assert_eq!(w.factored(), "(t+3)^10");
    }

    #[test]
    fn factored_display_round_trips() {
        for s in [
            "(t+3)^6(t^2+2t+9)^2",
            "(t^2+2t+9)(t^2+5t+9)^4",
            "(t+3)^4(t^2+2t+9)(t^2+4t+9)^2",
            "(t+3)^2(t^4+8t^3+32t^2+72t+81)^2",
        ] {
            let w = WeilPoly::parse(s).unwrap();
            assert!(w.satisfies_functional_equation(), "{s}");
            assert!(w.roots_on_circle(), "{s}");
            assert_eq!(w.factored(), s);
            assert_eq!(WeilPoly::parse(&w.expanded()).unwrap(), w);
        }
    }

    #[test]
    fn low_degree_factor_search() {
        assert!(rational_factor_of_low_degree(&sextic("x^6 + y^6")).is_some());
        let cubic = sextic("x^3 + y^2z + 2z^3 + xyz");
        let other = sextic("x^3 + xz^2 + y^3 + 2z^3 + y^2z");
        let g = rational_factor_of_low_degree(&cubic.mul(&other)).unwrap();
        assert_eq!(g.degree(), 3);
        assert!(crate::polynomials::form_divides(&g, &cubic.mul(&other)).unwrap());
    }
}
