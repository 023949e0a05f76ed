//! Multiplicities, tangent cones, one-blow-up resolution, the singular locus
//! of a plane sextic over the algebraic closure, and the non-special check.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field_tower::{render_element, tower, Fe, FieldElement, Gf, MAX_TOWER_DEGREE};
use crate::polynomials::{lcm, resultant, taylor_at, BiPoly, BinaryForm, PolyRing, ProjPoint, TernaryForm, UniPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SingularityError {
    #[error("the singular locus is positive-dimensional (non-reduced or degenerate sextic)")]
    PositiveDimensionalSingularLocus,
    #[error("tangent cone is the zero form")]
    ZeroForm,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Case {
    I,
    II,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::I => "I",
            Case::II => "II",
        })
    }
}

impl std::str::FromStr for Case {
    type Err = SingularityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "I" | "1" | "i" => Ok(Case::I),
            "II" | "2" | "ii" => Ok(Case::II),
            other => Err(SingularityError::InvalidConfig(format!("unknown case {other}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConfigPoint {
    pub point: ProjPoint,
    pub multiplicity: u32,
}

/// A Frobenius-stable set of prescribed singular points. `points` lists every
/// point (conjugates included), grouped by orbit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SingularConfig {
    pub case: Case,
    pub points: Vec<ConfigPoint>,
    pub label: String,
}

impl SingularConfig {
    /// Expands orbit representatives `(point, multiplicity)` into the full
    /// point set and validates it.
    pub fn from_orbits(case: Case, reps: &[(ProjPoint, u32)], label: &str) -> Result<Self, SingularityError> {
        let mut points = Vec::new();
        for &(p, m) in reps {
            for q in p.conjugates() {
                points.push(ConfigPoint { point: q, multiplicity: m });
            }
        }
        let c = SingularConfig { case, points, label: label.to_string() };
        c.validate()?;
        Ok(c)
    }

    /// Same as [`from_orbits`](Self::from_orbits) without the general-position test.
    pub fn from_orbits_unchecked(case: Case, reps: &[(ProjPoint, u32)], label: &str) -> Self {
        let mut points = Vec::new();
        for &(p, m) in reps {
            for q in p.conjugates() {
                points.push(ConfigPoint { point: q, multiplicity: m });
            }
        }
        SingularConfig { case, points, label: label.to_string() }
    }

    pub fn validate(&self) -> Result<(), SingularityError> {
        let bad = |s: &str| Err(SingularityError::InvalidConfig(s.to_string()));
        let set: BTreeSet<ProjPoint> = self.points.iter().map(|c| c.point).collect();
        if set.len() != self.points.len() {
            return bad("repeated point");
        }
        for c in &self.points {
            let img = c.point.frobenius(1);
            if !self.points.iter().any(|d| d.point == img && d.multiplicity == c.multiplicity) {
                return bad("point set is not Frobenius-stable");
            }
        }
        let mults: Vec<u32> = self.points.iter().map(|c| c.multiplicity).collect();
        match self.case {
            Case::I => {
                if mults.len() != 5 || mults.iter().any(|&m| m != 2) {
                    return bad("case I needs five double points");
                }
                if self.max_collinear() >= 4 {
                    return bad("four points are collinear");
                }
            }
            Case::II => {
                let mut sorted = mults.clone();
                sorted.sort();
                if sorted != [2, 2, 3] {
                    return bad("case II needs one triple and two double points");
                }
                let triple = self.points.iter().find(|c| c.multiplicity == 3).unwrap();
                if triple.point.field_degree() != 1 {
                    return bad("the triple point must be rational");
                }
                if self.max_collinear() >= 3 {
                    return bad("the three points are collinear");
                }
            }
        }
        Ok(())
    }

    /// Largest number of configured points on one line.
    pub fn max_collinear(&self) -> usize {
        let n = self.points.len();
        let k = self.field_degree();
        let pts: Vec<[Fe; 3]> = self.points.iter().map(|c| c.point.coords_in(k)).collect();
        let gf = tower().field(k);
        let mut best = n.min(2);
        for i in 0..n {
            for j in i + 1..n {
                let on = (0..n).filter(|&l| det3(gf, &pts[i], &pts[j], &pts[l]).is_zero()).count();
                best = best.max(on);
            }
        }
        best
    }

    /// Compositum degree of all point fields.
    pub fn field_degree(&self) -> usize {
        self.points.iter().map(|c| c.point.field_degree()).fold(1, lcm)
    }

    /// Orbit sizes of the double points in ascending order, e.g. `[1, 2, 2]`.
    pub fn pattern(&self) -> Vec<usize> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for c in self.points.iter().filter(|c| c.multiplicity == 2) {
            if seen.insert(c.point) {
                for q in c.point.conjugates() {
                    seen.insert(q);
                }
                out.push(c.point.field_degree());
            }
        }
        out.sort();
        out
    }

    pub fn pattern_tag(&self) -> String {
        self.pattern().iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
    }

    /// One representative per orbit, in listed order.
    pub fn orbit_representatives(&self) -> Vec<ConfigPoint> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for c in &self.points {
            if !seen.contains(&c.point) {
                seen.extend(c.point.conjugates());
                out.push(*c);
            }
        }
        out
    }

    pub fn point_set(&self) -> BTreeSet<ProjPoint> {
        self.points.iter().map(|c| c.point).collect()
    }

    /// Orbit representatives separated by spaces, triple points suffixed `x3`.
    pub fn points_text(&self) -> String {
        let pts: Vec<String> = self
            .orbit_representatives()
            .iter()
            .map(|c| if c.multiplicity == 2 { c.point.render() } else { format!("{}x{}", c.point.render(), c.multiplicity) })
            .collect();
        pts.join(" ")
    }

    pub fn render(&self) -> String {
        format!("case {} ({}) {}", self.case, self.pattern_tag(), self.points_text())
    }

    /// Inverse of [`points_text`](Self::points_text); validates the result.
    pub fn parse(case: Case, text: &str, label: &str) -> Result<Self, SingularityError> {
        let mut reps = Vec::new();
        for tok in text.split_whitespace() {
            let (pt, m) = match tok.rsplit_once(")x") {
                Some((p, m)) => (format!("{p})"), m.parse::<u32>().map_err(|_| SingularityError::InvalidConfig(tok.into()))?),
                None => (tok.to_string(), 2),
            };
            let p = ProjPoint::parse(&pt, 1).map_err(|e| SingularityError::InvalidConfig(e.to_string()))?;
            reps.push((p, m));
        }
        Self::from_orbits(case, &reps, label)
    }
}

pub(crate) fn det3(gf: &Gf, a: &[Fe; 3], b: &[Fe; 3], c: &[Fe; 3]) -> Fe {
    let m = |x, y| gf.mul(x, y);
    let t0 = m(a[0], m(b[1], c[2]).sub(m(b[2], c[1])));
    let t1 = m(a[1], m(b[0], c[2]).sub(m(b[2], c[0])));
    let t2 = m(a[2], m(b[0], c[1]).sub(m(b[1], c[0])));
    t0.sub(t1).add(t2)
}

/// Least `j` with a nonzero degree-`j` Taylor part of `F` at `P`.
pub fn multiplicity(f: &TernaryForm, p: &ProjPoint) -> u32 {
    let (g, _) = taylor_at(f, p);
    g.order().unwrap_or(u32::MAX)
}

/// Tangent cone at `P` and the degree of the field it lives in.
pub fn tangent_cone(f: &TernaryForm, p: &ProjPoint) -> (BinaryForm, u32, usize) {
    let (g, e) = taylor_at(f, p);
    let m = g.order().unwrap_or(0);
    (g.graded(m), m, e)
}

/// True iff the strict transform of `g` (multiplicity `m` at the origin) is
/// smooth at every point over the origin, in both charts.
pub fn one_blowup_resolves_local(g: &BiPoly, m: u32, gf: &Gf) -> bool {
    let ring = PolyRing::new(gf);
    let Ok(chart1) = g.blowup_x_chart(m) else { return false };
    // on X = 0 the chart-1 transform and its partials become polynomials in Z
    let restrict = |p: &BiPoly| -> UniPoly {
        let mut c = vec![Fe::ZERO; 1 + p.terms().map(|(&(_, j), _)| j as usize).max().unwrap_or(0)];
        for (&(i, j), &v) in p.terms() {
            if i == 0 {
                c[j as usize] = v;
            }
        }
        UniPoly::new(c)
    };
    let u = restrict(&chart1);
    let a = restrict(&chart1.dx());
    let b = restrict(&chart1.dy());
    let common = ring.gcd(&ring.gcd(&u, &a), &b);
    if common.is_zero() || common.deg() > 0 {
        return false;
    }
    // the direction X = 0 is only visible in the second chart
    if !g.graded(m).coeffs[m as usize].is_zero() {
        return true;
    }
    let Ok(chart2) = g.blowup_y_chart(m) else { return false };
    !chart2.singular_at_origin()
}

pub fn one_blowup_resolves(f: &TernaryForm, p: &ProjPoint) -> bool {
    let (g, e) = taylor_at(f, p);
    match g.order() {
        Some(m) if m >= 2 => one_blowup_resolves_local(&g, m, tower().field(e)),
        _ => false,
    }
}

/// `b^2 - ac` for `h = aX^2 + bXY + cY^2`.
pub fn discriminant(h: &BinaryForm, gf: &Gf) -> Fe {
    assert_eq!(h.degree(), 2);
    let [a, b, c] = [h.coeffs[0], h.coeffs[1], h.coeffs[2]];
    gf.mul(b, b).sub(gf.mul(a, c))
}

/// `#V(h)(F_{3^e}) - 1` for a nonzero binary form over GF(3^k), `k | e`.
pub fn tangent_adjustment(h: &BinaryForm, k: usize, e: usize) -> Result<i64, SingularityError> {
    if h.is_zero() {
        return Err(SingularityError::ZeroForm);
    }
    assert!(e % k == 0, "tangent cone not defined over GF(3^{e})");
    let t = tower();
    let gf = t.field(e);
    let m = h.degree();
    let coeffs: Vec<Fe> = (0..=m).map(|j| t.embed(h.coeffs[m - j], k, e)).collect();
    let u = UniPoly::new(coeffs);
    let affine = if u.deg() == 0 { 0 } else { PolyRing::new(gf).count_roots(&u, e) };
    let infinity = h.coeffs[0].is_zero() as usize;
    Ok((affine + infinity) as i64 - 1)
}

/// A Frobenius orbit of singular points; `representative` is present when
/// the orbit's field lies in the tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularOrbit {
    pub degree: usize,
    pub representative: Option<ProjPoint>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SingularLocus {
    pub orbits: Vec<SingularOrbit>,
}

impl SingularLocus {
    /// Every materialized point, conjugates included, sorted.
    pub fn points(&self) -> Vec<ProjPoint> {
        let mut out: Vec<ProjPoint> = self
            .orbits
            .iter()
            .filter_map(|o| o.representative)
            .flat_map(|p| p.conjugates())
            .collect();
        out.sort();
        out
    }

    /// Number of geometric points.
    pub fn len(&self) -> usize {
        self.orbits.iter().map(|o| o.degree).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn fully_materialized(&self) -> bool {
        self.orbits.iter().all(|o| o.representative.is_some())
    }
}

type Bivar = Vec<UniPoly>;

/// `F(x, y, 1)` as a polynomial in `y` with coefficients in GF(3)[x].
fn dehomogenize(f: &TernaryForm) -> Bivar {
    let d = f.degree();
    let mut out = vec![vec![Fe::ZERO; d + 1]; d + 1];
    for (e, &c) in f.terms() {
        out[e[1] as usize][e[0] as usize] = c;
    }
    let mut v: Bivar = out.into_iter().map(UniPoly::new).collect();
    while v.len() > 1 && v.last().unwrap().is_zero() {
        v.pop();
    }
    v
}

fn specialize(ring: &PolyRing, f: &Bivar, x0: Fe) -> UniPoly {
    UniPoly::new(f.iter().map(|c| ring.eval(c, x0)).collect())
}

fn is_zero_bivar(f: &Bivar) -> bool {
    f.iter().all(|c| c.is_zero())
}

fn to_u8(p: &UniPoly) -> Vec<u8> {
    p.coeffs.iter().map(|c| c.prime_value()).collect()
}

/// Seed of the coordinate shears tried when an eliminant vanishes.
pub const DEFAULT_SEED: u64 = 0x5167;

/// All singular points of `V(F)` over the algebraic closure, for `F` over GF(3).
pub fn singular_locus(f: &TernaryForm) -> Result<SingularLocus, SingularityError> {
    singular_locus_seeded(f, DEFAULT_SEED)
}

pub fn singular_locus_seeded(f: &TernaryForm, seed: u64) -> Result<SingularLocus, SingularityError> {
    assert_eq!(f.field_degree(), 1, "singular_locus expects a form over GF(3)");
    if f.is_zero() {
        return Err(SingularityError::PositiveDimensionalSingularLocus);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let identity = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let mut m = identity;
    for attempt in 0..6 {
        if attempt > 0 {
            m = random_invertible(&mut rng);
        }
        let g = f.transform(&m);
        if let Some(locus) = locus_in_coordinates(&g)? {
            if m == identity {
                return Ok(locus);
            }
            // points of g map to points of f under v -> M v
            let mu: [[u8; 3]; 3] = m.map(|r| r.map(|v| v.rem_euclid(3) as u8));
            let orbits = locus
                .orbits
                .into_iter()
                .map(|o| SingularOrbit { degree: o.degree, representative: o.representative.map(|p| p.transform(&mu)) })
                .collect();
            return Ok(SingularLocus { orbits });
        }
    }
    Err(SingularityError::PositiveDimensionalSingularLocus)
}

fn random_invertible(rng: &mut ChaCha8Rng) -> [[i64; 3]; 3] {
    let gf = tower().field(1);
    loop {
        let m: [[i64; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| rng.random_range(0..3)));
        let rows = m.map(|r| r.map(Fe::from_i64));
        if !det3(gf, &rows[0], &rows[1], &rows[2]).is_zero() {
            return m;
        }
    }
}

/// `None` when every eliminant vanishes identically (retry after a shear).
fn locus_in_coordinates(f: &TernaryForm) -> Result<Option<SingularLocus>, SingularityError> {
    let gf3 = tower().field(1);
    let ring = PolyRing::new(gf3);
    let fx = f.derivative(0);
    let fy = f.derivative(1);
    let fz = f.derivative(2);
    if fx.is_zero() && fy.is_zero() && fz.is_zero() {
        return Err(SingularityError::PositiveDimensionalSingularLocus);
    }
    let polys = [dehomogenize(f), dehomogenize(&fx), dehomogenize(&fy)];
    let mut eliminant = None;
    for (i, j) in [(1, 2), (0, 1), (0, 2)] {
        if is_zero_bivar(&polys[i]) || is_zero_bivar(&polys[j]) {
            continue;
        }
        if let Ok(r) = resultant(&ring, &polys[i], &polys[j]) {
            if !r.is_zero() {
                eliminant = Some(r);
                break;
            }
        }
    }
    let Some(r) = eliminant else { return Ok(None) };
    let mut orbits = Vec::new();
    if r.deg() > 0 {
        for (p, _) in ring.factor(&r) {
            let d = p.deg();
            if d <= MAX_TOWER_DEGREE {
                let field = tower().field(d);
                let x0 = PolyRing::new(field).roots(&p)[0];
                chart_points(&polys, field, d, x0, &mut orbits)?;
            } else {
                let field = Gf::new(&to_u8(&p)).expect("irreducible factor is a valid modulus");
                let x0 = field.gen();
                chart_points(&polys, &field, d, x0, &mut orbits)?;
            }
        }
    }
    infinity_points(f, &[fx, fy, fz], &mut orbits)?;
    Ok(Some(SingularLocus { orbits }))
}

/// Singular points `(x0 : y : 1)` over one root `x0` of degree `d`.
fn chart_points(polys: &[Bivar; 3], field: &Gf, d: usize, x0: Fe, out: &mut Vec<SingularOrbit>) -> Result<(), SingularityError> {
    let ring = PolyRing::new(field);
    let spec: Vec<UniPoly> = polys.iter().map(|p| specialize(&ring, p, x0)).collect();
    if spec.iter().all(|s| s.is_zero()) {
        return Err(SingularityError::PositiveDimensionalSingularLocus);
    }
    let h = spec.iter().fold(UniPoly::zero(), |acc, s| ring.gcd(&acc, s));
    if h.deg() == 0 {
        return Ok(());
    }
    for (q, _) in ring.factor(&h) {
        let degree = d * q.deg();
        let representative = if degree <= MAX_TOWER_DEGREE && field.degree() == d && d <= MAX_TOWER_DEGREE {
            let t = tower();
            let big = t.field(degree);
            let qe = UniPoly::new(q.coeffs.iter().map(|&c| t.embed(c, d, degree)).collect());
            let y0 = PolyRing::new(big).roots(&qe)[0];
            Some(ProjPoint::new(degree, [t.embed(x0, d, degree), y0, Fe::ONE]).expect("nonzero point"))
        } else {
            None
        };
        out.push(SingularOrbit { degree, representative });
    }
    Ok(())
}

/// Singular points on the line `z = 0`.
fn infinity_points(f: &TernaryForm, partials: &[TernaryForm; 3], out: &mut Vec<SingularOrbit>) -> Result<(), SingularityError> {
    let gf3 = tower().field(1);
    let ring = PolyRing::new(gf3);
    let on_line = |g: &TernaryForm| -> UniPoly {
        let mut c = vec![Fe::ZERO; g.degree() + 1];
        for (e, &v) in g.terms() {
            if e[2] == 0 {
                c[e[0] as usize] = v;
            }
        }
        UniPoly::new(c)
    };
    let all: Vec<&TernaryForm> = std::iter::once(f).chain(partials.iter()).collect();
    let h = all.iter().fold(UniPoly::zero(), |acc, g| ring.gcd(&acc, &on_line(g)));
    if h.is_zero() {
        return Err(SingularityError::PositiveDimensionalSingularLocus);
    }
    if h.deg() > 0 {
        for (q, _) in ring.factor(&h) {
            let d = q.deg();
            let representative = (d <= MAX_TOWER_DEGREE).then(|| {
                let field = tower().field(d);
                let x0 = PolyRing::new(field).roots(&q)[0];
                ProjPoint::new(d, [x0, Fe::ONE, Fe::ZERO]).expect("nonzero point")
            });
            out.push(SingularOrbit { degree: d, representative });
        }
    }
    if all.iter().all(|g| g.coeff([g.degree() as u8, 0, 0]).is_zero()) {
        out.push(SingularOrbit { degree: 1, representative: Some(ProjPoint::rational([1, 0, 0])) });
    }
    Ok(())
}

/// Per-point data reported for a configured singular point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularPointReport {
    pub point: String,
    pub field_degree: usize,
    pub multiplicity: u32,
    pub tangent_cone: String,
    pub discriminant: Option<String>,
    pub resolved_in_one_blowup: bool,
    /// `(e, #V(h)(F_{3^e}) - 1)` for the even `e <= 10` over which the point is rational.
    pub adjustments: Vec<(usize, i64)>,
}

pub fn point_report(f: &TernaryForm, p: &ProjPoint) -> SingularPointReport {
    let (h, m, k) = tangent_cone(f, p);
    let gf = tower().field(k);
    let render_cone = {
        let names = |i: usize| -> String {
            let a = m as usize - i;
            let mut s = String::new();
            if a > 0 {
                s.push('X');
                if a > 1 {
                    s.push_str(&format!("^{a}"));
                }
            }
            if i > 0 {
                s.push('Y');
                if i > 1 {
                    s.push_str(&format!("^{i}"));
                }
            }
            s
        };
        let terms: Vec<String> = h
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| {
                let coef = render_element(FieldElement::new(k, c));
                let mon = names(i);
                match (coef.as_str(), mon.is_empty()) {
                    (_, true) => coef,
                    ("1", false) => mon,
                    _ if coef.len() == 1 => format!("{coef}{mon}"),
                    _ => format!("({coef}){mon}"),
                }
            })
            .collect();
        if terms.is_empty() { "0".to_string() } else { terms.join(" + ") }
    };
    let disc = (m == 2).then(|| render_element(FieldElement::new(k, discriminant(&h, gf))));
    let adjustments = (2..=MAX_TOWER_DEGREE)
        .step_by(2)
        .filter(|e| e % k == 0)
        .filter_map(|e| tangent_adjustment(&h, k, e).ok().map(|a| (e, a)))
        .collect();
    SingularPointReport {
        point: p.render(),
        field_degree: p.field_degree(),
        multiplicity: m,
        tangent_cone: render_cone,
        discriminant: disc,
        resolved_in_one_blowup: m >= 2 && one_blowup_resolves(f, p),
        adjustments,
    }
}

/// The condition of the non-special check that failed.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NonSpecialFailure {
    #[error("multiplicity {found} at {point}, expected {expected}")]
    Multiplicity { point: String, expected: u32, found: u32 },
    #[error("no singular points; not a genus-5 non-special model")]
    NoSingularPoints,
    #[error("singular locus differs from the configuration: {0}")]
    LocusMismatch(String),
    #[error("one blow-up does not resolve {0}")]
    NotResolved(String),
    #[error("sextic is geometrically reducible")]
    Reducible,
    #[error("{0}")]
    Locus(SingularityError),
    #[error("not a sextic over GF(3)")]
    NotSextic,
}

/// Checks, in order: multiplicities, exact singular locus, one-blow-up
/// resolution, geometric irreducibility.
pub fn non_special_check(f: &TernaryForm, config: &SingularConfig) -> Result<(), NonSpecialFailure> {
    non_special_check_with(f, config, true, DEFAULT_SEED)
}

/// The non-special check with the irreducibility condition optional.
pub fn non_special_check_with(
    f: &TernaryForm,
    config: &SingularConfig,
    irreducibility: bool,
    seed: u64,
) -> Result<(), NonSpecialFailure> {
    if f.degree() != 6 || f.field_degree() != 1 || f.is_zero() {
        return Err(NonSpecialFailure::NotSextic);
    }
    for c in &config.points {
        let m = multiplicity(f, &c.point);
        if m != c.multiplicity {
            return Err(NonSpecialFailure::Multiplicity { point: c.point.render(), expected: c.multiplicity, found: m });
        }
    }
    let locus = singular_locus_seeded(f, seed).map_err(NonSpecialFailure::Locus)?;
    if locus.is_empty() {
        return Err(NonSpecialFailure::NoSingularPoints);
    }
    let expected = config.point_set();
    let found: BTreeSet<ProjPoint> = locus.points().into_iter().collect();
    if !locus.fully_materialized() || found != expected {
        let extra: Vec<String> = found.difference(&expected).map(|p| p.render()).collect();
        let unmat: Vec<String> = locus
            .orbits
            .iter()
            .filter(|o| o.representative.is_none())
            .map(|o| format!("orbit of degree {}", o.degree))
            .collect();
        return Err(NonSpecialFailure::LocusMismatch(
            extra.into_iter().chain(unmat).collect::<Vec<_>>().join(", "),
        ));
    }
    for c in &config.points {
        if !one_blowup_resolves(f, &c.point) {
            return Err(NonSpecialFailure::NotResolved(c.point.render()));
        }
    }
    if irreducibility && !crate::point_counting::is_geometrically_irreducible(f) {
        return Err(NonSpecialFailure::Reducible);
    }
    Ok(())
}

pub fn is_non_special(f: &TernaryForm, config: &SingularConfig) -> bool {
    non_special_check(f, config).is_ok()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    fn sextic(s: &str) -> TernaryForm {
        TernaryForm::parse(s, 1).unwrap()
    }

    const EX2: &str = "x^2y^4 + x^4yz + 2y^4z^2 + x^2z^4 + 2y^2z^4";

    #[test]
    fn multiplicity_examples() {
        assert_eq!(multiplicity(&sextic("x^4y^2"), &ProjPoint::rational([0, 0, 1])), 6);
        let f = sextic(EX2);
        assert_eq!(multiplicity(&f, &ProjPoint::rational([1, 0, 0])), 2);
        assert_eq!(multiplicity(&f, &ProjPoint::rational([1, 1, 1])), 0);
    }

    #[test]
    fn local_blowups() {
        let gf = tower().field(1);
        assert!(one_blowup_resolves_local(&BiPoly::from_ints(&[((1, 1), 1)]), 2, gf));
        assert!(one_blowup_resolves_local(&BiPoly::from_ints(&[((0, 2), 1), ((3, 0), -1)]), 2, gf));
        assert!(!one_blowup_resolves_local(&BiPoly::from_ints(&[((0, 2), 1), ((4, 0), -1)]), 2, gf));
        // tangent X = 0 only shows in the second chart
        assert!(one_blowup_resolves_local(&BiPoly::from_ints(&[((2, 0), 1), ((0, 3), -1)]), 2, gf));
        assert!(!one_blowup_resolves_local(&BiPoly::from_ints(&[((2, 0), 1), ((0, 4), -1)]), 2, gf));
        // ordinary triple point
        assert!(one_blowup_resolves_local(&BiPoly::from_ints(&[((3, 0), 1), ((0, 3), 1), ((1, 2), 1), ((4, 0), 1)]), 3, gf));
    }

    #[test]
    fn tangent_adjustment_examples() {
        let h = |c: [i64; 3]| BinaryForm { coeffs: c.iter().map(|&v| Fe::from_i64(v)).collect() };
        assert_eq!(tangent_adjustment(&h([0, 1, 0]), 1, 1), Ok(1));
        assert_eq!(tangent_adjustment(&h([0, 1, 0]), 1, 2), Ok(1));
        assert_eq!(tangent_adjustment(&h([1, 0, 1]), 1, 1), Ok(-1));
        assert_eq!(tangent_adjustment(&h([1, 0, 1]), 1, 2), Ok(1));
        assert_eq!(tangent_adjustment(&h([1, 0, 0]), 1, 1), Ok(0));
        assert_eq!(tangent_adjustment(&h([0, 0, 0]), 1, 1), Err(SingularityError::ZeroForm));
    }

    #[test]
    fn tangent_adjustment_matches_discriminant() {
        for e in 1..=3 {
            let gf = tower().field(e);
            for a in gf.elements().take(9) {
                for b in gf.elements().take(9) {
                    for c in gf.elements().take(9) {
                        let h = BinaryForm { coeffs: vec![a, b, c] };
                        if h.is_zero() {
                            continue;
                        }
                        let d = discriminant(&h, gf);
                        let expect = if d.is_zero() { 0 } else if gf.is_square(d) { 1 } else { -1 };
                        assert_eq!(tangent_adjustment(&h, e, e).unwrap(), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn locus_of_paper_example_two() {
        let locus = singular_locus(&sextic(EX2)).unwrap();
        let got: Vec<String> = locus.points().iter().map(|p| p.render()).collect();
        let mut want: Vec<ProjPoint> = ["(1:0:0)", "(0:1:0)", "(0:0:1)", "(1:ζ2^2:ζ2^2)", "(1:ζ2^6:ζ2^6)"]
            .iter()
            .map(|s| ProjPoint::parse(s, 2).unwrap())
            .collect();
        want.sort();
        assert_eq!(locus.points(), want, "{got:?}");
    }

    #[test]
    fn non_reduced_sextic_is_rejected() {
        let f = sextic("x^6 + y^6 + z^6");
        assert_eq!(singular_locus(&f), Err(SingularityError::PositiveDimensionalSingularLocus));
    }

    #[test]
    fn locus_matches_brute_force_scan() {
        // conic times quartic: singular at the 8 intersection points
        let f = sextic("x^2 + y^2 - z^2").mul(&sextic("x^4 + xy^3 + y^3z + z^4 + x^2yz"));
        let locus = singular_locus(&f).unwrap();
        for e in 1..=4 {
            let gf = tower().field(e);
            let mut scan = BTreeSet::new();
            for p in projective_points(e) {
                let c = p;
                let vals = [f.eval(&c, e), f.derivative(0).eval(&c, e), f.derivative(1).eval(&c, e), f.derivative(2).eval(&c, e)];
                if vals.iter().all(|v| v.is_zero()) {
                    scan.insert(ProjPoint::new(e, c).unwrap());
                }
            }
            let _ = gf;
            let from_locus: BTreeSet<ProjPoint> = locus.points().into_iter().filter(|p| e % p.field_degree() == 0).collect();
            assert_eq!(scan, from_locus, "e = {e}");
        }
        assert_eq!(locus.len(), 8);
    }

    pub(crate) fn projective_points(e: usize) -> Vec<[Fe; 3]> {
        let gf = tower().field(e);
        let mut out = Vec::new();
        for a in gf.elements() {
            for b in gf.elements() {
                out.push([a, b, Fe::ONE]);
            }
            out.push([a, Fe::ONE, Fe::ZERO]);
        }
        out.push([Fe::ONE, Fe::ZERO, Fe::ZERO]);
        out
    }
}
