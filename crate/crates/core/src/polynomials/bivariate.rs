//! Affine polynomials in two variables, Taylor expansion of ternary forms at
//! a point, and the two charts of a point blow-up.

use std::collections::BTreeMap;

use crate::field_tower::{tower, Fe, Gf};

use super::form::{lcm, TernaryForm};
use super::point::ProjPoint;
use super::PolyError;

/// Sparse polynomial in two variables; key `(i, j)` is the monomial `X^i Y^j`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Fe>,
}

/// Binary form of degree `m`: `coeffs[i]` multiplies `X^(m-i) Y^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    pub coeffs: Vec<Fe>,
}

impl BinaryForm {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), Fe)>>(terms: I) -> Self {
        let mut p = BiPoly::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Polynomial with GF(3) coefficients given as integers.
    pub fn from_ints(terms: &[((u32, u32), i64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(e, c)| (e, Fe::from_i64(c))))
    }

    pub fn add_term(&mut self, e: (u32, u32), c: Fe) {
        let v = self.coeff(e).add(c);
        if v.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, v);
        }
    }

    pub fn coeff(&self, e: (u32, u32)) -> Fe {
        self.terms.get(&e).copied().unwrap_or(Fe::ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Fe)> + '_ {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest total degree of a nonzero term (the multiplicity at the origin).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).min()
    }

    /// Homogeneous piece of total degree `d`.
    pub fn graded(&self, d: u32) -> BinaryForm {
        BinaryForm {
            coeffs: (0..=d).map(|j| self.coeff((d - j, j))).collect(),
        }
    }

    pub fn mul(&self, other: &BiPoly, gf: &Gf) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(a, b), &c) in &self.terms {
            for (&(d, e), &f) in &other.terms {
                out.add_term((a + d, b + e), gf.mul(c, f));
            }
        }
        out
    }

    pub fn eval(&self, x: Fe, y: Fe, gf: &Gf) -> Fe {
        self.terms.iter().fold(Fe::ZERO, |acc, (&(i, j), &c)| {
            acc.add(gf.mul(c, gf.mul(gf.pow(x, i as u64), gf.pow(y, j as u64))))
        })
    }

    pub fn dx(&self) -> BiPoly {
        BiPoly::from_terms(
            self.terms
                .iter()
                .filter(|((i, _), _)| i % 3 != 0)
                .map(|(&(i, j), &c)| ((i - 1, j), c.scale((i % 3) as u8))),
        )
    }

    pub fn dy(&self) -> BiPoly {
        BiPoly::from_terms(
            self.terms
                .iter()
                .filter(|((_, j), _)| j % 3 != 0)
                .map(|(&(i, j), &c)| ((i, j - 1), c.scale((j % 3) as u8))),
        )
    }

    /// True iff the origin lies on the curve and is a singular point of it.
    pub fn singular_at_origin(&self) -> bool {
        self.coeff((0, 0)).is_zero() && self.coeff((1, 0)).is_zero() && self.coeff((0, 1)).is_zero()
    }

    /// First chart of the blow-up, `G(X, ZX) / X^m`, returned in variables `(X, Z)`.
    pub fn blowup_x_chart(&self, m: u32) -> Result<BiPoly, PolyError> {
        let mut out = BiPoly::zero();
        for (&(i, j), &c) in &self.terms {
            if i + j < m {
                return Err(PolyError::BlowupOrder { order: self.order().unwrap_or(0), m });
            }
            out.add_term((i + j - m, j), c);
        }
        Ok(out)
    }

    /// Second chart, `G(ZY, Y) / Y^m`, returned in variables `(Z, Y)`.
    pub fn blowup_y_chart(&self, m: u32) -> Result<BiPoly, PolyError> {
        let mut out = BiPoly::zero();
        for (&(i, j), &c) in &self.terms {
            if i + j < m {
                return Err(PolyError::BlowupOrder { order: self.order().unwrap_or(0), m });
            }
            out.add_term((i, i + j - m), c);
        }
        Ok(out)
    }
}

/// Taylor expansion of `f` at `p`.
///
/// With `k` the first nonzero coordinate of `p` (normalized to 1), the other
/// two slots become `p_i + X` and `p_j + Y` in index order, so the degree-`d`
/// piece of the result is the degree-`d` Taylor part at `p`. The result lives
/// in GF(3^e) for the returned `e = lcm(deg f, deg p)`.
pub fn taylor_at(f: &TernaryForm, p: &ProjPoint) -> (BiPoly, usize) {
    let e = lcm(f.field_degree(), p.field_degree());
    assert!(e <= crate::field_tower::MAX_TOWER_DEGREE, "expansion field outside the tower");
    let t = tower();
    let gf = t.field(e);
    let coords = p.coords_in(e);
    let k = p.chart();
    let free: Vec<usize> = (0..3).filter(|&i| i != k).collect();
    let deg = f.degree();
    // binomial expansions (c + T)^n for the two free slots
    let expand = |c: Fe| -> Vec<Vec<Fe>> {
        let mut rows: Vec<Vec<Fe>> = vec![vec![Fe::ONE]];
        for n in 1..=deg {
            let prev = &rows[n - 1];
            let mut row = vec![Fe::ZERO; n + 1];
            for (i, &v) in prev.iter().enumerate() {
                row[i] = row[i].add(gf.mul(v, c));
                row[i + 1] = row[i + 1].add(v);
            }
            rows.push(row);
        }
        rows
    };
    let ex = expand(coords[free[0]]);
    let ey = expand(coords[free[1]]);
    let mut out = BiPoly::zero();
    for (exps, &c) in f.terms() {
        let c = t.embed(c, f.field_degree(), e);
        // the chart slot is 1, so its power contributes nothing
        let a = exps[free[0]] as usize;
        let b = exps[free[1]] as usize;
        for (i, &u) in ex[a].iter().enumerate() {
            if u.is_zero() {
                continue;
            }
            let cu = gf.mul(c, u);
            for (j, &v) in ey[b].iter().enumerate() {
                if !v.is_zero() {
                    out.add_term((i as u32, j as u32), gf.mul(cu, v));
                }
            }
        }
    }
    (out, e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn taylor_examples() {
        let f = TernaryForm::parse("x^4y^2", 1).unwrap();
        let (g, _) = taylor_at(&f, &ProjPoint::rational([0, 0, 1]));
        assert_eq!(g.order(), Some(6));
        assert_eq!(g, BiPoly::from_ints(&[((4, 2), 1)]));

        let f = TernaryForm::parse("x^2y^4 + x^4yz + 2y^4z^2 + x^2z^4 + 2y^2z^4", 1).unwrap();
        let (g, _) = taylor_at(&f, &ProjPoint::rational([1, 0, 0]));
        assert_eq!(g.order(), Some(2));
        // also at the GF(9) points (1:ζ²:ζ²) and its conjugate
        for p in ["(1:ζ^2:ζ^2)", "(1:ζ^6:ζ^6)"] {
            let (g, e) = taylor_at(&f, &ProjPoint::parse(p, 2).unwrap());
            assert_eq!(e, 2);
            assert_eq!(g.order(), Some(2), "{p}");
        }
    }

    #[test]
    fn taylor_matches_evaluation_at_shifted_points() {
        let f = TernaryForm::parse("x^3y + 2xz^3 + y^2z^2 + x^4", 1).unwrap();
        let p = ProjPoint::parse("(1:ζ^3:ζ)", 2).unwrap();
        let (g, e) = taylor_at(&f, &p);
        let gf = tower().field(e);
        for a in gf.elements().take(9) {
            for b in gf.elements().skip(3).take(5) {
                let c = p.coords_in(e);
                let q = [Fe::ONE, c[1].add(a), c[2].add(b)];
                assert_eq!(g.eval(a, b, gf), f.eval(&q, e));
            }
        }
    }

    #[test]
    fn blowup_examples() {
        // cusp Y^2 - X^3 -> Z^2 - X
        let cusp = BiPoly::from_ints(&[((0, 2), 1), ((3, 0), -1)]);
        let t = cusp.blowup_x_chart(2).unwrap();
        assert_eq!(t, BiPoly::from_ints(&[((0, 2), 1), ((1, 0), -1)]));
        assert!(!t.singular_at_origin());
        // node XY -> Z
        let node = BiPoly::from_ints(&[((1, 1), 1)]);
        assert_eq!(node.blowup_x_chart(2).unwrap(), BiPoly::from_ints(&[((0, 1), 1)]));
        // tacnode Y^2 - X^4 -> Z^2 - X^2, still singular
        let tac = BiPoly::from_ints(&[((0, 2), 1), ((4, 0), -1)]);
        let t = tac.blowup_x_chart(2).unwrap();
        assert_eq!(t, BiPoly::from_ints(&[((0, 2), 1), ((2, 0), -1)]));
        assert!(t.singular_at_origin());
        assert!(matches!(cusp.blowup_x_chart(3), Err(PolyError::BlowupOrder { .. })));
        // re-substitution: G~(X, Y/X) X^m = G(X, Y), checked at points with X != 0
        let g9 = tower().field(2);
        let g = BiPoly::from_ints(&[((0, 2), 1), ((3, 0), 2), ((2, 1), 1), ((1, 3), 1)]);
        let t = g.blowup_x_chart(2).unwrap();
        for x in g9.elements().skip(1) {
            for y in g9.elements() {
                let lhs = g9.mul(t.eval(x, g9.div(y, x).unwrap(), g9), g9.mul(x, x));
                assert_eq!(lhs, g.eval(x, y, g9));
            }
        }
    }
}
