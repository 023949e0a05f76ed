//! Sylvester resultants of polynomials in `t` with coefficients in K[u].

use crate::field_tower::Fe;

use super::uni::{PolyRing, UniPoly};
use super::PolyError;

/// Polynomial in `t` whose coefficients (lowest first) are polynomials in `u`.
pub type PolyOverPoly = Vec<UniPoly>;

fn t_degree(f: &[UniPoly]) -> Option<usize> {
    f.iter().rposition(|c| !c.is_zero())
}

/// `Res_t(f, g)` as the determinant of the Sylvester matrix, with rows of
/// `f` first. Computed fraction-free (Bareiss), so only exact divisions in
/// K[u] occur.
pub fn resultant(ring: &PolyRing, f: &[UniPoly], g: &[UniPoly]) -> Result<UniPoly, PolyError> {
    let (Some(m), Some(n)) = (t_degree(f), t_degree(g)) else {
        return Err(PolyError::ConstantInputs);
    };
    if m == 0 && n == 0 {
        return Err(PolyError::ConstantInputs);
    }
    let size = m + n;
    let mut mat = vec![vec![UniPoly::zero(); size]; size];
    // row i of f's block holds f shifted by i, highest coefficient first
    for i in 0..n {
        for j in 0..=m {
            mat[i][i + j] = f[m - j].clone();
        }
    }
    for i in 0..m {
        for j in 0..=n {
            mat[n + i][i + j] = g[n - j].clone();
        }
    }
    Ok(bareiss_det(ring, mat))
}

/// Determinant over K[u] by fraction-free elimination.
pub fn bareiss_det(ring: &PolyRing, mut a: Vec<Vec<UniPoly>>) -> UniPoly {
    let n = a.len();
    if n == 0 {
        return UniPoly::constant(Fe::ONE);
    }
    let mut negate = false;
    let mut prev = UniPoly::constant(Fe::ONE);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return UniPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = ring.sub(&ring.mul(&a[i][j], &a[k][k]), &ring.mul(&a[i][k], &a[k][j]));
                a[i][j] = ring.div_exact(&num, &prev);
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        ring.scale(&d, Fe::TWO)
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_tower::tower;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(v: i64) -> UniPoly {
        UniPoly::from_ints(&[v])
    }

    #[test]
    fn small_resultants() {
        let r = PolyRing::new(tower().field(1));
        let u = UniPoly::from_ints(&[0, 1]);
        // Res_t(t^2 - u, t - 1) = 1 - u
        let f = vec![r.scale(&u, Fe::TWO), c(0), c(1)];
        let g = vec![c(-1), c(1)];
        assert_eq!(resultant(&r, &f, &g).unwrap(), UniPoly::from_ints(&[1, -1]));
        // Res_t(t - a, t - b) = a - b for the Sylvester determinant
        let a = UniPoly::from_ints(&[0, 1]);
        let b = UniPoly::from_ints(&[1]);
        let res = resultant(&r, &[r.scale(&a, Fe::TWO), c(1)], &[r.scale(&b, Fe::TWO), c(1)]).unwrap();
        assert_eq!(res, r.sub(&a, &b));
        // Res(f, f) = 0
        let f = vec![u.clone(), c(1), c(2), c(1)];
        assert!(resultant(&r, &f, &f).unwrap().is_zero());
        assert_eq!(resultant(&r, &[c(1)], &[c(2)]), Err(PolyError::ConstantInputs));
    }

    #[test]
    fn vanishes_exactly_at_common_roots() {
        // specialize u and compare with gcd over GF(9)
        let gf = tower().field(2);
        let r = PolyRing::new(gf);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let rand_poly = |rng: &mut ChaCha8Rng, d: usize| -> UniPoly {
                UniPoly::new((0..=d).map(|_| gf.random(rng)).collect())
            };
            let f: Vec<UniPoly> = (0..3)
                .map(|_| {
                    let d = rng.random_range(0..3);
                    rand_poly(&mut rng, d)
                })
                .chain([c(1)])
                .collect();
            let g: Vec<UniPoly> = (0..2).map(|_| rand_poly(&mut rng, 2)).chain([c(1)]).collect();
            let res = resultant(&r, &f, &g).unwrap();
            for u0 in gf.elements() {
                let fs = UniPoly::new(f.iter().map(|p| r.eval(p, u0)).collect());
                let gs = UniPoly::new(g.iter().map(|p| r.eval(p, u0)).collect());
                let common = r.gcd(&fs, &gs).deg() > 0;
                assert_eq!(r.eval(&res, u0).is_zero(), common);
            }
        }
    }
}
