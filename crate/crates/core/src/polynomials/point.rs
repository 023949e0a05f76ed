use std::fmt;

use crate::field_tower::{parse_element, render_element, tower, Fe, FieldElement};

use super::form::lcm;
use super::PolyError;

/// A point of P^2 over GF(3^k): first nonzero coordinate 1, stored over the
/// smallest tower field containing its coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    field_degree: usize,
    coords: [Fe; 3],
}

impl ProjPoint {
    /// Normalizes and descends `coords` (given in GF(3^k)).
    pub fn new(k: usize, coords: [Fe; 3]) -> Result<ProjPoint, PolyError> {
        let t = tower();
        let gf = t.try_field(k).map_err(|e| PolyError::Parse(e.to_string()))?;
        let lead = coords.iter().copied().find(|c| !c.is_zero()).ok_or(PolyError::ZeroPoint)?;
        let inv = gf.inv(lead);
        let scaled = coords.map(|c| gf.mul(c, inv));
        let d = scaled.iter().map(|&c| gf.element_degree(c)).fold(1, lcm);
        let coords = scaled.map(|c| t.descend(c, k, d).expect("coordinate lies in its own field"));
        Ok(ProjPoint { field_degree: d, coords })
    }

    /// Point with GF(3) coordinates.
    pub fn rational(c: [i64; 3]) -> ProjPoint {
        ProjPoint::new(1, c.map(Fe::from_i64)).expect("nonzero point")
    }

    /// Degree of the smallest field of definition.
    pub fn field_degree(&self) -> usize {
        self.field_degree
    }

    pub fn coords(&self) -> [Fe; 3] {
        self.coords
    }

    /// Coordinates inside GF(3^m), `field_degree | m`.
    pub fn coords_in(&self, m: usize) -> [Fe; 3] {
        let t = tower();
        self.coords.map(|c| t.embed(c, self.field_degree, m))
    }

    /// Index of the first nonzero coordinate (which equals 1).
    pub fn chart(&self) -> usize {
        self.coords.iter().position(|c| !c.is_zero()).unwrap()
    }

    pub fn frobenius(&self, times: usize) -> ProjPoint {
        let gf = tower().field(self.field_degree);
        ProjPoint {
            field_degree: self.field_degree,
            coords: self.coords.map(|c| gf.frobenius(c, times)),
        }
    }

    /// The Frobenius orbit, starting with `self`; its length is the field degree.
    pub fn conjugates(&self) -> Vec<ProjPoint> {
        (0..self.field_degree).map(|i| self.frobenius(i)).collect()
    }

    /// Image under a 3x3 matrix over GF(3).
    pub fn transform(&self, m: &[[u8; 3]; 3]) -> ProjPoint {
        let c: [Fe; 3] = std::array::from_fn(|r| {
            (0..3).fold(Fe::ZERO, |acc, j| acc.add(self.coords[j].scale(m[r][j])))
        });
        ProjPoint::new(self.field_degree, c).expect("invertible matrix")
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|&c| render_element(FieldElement::new(self.field_degree, c)))
            .collect();
        format!("({})", parts.join(":"))
    }

    /// Parses `(a:b:c)`; bare `ζ^e` is read in GF(3^default_degree).
    pub fn parse(text: &str, default_degree: usize) -> Result<ProjPoint, PolyError> {
        let s = text.trim();
        let inner = s
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| PolyError::Parse(text.to_string()))?;
        let parts: Vec<&str> = inner.split(':').collect();
        if parts.len() != 3 {
            return Err(PolyError::Parse(text.to_string()));
        }
        let elems = parts
            .iter()
            .map(|p| parse_element(p, default_degree).map_err(|e| PolyError::Parse(e.to_string())))
            .collect::<Result<Vec<FieldElement>, _>>()?;
        let k = elems.iter().fold(1, |a, e| lcm(a, e.degree as usize));
        if k > crate::field_tower::MAX_TOWER_DEGREE {
            return Err(PolyError::Parse(text.to_string()));
        }
        let t = tower();
        let coords: [Fe; 3] = std::array::from_fn(|i| t.embed(elems[i].value, elems[i].degree as usize, k));
        ProjPoint::new(k, coords)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_and_descent() {
        let gf = tower().field(2);
        let z = gf.gen();
        // (ζ : ζ : 2ζ) = (1 : 1 : 2), a GF(3)-point
        let p = ProjPoint::new(2, [z, z, gf.mul(z, Fe::TWO)]).unwrap();
        assert_eq!(p.field_degree(), 1);
        assert_eq!(p, ProjPoint::rational([1, 1, 2]));
        assert_eq!(ProjPoint::new(1, [Fe::ZERO; 3]), Err(PolyError::ZeroPoint));
        let q = ProjPoint::parse("(1:ζ^2:ζ^2)", 2).unwrap();
        assert_eq!(q.field_degree(), 2);
        assert_eq!(q.render(), "(1:ζ2^2:ζ2^2)");
        assert_eq!(q.conjugates()[1], ProjPoint::parse("(1:ζ^6:ζ^6)", 2).unwrap());
        assert_eq!(ProjPoint::parse(&q.render(), 1).unwrap(), q);
    }
}
