//! Row reduction and null spaces over GF(3^k), including descent of a
//! Frobenius-stable null space to a GF(3) basis.

use std::fmt;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::field_tower::{tower, Fe, Gf};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("echelon entry ({row}, {col}) lies outside GF(3); the system is not Frobenius-stable")]
    NotRational { row: usize, col: usize },
    #[error("bad null basis table: {0}")]
    Parse(String),
}

/// Dense row-major matrix over GF(3^k).
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    pub field_degree: usize,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Fe>,
}

impl Matrix {
    pub fn zero(field_degree: usize, rows: usize, cols: usize) -> Self {
        Matrix { field_degree, rows, cols, entries: vec![Fe::ZERO; rows * cols] }
    }

    pub fn identity(field_degree: usize, n: usize) -> Self {
        let mut m = Self::zero(field_degree, n, n);
        for i in 0..n {
            m.set(i, i, Fe::ONE);
        }
        m
    }

    pub fn from_rows(field_degree: usize, rows: Vec<Vec<Fe>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Matrix { field_degree, rows: rows.len(), cols, entries: rows.concat() }
    }

    fn gf(&self) -> &'static Gf {
        tower().field(self.field_degree)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Fe) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Fe] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    /// Entrywise Frobenius.
    pub fn frobenius(&self) -> Matrix {
        let gf = self.gf();
        Matrix {
            entries: self.entries.iter().map(|&e| gf.frobenius(e, 1)).collect(),
            ..self.clone()
        }
    }

    /// `M v` for a vector over the same field.
    pub fn apply(&self, v: &[Fe]) -> Vec<Fe> {
        let gf = self.gf();
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(Fe::ZERO, |acc, (&a, &b)| acc.add(gf.mul(a, b)))
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        reduced_echelon(self).1.len()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over GF(3^{})", self.rows, self.cols, self.field_degree)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form (zero rows dropped) and its pivot columns.
pub fn reduced_echelon(m: &Matrix) -> (Matrix, Vec<usize>) {
    let gf = m.gf();
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..a.cols {
                let t = a.get(p, j);
                a.set(p, j, a.get(r, j));
                a.set(r, j, t);
            }
        }
        let inv = gf.inv(a.get(r, c));
        for j in c..a.cols {
            a.set(r, j, gf.mul(a.get(r, j), inv));
        }
        for i in 0..a.rows {
            if i == r {
                continue;
            }
            let f = a.get(i, c);
            if f.is_zero() {
                continue;
            }
            for j in c..a.cols {
                let v = a.get(i, j).sub(gf.mul(f, a.get(r, j)));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.entries.truncate(r * a.cols);
    a.rows = r;
    (a, pivots)
}

/// Basis of the right null space, itself in reduced echelon form.
pub fn nullspace(m: &Matrix) -> Vec<Vec<Fe>> {
    let (e, pivots) = reduced_echelon(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    let basis: Vec<Vec<Fe>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![Fe::ZERO; m.cols];
            v[f] = Fe::ONE;
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = e.get(i, f).neg();
            }
            v
        })
        .collect();
    if basis.is_empty() {
        return basis;
    }
    let (b, _) = reduced_echelon(&Matrix::from_rows(m.field_degree, basis));
    (0..b.rows).map(|i| b.row(i).to_vec()).collect()
}

/// GF(3)-basis of the null space of a Frobenius-stable system: `dim`
/// vectors of digits in reduced echelon form, pivots ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NullBasis {
    pub cols: usize,
    pub vectors: Vec<Vec<u8>>,
}

impl NullBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// One line of digits per vector.
    pub fn to_table(&self) -> String {
        self.vectors
            .iter()
            .map(|v| v.iter().map(|d| char::from(b'0' + d)).collect::<String>())
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn from_table(text: &str) -> Result<NullBasis, LinalgError> {
        let vectors: Vec<Vec<u8>> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.bytes()
                    .map(|b| match b {
                        b'0'..=b'2' => Ok(b - b'0'),
                        _ => Err(LinalgError::Parse(l.to_string())),
                    })
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        let cols = vectors.first().map_or(0, Vec::len);
        if vectors.iter().any(|v| v.len() != cols) {
            return Err(LinalgError::Parse("ragged table".into()));
        }
        Ok(NullBasis { cols, vectors })
    }

    /// Hex SHA-256 of the digit table.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_table().as_bytes()))
    }

    /// `Σ v_j b_j` for GF(3) digits `v`.
    pub fn combine(&self, v: &[u8]) -> Vec<u8> {
        let mut out = vec![0u8; self.cols];
        for (&c, b) in v.iter().zip(&self.vectors) {
            if c == 0 {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(b) {
                *o = (*o + c * x) % 3;
            }
        }
        out
    }
}

/// Null space of `m` descended to GF(3): reduce over GF(3^k), require every
/// echelon entry to lie in GF(3), and read the basis off directly.
pub fn galois_descent_nullspace(m: &Matrix) -> Result<NullBasis, LinalgError> {
    let (e, _) = reduced_echelon(m);
    for r in 0..e.rows {
        for c in 0..e.cols {
            if !e.get(r, c).in_prime_field() {
                return Err(LinalgError::NotRational { row: r, col: c });
            }
        }
    }
    let rational = Matrix {
        field_degree: 1,
        ..e
    };
    let vectors = nullspace(&rational)
        .into_iter()
        .map(|v| v.into_iter().map(Fe::prime_value).collect())
        .collect();
    Ok(NullBasis { cols: m.cols, vectors })
}
