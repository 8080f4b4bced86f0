//! Scalars, vectors and small dense matrices over the real or complex field.
//!
//! Everything is stored as `Complex64`; a real space simply never carries a
//! non-zero imaginary part. The duality pairing is bilinear,
//! `<f, x> = sum_i f_i x_i`, while the inner product conjugates its first slot,
//! `(x, y) = sum_i conj(x_i) y_i`.

use std::fmt;

use num_complex::Complex64;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type Vector = Vec<C64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    /// Number of real parameters per scalar.
    pub fn real_dim(self) -> usize {
        match self {
            Field::Real => 1,
            Field::Complex => 2,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Real => write!(f, "real"),
            Field::Complex => write!(f, "complex"),
        }
    }
}

pub fn real_vector(xs: &[f64]) -> Vector {
    xs.iter().map(|&x| C64::new(x, 0.0)).collect()
}

pub fn basis_vector(n: usize, i: usize) -> Vector {
    let mut v = vec![ZERO; n];
    v[i] = ONE;
    v
}

pub fn is_real(v: &[C64]) -> bool {
    v.iter().all(|z| z.im == 0.0)
}

pub fn is_zero(v: &[C64]) -> bool {
    v.iter().all(|z| z.re == 0.0 && z.im == 0.0)
}

pub fn all_finite(v: &[C64]) -> bool {
    v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Bilinear duality pairing `<f, x>`.
pub fn pair(f: &[C64], x: &[C64]) -> C64 {
    f.iter().zip(x).map(|(a, b)| a * b).sum()
}

/// Standard inner product, conjugate-linear in the first slot.
pub fn inner(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub fn euclid_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_modulus(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn scale(v: &[C64], s: C64) -> Vector {
    v.iter().map(|z| z * s).collect()
}

pub fn scale_real(v: &[C64], s: f64) -> Vector {
    v.iter().map(|z| z * s).collect()
}

pub fn add(a: &[C64], b: &[C64]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[C64], b: &[C64]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `a + s * b`
pub fn axpy(a: &[C64], s: C64, b: &[C64]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

pub fn conj(v: &[C64]) -> Vector {
    v.iter().map(|z| z.conj()).collect()
}

/// Real coordinates of `v` in the order `re_0, im_0, re_1, ...` (complex) or
/// `re_0, re_1, ...` (real).
pub fn to_real_params(v: &[C64], field: Field) -> Vec<f64> {
    match field {
        Field::Real => v.iter().map(|z| z.re).collect(),
        Field::Complex => v.iter().flat_map(|z| [z.re, z.im]).collect(),
    }
}

pub fn from_real_params(p: &[f64], field: Field) -> Vector {
    match field {
        Field::Real => real_vector(p),
        Field::Complex => p.chunks(2).map(|c| C64::new(c[0], c[1])).collect(),
    }
}

pub fn check_field(v: &[C64], field: Field) -> Result<()> {
    if field == Field::Real && !is_real(v) {
        return Err(Error::FieldMismatch);
    }
    Ok(())
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::InvalidSpec("matrix has no rows".into()));
        }
        let c = rows[0].len();
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidSpec("ragged matrix rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.concat() })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vector> = rows.iter().map(|r| real_vector(r)).collect();
        Matrix::from_rows(&rows)
    }

    pub fn diag_real(d: &[f64]) -> Self {
        let mut m = Matrix::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    /// Interprets a vector of length `n*n` as a row-major `n x n` matrix.
    pub fn from_flat(n: usize, v: &[C64]) -> Self {
        assert_eq!(v.len(), n * n);
        Matrix { rows: n, cols: n, data: v.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_real(&self) -> bool {
        is_real(&self.data)
    }

    pub fn all_finite(&self) -> bool {
        all_finite(&self.data)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn conj(&self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: conj(&self.data) }
    }

    pub fn adjoint(&self) -> Matrix {
        self.transpose().conj()
    }

    pub fn scaled(&self, s: C64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: scale(&self.data, s) }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix { rows: self.rows, cols: self.cols, data: add(&self.data, &other.data) }
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vector {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| pair(self.row(i), v)).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// `x^H M y`
    pub fn form(&self, x: &[C64], y: &[C64]) -> C64 {
        inner(x, &self.mul_vec(y))
    }

    pub fn max_abs(&self) -> f64 {
        max_modulus(&self.data)
    }

    pub fn frobenius(&self) -> f64 {
        euclid_norm(&self.data)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

// JSON form: a real scalar is a bare number, a complex one is `[re, im]`.

#[derive(Deserialize)]
#[serde(untagged)]
enum ScalarRepr {
    Real(f64),
    Pair([f64; 2]),
}

impl From<ScalarRepr> for C64 {
    fn from(r: ScalarRepr) -> C64 {
        match r {
            ScalarRepr::Real(x) => C64::new(x, 0.0),
            ScalarRepr::Pair([re, im]) => C64::new(re, im),
        }
    }
}

struct ScalarOut(C64);

impl Serialize for ScalarOut {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.im == 0.0 {
            s.serialize_f64(self.0.re)
        } else {
            [self.0.re, self.0.im].serialize(s)
        }
    }
}

/// Serde adapter for `Vector` fields.
pub mod vector_serde {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[C64], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for z in v {
            seq.serialize_element(&ScalarOut(*z))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vector, D::Error> {
        let raw: Vec<ScalarRepr> = Vec::deserialize(d)?;
        Ok(raw.into_iter().map(C64::from).collect())
    }
}

/// Serde adapter for `Option<Vector>` fields.
pub mod opt_vector_serde {
    use super::*;

    pub fn serialize<S: Serializer>(
        v: &Option<Vector>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(v) => {
                let out: Vec<ScalarOut> = v.iter().map(|z| ScalarOut(*z)).collect();
                s.serialize_some(&out)
            }
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Vector>, D::Error> {
        let raw: Option<Vec<ScalarRepr>> = Option::deserialize(d)?;
        Ok(raw.map(|r| r.into_iter().map(C64::from).collect()))
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            let row: Vec<ScalarOut> = self.row(i).iter().map(|z| ScalarOut(*z)).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<Vec<ScalarRepr>> = Vec::deserialize(d)?;
        let rows: Vec<Vector> = raw
            .into_iter()
            .map(|r| r.into_iter().map(C64::from).collect())
            .collect();
        Matrix::from_rows(&rows).map_err(de::Error::custom)
    }
}

/// Parses `1,2,3` or `[1,0],[0,1]` into a vector.
pub fn parse_vector(s: &str) -> Result<Vector> {
    let s = s.trim();
    if s.contains('[') {
        let wrapped = format!("[{s}]");
        let raw: Vec<ScalarRepr> =
            serde_json::from_str(&wrapped).map_err(|e| Error::Parse(e.to_string()))?;
        return Ok(raw.into_iter().map(C64::from).collect());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map(|x| C64::new(x, 0.0))
                .map_err(|e| Error::Parse(format!("`{}`: {e}", t.trim())))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_real_and_complex_vectors() {
        assert_eq!(parse_vector("1, 2,-3").unwrap(), real_vector(&[1.0, 2.0, -3.0]));
        let z = parse_vector("[1,2],[0,-1]").unwrap();
        assert_eq!(z, vec![C64::new(1.0, 2.0), C64::new(0.0, -1.0)]);
        assert!(parse_vector("1,x").is_err());
    }

    #[test]
    fn matrix_json_mixes_real_and_pairs() {
        let m: Matrix = serde_json::from_str("[[1,[0,2]],[[0,-2],3]]").unwrap();
        assert_eq!(m[(0, 1)], C64::new(0.0, 2.0));
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, "[[1.0,[0.0,2.0]],[[0.0,-2.0],3.0]]");
        assert!(serde_json::from_str::<Matrix>("[[1,2],[3]]").is_err());
    }

    #[test]
    fn pairing_is_bilinear_and_inner_is_sesquilinear() {
        let i = C64::new(0.0, 1.0);
        let f = vec![i, ONE];
        let x = vec![i, ONE];
        assert_eq!(pair(&f, &x), C64::new(0.0, 0.0));
        assert_eq!(inner(&f, &x), C64::new(2.0, 0.0));
    }
}
