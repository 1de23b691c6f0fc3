//! Dense exact matrices with fraction-free rank and Faddeev–LeVerrier characteristic polynomials.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

use super::rational::{int, Rational};
use super::scalar::{FieldKind, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("mixed scalar fields: {0:?} vs {1:?}")]
    FieldMismatch(FieldKind, FieldKind),
}

/// Row-major dense matrix; every entry lives in `field`.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: FieldKind,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, field: FieldKind) -> Self {
        Matrix {
            rows,
            cols,
            field,
            entries: vec![Scalar::zero_in(field); rows * cols],
        }
    }

    pub fn identity(n: usize, field: FieldKind) -> Self {
        let mut m = Self::zeros(n, n, field);
        for i in 0..n {
            m.entries[i * n + i] = Scalar::one_in(field);
        }
        m
    }

    /// Builds from row-major entries; rational entries are promoted to the field of any cyclotomic one.
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self, MatrixError> {
        if entries.len() != rows * cols {
            return Err(MatrixError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let mut field = FieldKind::Rational;
        for e in &entries {
            match (field, e.field_kind()) {
                (_, FieldKind::Rational) => {}
                (FieldKind::Rational, k) => field = k,
                (a, b) if a != b => return Err(MatrixError::FieldMismatch(a, b)),
                _ => {}
            }
        }
        let entries = entries.into_iter().map(|e| e.promote(field)).collect();
        Ok(Matrix {
            rows,
            cols,
            field,
            entries,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let entries = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Self::from_entries(rows, cols, entries).expect("from_fn produced mixed fields")
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Self::from_fn(r, c, |i, j| Scalar::from_int(rows[i][j]))
    }

    pub fn diagonal(entries: &[Scalar]) -> Self {
        let n = entries.len();
        let mut m = Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { Scalar::zero() });
        if let Some(k) = entries
            .iter()
            .map(Scalar::field_kind)
            .find(|k| *k != FieldKind::Rational)
        {
            m = m.promote(k);
        }
        m
    }

    /// The matrix unit e_{ij} in M_n(ℚ), 1-based indices.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n, FieldKind::Rational);
        m.entries[(i - 1) * n + (j - 1)] = Scalar::one();
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.entries[r * self.cols + c] = v.promote(self.field);
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn promote(self, field: FieldKind) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field,
            entries: self.entries.into_iter().map(|e| e.promote(field)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// `Some(c)` when the matrix is c·I.
    pub fn scalar_value(&self) -> Option<Scalar> {
        if !self.is_diagonal() || self.rows == 0 {
            return None;
        }
        let c = self.get(0, 0);
        (1..self.rows).all(|i| self.get(i, i) == c).then(|| c.clone())
    }

    pub fn is_scalar(&self) -> bool {
        self.scalar_value().is_some()
    }

    pub fn diagonal_entries(&self) -> Vec<Scalar> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).fold(Scalar::zero_in(self.field), |acc, i| &acc + self.get(i, i))
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix::from_entries(self.rows, self.cols, self.entries.iter().map(|e| e * s).collect())
            .expect("scale keeps the shape")
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone()).promote(self.field)
    }

    fn check_field(&self, other: &Matrix) -> Result<FieldKind, MatrixError> {
        match (self.field, other.field) {
            (a, b) if a == b => Ok(a),
            (FieldKind::Rational, b) => Ok(b),
            (a, FieldKind::Rational) => Ok(a),
            (a, b) => Err(MatrixError::FieldMismatch(a, b)),
        }
    }

    pub fn checked_mul(&self, rhs: &Matrix) -> Result<Matrix, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let field = self.check_field(rhs)?;
        let mut out = Matrix::zeros(self.rows, rhs.cols, field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    out.entries[idx] = &out.entries[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, rhs: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Matrix, MatrixError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(MatrixError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let field = self.check_field(rhs)?;
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| f(a, b)).collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            field,
            entries,
        }
        .promote(field))
    }

    pub fn checked_add(&self, rhs: &Matrix) -> Result<Matrix, MatrixError> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn checked_sub(&self, rhs: &Matrix) -> Result<Matrix, MatrixError> {
        self.zip_with(rhs, |a, b| a - b)
    }

    /// [self, rhs] = self·rhs − rhs·self.
    pub fn commutator(&self, rhs: &Matrix) -> Matrix {
        &(self * rhs) - &(rhs * self)
    }

    pub fn pow(&self, mut e: u32) -> Matrix {
        assert!(self.is_square(), "pow of a non-square matrix");
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.rows, self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Row-major flattening: entry (r, c) at index r·cols + c.
    pub fn to_vec(&self) -> Vec<Scalar> {
        self.entries.clone()
    }

    /// Gauss–Jordan inverse; `None` for singular or non-square input.
    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n, self.field);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p_inv = a.get(col, col).inverse()?;
            for j in 0..n {
                a.entries[col * n + j] = &a.entries[col * n + j] * &p_inv;
                inv.entries[col * n + j] = &inv.entries[col * n + j] * &p_inv;
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone();
                for j in 0..n {
                    a.entries[r * n + j] = &a.entries[r * n + j] - &(&factor * &a.entries[col * n + j]);
                    inv.entries[r * n + j] = &inv.entries[r * n + j] - &(&factor * &inv.entries[col * n + j]);
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Exact rank by fraction-free (Bareiss) elimination.
    ///
    /// The pivot is the first nonzero entry at or below the current row in
    /// the current column, so results are reproducible.
    pub fn rank(&self) -> usize {
        let (rows, cols) = (self.rows, self.cols);
        let mut m = self.entries.clone();
        let mut prev = Scalar::one_in(self.field);
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&r| !m[r * cols + col].is_zero()) else {
                continue;
            };
            if p != rank {
                for j in 0..cols {
                    m.swap(p * cols + j, rank * cols + j);
                }
            }
            let pivot = m[rank * cols + col].clone();
            let prev_inv = prev.inverse().expect("Bareiss divisor is a previous pivot");
            for r in rank + 1..rows {
                let lead = m[r * cols + col].clone();
                for j in col + 1..cols {
                    let v = &(&pivot * &m[r * cols + j]) - &(&lead * &m[rank * cols + j]);
                    m[r * cols + j] = &v * &prev_inv;
                }
                m[r * cols + col] = Scalar::zero_in(self.field);
            }
            prev = pivot;
            rank += 1;
        }
        rank
    }

    /// Monic characteristic polynomial det(λI − A), ascending coefficients
    /// c_0..c_n with c_n = 1, via the Faddeev–LeVerrier recurrence.
    pub fn char_poly(&self) -> Result<Vec<Scalar>, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut coeffs = vec![Scalar::zero_in(self.field); n + 1];
        coeffs[n] = Scalar::one_in(self.field);
        let ident = Matrix::identity(n, self.field);
        let mut m = Matrix::zeros(n, n, self.field);
        for k in 1..=n {
            // M_k = A·M_{k−1} + c_{n−k+1}·I
            m = &(self * &m) + &ident.scale(&coeffs[n - k + 1]);
            let tr = (self * &m).trace();
            let inv_k = Rational::new(1.into(), (k as i64).into());
            coeffs[n - k] = -(tr.scale(&inv_k));
        }
        Ok(coeffs)
    }

    pub fn determinant(&self) -> Result<Scalar, MatrixError> {
        let cp = self.char_poly()?;
        let c0 = cp[0].clone();
        Ok(if self.rows.is_multiple_of(2) { c0 } else { -c0 })
    }

    /// Rows as text, for reports.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }

    /// Scalar multiple by an integer, convenient in tests and constructions.
    pub fn scale_int(&self, k: i64) -> Matrix {
        self.scale(&Scalar::Rational(int(k)))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{:?}", self.to_string_rows())
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows = self.to_string_rows();
        let mut seq = s.serialize_seq(Some(rows.len()))?;
        for r in &rows {
            seq.serialize_element(r)?;
        }
        seq.end()
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.checked_mul(rhs).unwrap()
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.checked_add(rhs).unwrap()
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.checked_sub(rhs).unwrap()
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale_int(-1)
    }
}
