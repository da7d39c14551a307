//! Exact matrices over Λ: determinants, inverses over Q(t), Smith normal form,
//! kernels and span membership.

mod snf;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::ring::{LaurentPoly, RationalFn};

pub use snf::{in_span, kernel, snf, snf_with, Limits, SnfResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("intermediate entry of span {span} exceeds the cap of {cap}")]
    DegreeCap { cap: usize, span: usize },
}

/// A dense row-major matrix of Laurent polynomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LambdaMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<LaurentPoly>,
}

impl LambdaMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<LaurentPoly>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(LambdaMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        Ok(LambdaMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    /// Columns given as vectors of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<LaurentPoly>]) -> Result<Self, LinalgError> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(LinalgError::DimensionMismatch("column length differs from row count".into()));
        }
        Ok(Self::from_fn(rows, columns.len(), |i, j| columns[j][i].clone()))
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| LaurentPoly::from_int(x)).collect()).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> LaurentPoly) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        LambdaMatrix { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        LambdaMatrix { rows, cols, entries: vec![LaurentPoly::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { LaurentPoly::one() } else { LaurentPoly::zero() })
    }

    pub fn diagonal(diag: &[LaurentPoly]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i].clone() } else { LaurentPoly::zero() })
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

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: LaurentPoly) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<LaurentPoly> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<LaurentPoly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<LaurentPoly>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    /// Columns `range.start..range.end`.
    pub fn column_range(&self, range: std::ops::Range<usize>) -> Self {
        Self::from_fn(self.rows, range.len(), |i, j| self.get(i, range.start + j).clone())
    }

    /// Rows `range.start..range.end`.
    pub fn row_range(&self, range: std::ops::Range<usize>) -> Self {
        Self::from_fn(range.len(), self.cols, |i, j| self.get(range.start + i, j).clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Entrywise conjugation `t -> t^-1`.
    pub fn conj(&self) -> Self {
        LambdaMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(LaurentPoly::conj).collect() }
    }

    pub fn scale(&self, p: &LaurentPoly) -> Self {
        LambdaMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|e| e * p).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(LaurentPoly::is_zero)
    }

    /// Largest span of an entry; zero for the zero matrix.
    pub fn max_span(&self) -> usize {
        self.entries.iter().filter_map(LaurentPoly::span).max().unwrap_or(0)
    }

    pub fn mul_vec(&self, v: &[LaurentPoly]) -> Vec<LaurentPoly> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        (0..self.rows)
            .map(|i| {
                let mut acc = LaurentPoly::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = LaurentPoly::zero();
            for k in 0..self.cols {
                let (a, b) = (self.get(i, k), other.get(k, j));
                if !a.is_zero() && !b.is_zero() {
                    acc += &(a * b);
                }
            }
            acc
        }))
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.rows != other.rows {
            return Err(LinalgError::DimensionMismatch("hstack needs equal row counts".into()));
        }
        Ok(Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        }))
    }

    /// `[self ; other]`.
    pub fn vstack(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch("vstack needs equal column counts".into()));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(LambdaMatrix { rows: self.rows + other.rows, cols: self.cols, entries })
    }

    pub fn block_diag(&self, other: &Self) -> Self {
        Self::from_fn(self.rows + other.rows, self.cols + other.cols, |i, j| {
            match (i < self.rows, j < self.cols) {
                (true, true) => self.get(i, j).clone(),
                (false, false) => other.get(i - self.rows, j - self.cols).clone(),
                _ => LaurentPoly::zero(),
            }
        })
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row `dst` += q * row `src`
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, q: &LaurentPoly) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = self.get(src, j);
            if !s.is_zero() {
                let v = self.get(dst, j) + &(q * s);
                self.set(dst, j, v);
            }
        }
    }

    /// col `dst` += q * col `src`
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, q: &LaurentPoly) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = self.get(i, src);
            if !s.is_zero() {
                let v = self.get(i, dst) + &(s * q);
                self.set(i, dst, v);
            }
        }
    }

    pub(crate) fn scale_row(&mut self, i: usize, u: &LaurentPoly) {
        for j in 0..self.cols {
            let v = self.get(i, j) * u;
            self.set(i, j, v);
        }
    }

    pub(crate) fn scale_col(&mut self, j: usize, u: &LaurentPoly) {
        for i in 0..self.rows {
            let v = self.get(i, j) * u;
            self.set(i, j, v);
        }
    }
}

impl Mul for &LambdaMatrix {
    type Output = LambdaMatrix;
    /// Panics on incompatible shapes; see [`LambdaMatrix::try_mul`].
    fn mul(self, rhs: &LambdaMatrix) -> LambdaMatrix {
        self.try_mul(rhs).expect("incompatible matrix shapes")
    }
}

impl Add for &LambdaMatrix {
    type Output = LambdaMatrix;
    fn add(self, rhs: &LambdaMatrix) -> LambdaMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "incompatible matrix shapes");
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect();
        LambdaMatrix { rows: self.rows, cols: self.cols, entries }
    }
}

impl Sub for &LambdaMatrix {
    type Output = LambdaMatrix;
    fn sub(self, rhs: &LambdaMatrix) -> LambdaMatrix {
        self + &(-rhs)
    }
}

impl Neg for &LambdaMatrix {
    type Output = LambdaMatrix;
    fn neg(self) -> LambdaMatrix {
        LambdaMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|e| -e).collect() }
    }
}

impl fmt::Display for LambdaMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl fmt::Debug for LambdaMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LambdaMatrix{}x{}{}", self.rows, self.cols, self)
    }
}

/// `t A - A^T` for an integer (Seifert) matrix `A`.
pub fn seifert_pencil(a: &LambdaMatrix) -> LambdaMatrix {
    &a.scale(&LaurentPoly::t()) - &a.transpose()
}

/// `A - t A^T`.
pub fn seifert_pencil_dual(a: &LambdaMatrix) -> LambdaMatrix {
    a - &a.transpose().scale(&LaurentPoly::t())
}

fn exact(a: &LaurentPoly, d: &LaurentPoly) -> LaurentPoly {
    a.div_exact(d).expect("Bareiss step divides exactly")
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &LambdaMatrix) -> Result<LaurentPoly, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    let mut a = m.clone();
    let mut prev = LaurentPoly::one();
    let mut negate = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a.get(i, k).is_zero()) else {
            return Ok(LaurentPoly::zero());
        };
        if p != k {
            a.swap_rows(p, k);
            negate = !negate;
        }
        let pivot = a.get(k, k).clone();
        for i in (k + 1)..n {
            let aik = a.get(i, k).clone();
            for j in (k + 1)..n {
                let v = &(&pivot * a.get(i, j)) - &(&aik * a.get(k, j));
                a.set(i, j, exact(&v, &prev));
            }
            a.set(i, k, LaurentPoly::zero());
        }
        prev = pivot;
    }
    if n == 0 {
        return Ok(LaurentPoly::one());
    }
    let d = a.get(n - 1, n - 1).clone();
    Ok(if negate { -d } else { d })
}

/// Inverse over Q(t) as the adjugate divided by the determinant.
///
/// Fraction-free Gauss-Jordan on `[M | I]` ends at `[d I | d M^-1]`, whose
/// right half is the adjugate up to the sign carried by `d = ±det M`.
pub fn inverse_qt(m: &LambdaMatrix) -> Result<Vec<Vec<RationalFn>>, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    let mut a = m.hstack(&LambdaMatrix::identity(n))?;
    let mut prev = LaurentPoly::one();
    for k in 0..n {
        let p = (k..n).find(|&i| !a.get(i, k).is_zero()).ok_or(LinalgError::Singular)?;
        a.swap_rows(p, k);
        let pivot = a.get(k, k).clone();
        for i in (0..n).filter(|&i| i != k) {
            let aik = a.get(i, k).clone();
            for j in (0..2 * n).filter(|&j| j != k) {
                let v = &(&pivot * a.get(i, j)) - &(&aik * a.get(k, j));
                a.set(i, j, exact(&v, &prev));
            }
            a.set(i, k, LaurentPoly::zero());
        }
        prev = pivot;
    }
    let d = prev;
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| RationalFn::new(a.get(i, n + j).clone(), d.clone()).expect("nonzero determinant"))
                .collect()
        })
        .collect())
}

/// Product of a Λ-matrix with a Q(t)-matrix.
pub fn mul_qt(m: &LambdaMatrix, q: &[Vec<RationalFn>]) -> Vec<Vec<RationalFn>> {
    let inner = q.len();
    assert_eq!(m.cols, inner, "incompatible matrix shapes");
    let cols = q.first().map_or(0, Vec::len);
    (0..m.rows)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    let mut acc = RationalFn::zero();
                    for k in 0..inner {
                        if !m.get(i, k).is_zero() && !q[k][j].is_zero() {
                            acc = &acc + &q[k][j].mul_poly(m.get(i, k));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}
