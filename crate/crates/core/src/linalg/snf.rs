use num_traits::One;

use super::{LambdaMatrix, LinalgError};
use crate::ring::{LaurentPoly, Rational};

/// Guardrails for elimination.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest span any intermediate entry may reach.
    pub max_span: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_span: 512 }
    }
}

/// `U * M * V = D` with `U`, `V` invertible over Λ and `D` diagonal with
/// `d_1 | d_2 | ...`. Nonzero diagonal entries are monic ordinary polynomials;
/// zero entries come last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub u: LambdaMatrix,
    pub u_inv: LambdaMatrix,
    pub v: LambdaMatrix,
    pub v_inv: LambdaMatrix,
    pub d: LambdaMatrix,
    /// Non-unit nonzero diagonal entries, in order.
    pub invariant_factors: Vec<LaurentPoly>,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
}

impl SnfResult {
    pub fn diagonal(&self) -> Vec<LaurentPoly> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i).clone()).collect()
    }

    /// Columns generating the kernel of the original matrix.
    pub fn kernel(&self) -> LambdaMatrix {
        self.v.column_range(self.rank..self.v.cols())
    }

    /// Some `w` with `M w = b`, if `b` lies in the column span of `M`.
    pub fn solve(&self, b: &[LaurentPoly]) -> Option<Vec<LaurentPoly>> {
        assert_eq!(b.len(), self.u.cols(), "right-hand side length must match row count");
        let y = self.u.mul_vec(b);
        if y[self.rank..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut z = vec![LaurentPoly::zero(); self.v.cols()];
        for i in 0..self.rank {
            z[i] = y[i].div_exact(self.d.get(i, i))?;
        }
        Some(self.v.mul_vec(&z))
    }
}

struct State {
    d: LambdaMatrix,
    u: LambdaMatrix,
    u_inv: LambdaMatrix,
    v: LambdaMatrix,
    v_inv: LambdaMatrix,
    cap: usize,
}

fn unit_inverse(u: &LaurentPoly) -> LaurentPoly {
    let c = u.leading_coeff().expect("unit is nonzero");
    LaurentPoly::monomial(c.recip(), -u.low_exp().expect("unit is nonzero"))
}

impl State {
    fn check_row(&self, i: usize) -> Result<(), LinalgError> {
        let span = (0..self.d.cols())
            .map(|j| self.d.get(i, j))
            .chain((0..self.u.cols()).map(|j| self.u.get(i, j)))
            .filter_map(LaurentPoly::span)
            .max()
            .unwrap_or(0);
        self.check(span)
    }

    fn check_col(&self, j: usize) -> Result<(), LinalgError> {
        let span = (0..self.d.rows())
            .map(|i| self.d.get(i, j))
            .chain((0..self.v.rows()).map(|i| self.v.get(i, j)))
            .filter_map(LaurentPoly::span)
            .max()
            .unwrap_or(0);
        self.check(span)
    }

    fn check(&self, span: usize) -> Result<(), LinalgError> {
        if span > self.cap {
            Err(LinalgError::DegreeCap { cap: self.cap, span })
        } else {
            Ok(())
        }
    }

    fn row_add(&mut self, dst: usize, src: usize, q: &LaurentPoly) -> Result<(), LinalgError> {
        self.d.add_row_multiple(dst, src, q);
        self.u.add_row_multiple(dst, src, q);
        self.u_inv.add_col_multiple(src, dst, &-q);
        self.check_row(dst)
    }

    fn col_add(&mut self, dst: usize, src: usize, q: &LaurentPoly) -> Result<(), LinalgError> {
        self.d.add_col_multiple(dst, src, q);
        self.v.add_col_multiple(dst, src, q);
        self.v_inv.add_row_multiple(src, dst, &-q);
        self.check_col(dst)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    fn scale_row(&mut self, i: usize, unit: &LaurentPoly) {
        self.d.scale_row(i, unit);
        self.u.scale_row(i, unit);
        self.u_inv.scale_col(i, &unit_inverse(unit));
    }

    /// Nonzero entry of least span in the trailing block, ties by row then column.
    fn pivot(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in k..self.d.rows() {
            for j in k..self.d.cols() {
                if let Some(s) = self.d.get(i, j).span() {
                    if best.is_none_or(|(bs, _, _)| s < bs) {
                        best = Some((s, i, j));
                    }
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    /// Clears row and column `k` with Euclidean steps. Returns false if some
    /// remainder survived, in which case the pivot must be re-chosen.
    fn eliminate(&mut self, k: usize) -> Result<bool, LinalgError> {
        let pivot = self.d.get(k, k).clone();
        let mut clean = true;
        for i in (k + 1)..self.d.rows() {
            if self.d.get(i, k).is_zero() {
                continue;
            }
            let (q, r) = self.d.get(i, k).div_rem(&pivot);
            self.row_add(i, k, &-q)?;
            clean &= r.is_zero();
        }
        for j in (k + 1)..self.d.cols() {
            if self.d.get(k, j).is_zero() {
                continue;
            }
            let (q, r) = self.d.get(k, j).div_rem(&pivot);
            self.col_add(j, k, &-q)?;
            clean &= r.is_zero();
        }
        Ok(clean)
    }

    fn non_divisible_row(&self, k: usize) -> Option<usize> {
        let pivot = self.d.get(k, k);
        ((k + 1)..self.d.rows()).find(|&i| ((k + 1)..self.d.cols()).any(|j| !pivot.divides(self.d.get(i, j))))
    }
}

/// Smith normal form with the default [`Limits`].
pub fn snf(m: &LambdaMatrix) -> Result<SnfResult, LinalgError> {
    snf_with(m, Limits::default())
}

pub fn snf_with(m: &LambdaMatrix, limits: Limits) -> Result<SnfResult, LinalgError> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut st = State {
        d: m.clone(),
        u: LambdaMatrix::identity(rows),
        u_inv: LambdaMatrix::identity(rows),
        v: LambdaMatrix::identity(cols),
        v_inv: LambdaMatrix::identity(cols),
        cap: limits.max_span,
    };
    st.check(m.max_span())?;
    let mut rank = 0;
    for k in 0..rows.min(cols) {
        while let Some((pi, pj)) = st.pivot(k) {
            st.swap_rows(k, pi);
            st.swap_cols(k, pj);
            if !st.eliminate(k)? {
                continue;
            }
            if let Some(i) = st.non_divisible_row(k) {
                st.row_add(k, i, &LaurentPoly::one())?;
                continue;
            }
            break;
        }
        let pivot = st.d.get(k, k).clone();
        if pivot.is_zero() {
            break;
        }
        let lead = pivot.leading_coeff().expect("nonzero pivot").clone();
        let low = pivot.low_exp().expect("nonzero pivot");
        st.scale_row(k, &LaurentPoly::monomial(Rational::one() / lead, -low));
        rank += 1;
    }
    let invariant_factors = (0..rank).map(|i| st.d.get(i, i).clone()).filter(|p| !p.is_unit()).collect();
    Ok(SnfResult { u: st.u, u_inv: st.u_inv, v: st.v, v_inv: st.v_inv, d: st.d, invariant_factors, rank })
}

/// Columns generating `{ v : M v = 0 }`.
pub fn kernel(m: &LambdaMatrix) -> Result<LambdaMatrix, LinalgError> {
    Ok(snf(m)?.kernel())
}

/// Coefficients `w` with `M w = v` when `v` is in the column span of `M`.
pub fn in_span(v: &[LaurentPoly], m: &LambdaMatrix) -> Result<Option<Vec<LaurentPoly>>, LinalgError> {
    if v.len() != m.rows() {
        return Err(LinalgError::DimensionMismatch(format!(
            "vector of length {} against {} rows",
            v.len(),
            m.rows()
        )));
    }
    Ok(snf(m)?.solve(v))
}
