//! Symmetric rational quadratic forms with exact definiteness tests.

use num_traits::{One, Signed, Zero};
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::ring::Rational;

/// `x -> x^T M x` for a symmetric rational matrix `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadForm {
    matrix: Vec<Vec<Rational>>,
}

/// Sign of a definite form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definite {
    Positive,
    Negative,
}

impl Definite {
    pub fn name(self) -> &'static str {
        match self {
            Definite::Positive => "positive",
            Definite::Negative => "negative",
        }
    }
}

/// Counts of positive, negative and zero diagonal entries after congruence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl QuadForm {
    /// Symmetrizes `m`, so `x^T m x` is unchanged.
    pub fn new(m: Vec<Vec<Rational>>) -> Self {
        let n = m.len();
        assert!(m.iter().all(|r| r.len() == n), "quadratic form matrix must be square");
        let two = Rational::from_integer(2.into());
        let matrix = (0..n).map(|i| (0..n).map(|j| (&m[i][j] + &m[j][i]) / &two).collect()).collect();
        QuadForm { matrix }
    }

    pub fn zeros(n: usize) -> Self {
        QuadForm { matrix: vec![vec![Rational::zero(); n]; n] }
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.matrix[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(Zero::is_zero)
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.dim());
        let mut acc = Rational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, xj) in x.iter().enumerate() {
                let m = &self.matrix[i][j];
                if !m.is_zero() && !xj.is_zero() {
                    acc += m * xi * xj;
                }
            }
        }
        acc
    }

    /// The form on the coordinates `idx`, others set to zero.
    pub fn restrict(&self, idx: &[usize]) -> QuadForm {
        QuadForm { matrix: idx.iter().map(|&i| idx.iter().map(|&j| self.matrix[i][j].clone()).collect()).collect() }
    }

    /// `K^T M K` for the columns `K` of `basis`, each a coordinate vector.
    pub fn congruent(&self, basis: &[Vec<Rational>]) -> QuadForm {
        let mk: Vec<Vec<Rational>> = basis
            .iter()
            .map(|k| (0..self.dim()).map(|i| self.matrix[i].iter().zip(k).map(|(m, x)| m * x).sum()).collect())
            .collect();
        let matrix = basis.iter().map(|a| mk.iter().map(|b| a.iter().zip(b).map(|(x, y)| x * y).sum()).collect()).collect();
        QuadForm { matrix }
    }

    /// A basis of `{x : M x = 0}`, read off the reduced row echelon form.
    pub fn radical(&self) -> Vec<Vec<Rational>> {
        let n = self.dim();
        let mut a = self.matrix.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..n {
            let Some(p) = (row..n).find(|&i| !a[i][col].is_zero()) else { continue };
            a.swap(row, p);
            let inv = a[row][col].recip();
            for x in a[row].iter_mut() {
                *x *= &inv;
            }
            for i in 0..n {
                if i != row && !a[i][col].is_zero() {
                    let f = a[i][col].clone();
                    for j in 0..n {
                        let d = &f * &a[row][j];
                        a[i][j] -= d;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (0..n)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![Rational::zero(); n];
                v[free] = Rational::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -a[r][free].clone();
                }
                v
            })
            .collect()
    }

    /// `self + w * other`.
    pub fn add_scaled(&self, other: &QuadForm, w: &Rational) -> QuadForm {
        assert_eq!(self.dim(), other.dim());
        let matrix = self
            .matrix
            .iter()
            .zip(&other.matrix)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y * w).collect())
            .collect();
        QuadForm { matrix }
    }

    /// Pivots of `LDL^T` without pivoting, if the form is definite.
    ///
    /// A symmetric matrix is positive definite iff Gaussian elimination along
    /// the diagonal produces only positive pivots; likewise for negative.
    pub fn definite(&self) -> Option<(Definite, Vec<Rational>)> {
        let n = self.dim();
        if n == 0 {
            return None;
        }
        let mut a = self.matrix.clone();
        let sign = if a[0][0].is_positive() {
            Definite::Positive
        } else if a[0][0].is_negative() {
            Definite::Negative
        } else {
            return None;
        };
        let mut pivots = Vec::with_capacity(n);
        for k in 0..n {
            let p = a[k][k].clone();
            let ok = match sign {
                Definite::Positive => p.is_positive(),
                Definite::Negative => p.is_negative(),
            };
            if !ok {
                return None;
            }
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] / &p;
                for j in k + 1..n {
                    if !a[k][j].is_zero() {
                        let d = &f * &a[k][j];
                        a[i][j] -= d;
                    }
                }
            }
            pivots.push(p);
        }
        Some((sign, pivots))
    }

    /// Diagonalizes by congruence, with symmetric pivoting.
    pub fn signature(&self) -> Signature {
        let mut a = self.matrix.clone();
        let mut n = a.len();
        let (mut positive, mut negative) = (0, 0);
        while n > 0 {
            let pivot = (0..n).find(|&i| !a[i][i].is_zero());
            let k = match pivot {
                Some(k) => k,
                None => {
                    // all diagonal entries vanish; x_i -> x_i + x_j makes a_ii = 2 a_ij
                    match (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero()) {
                        None => break,
                        Some((i, j)) => {
                            for r in 0..n {
                                let v = a[r][j].clone();
                                a[r][i] += v;
                            }
                            for c in 0..n {
                                let v = a[j][c].clone();
                                a[i][c] += v;
                            }
                            i
                        }
                    }
                }
            };
            let p = a[k][k].clone();
            if p.is_positive() {
                positive += 1;
            } else {
                negative += 1;
            }
            let row = a[k].clone();
            for i in 0..n {
                if i == k || a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] / &p;
                for j in 0..n {
                    let d = &f * &row[j];
                    a[i][j] -= d;
                }
            }
            a.remove(k);
            for r in a.iter_mut() {
                r.remove(k);
            }
            n -= 1;
        }
        Signature { positive, negative, zero: self.dim() - positive - negative }
    }

    /// Sign and rank of a nonzero semidefinite form.
    pub fn semidefinite(&self) -> Option<(Definite, usize)> {
        let s = self.signature();
        match (s.positive, s.negative) {
            (p, 0) if p > 0 => Some((Definite::Positive, p)),
            (0, q) if q > 0 => Some((Definite::Negative, q)),
            _ => None,
        }
    }

    /// `Some(+1)` / `Some(-1)` for nonzero semidefinite forms.
    pub fn semidefinite_sign(&self) -> Option<i64> {
        self.semidefinite().map(|(d, _)| if d == Definite::Positive { 1 } else { -1 })
    }
}

impl Serialize for QuadForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.dim()))?;
        for row in &self.matrix {
            seq.serialize_element(&row.iter().map(ToString::to_string).collect::<Vec<_>>())?;
        }
        seq.end()
    }
}

/// `x^T x` on `n` coordinates.
pub fn sum_of_squares(n: usize) -> QuadForm {
    let mut m = vec![vec![Rational::zero(); n]; n];
    for (i, r) in m.iter_mut().enumerate() {
        r[i] = Rational::one();
    }
    QuadForm { matrix: m }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[i64]]) -> QuadForm {
        QuadForm::new(rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect())
    }

    #[test]
    fn definiteness() {
        assert_eq!(q(&[&[2, 1], &[1, 2]]).definite().unwrap().0, Definite::Positive);
        assert_eq!(q(&[&[-2, 1], &[1, -2]]).definite().unwrap().0, Definite::Negative);
        assert!(q(&[&[1, 2], &[2, 1]]).definite().is_none());
        assert!(q(&[&[1, 1], &[1, 1]]).definite().is_none());
        assert!(q(&[&[0, 1], &[1, 0]]).definite().is_none());
        assert!(sum_of_squares(3).definite().is_some());
        assert!(QuadForm::zeros(0).definite().is_none());
    }

    #[test]
    fn signatures() {
        let s = q(&[&[0, 1], &[1, 0]]).signature();
        assert_eq!((s.positive, s.negative, s.zero), (1, 1, 0));
        let s = q(&[&[1, 1], &[1, 1]]).signature();
        assert_eq!((s.positive, s.negative, s.zero), (1, 0, 1));
        assert_eq!(q(&[&[1, 1], &[1, 1]]).semidefinite_sign(), Some(1));
        assert_eq!(q(&[&[0, 0], &[0, -3]]).semidefinite_sign(), Some(-1));
        assert_eq!(q(&[&[0, 1], &[1, 0]]).semidefinite_sign(), None);
        let s = q(&[&[0, 0, 1], &[0, 0, 0], &[1, 0, 0]]).signature();
        assert_eq!((s.positive, s.negative, s.zero), (1, 1, 1));
    }

    #[test]
    fn eval_and_restrict() {
        let f = q(&[&[1, 3, 0], &[-1, 2, 0], &[0, 0, 5]]);
        let x: Vec<Rational> = [1, 2, -1].iter().map(|&v| Rational::from_integer(v.into())).collect();
        // 1 + 2*1*2 + 2*4 + 5 = 18
        assert_eq!(f.eval(&x), Rational::from_integer(18.into()));
        assert_eq!(f.restrict(&[2]).entry(0, 0), &Rational::from_integer(5.into()));
    }

    #[test]
    fn congruence_and_radical() {
        let f = q(&[&[1, 1, 0], &[1, 1, 0], &[0, 0, 0]]);
        let rad = f.radical();
        assert_eq!(rad.len(), 2);
        for v in &rad {
            assert!(f.eval(v).is_zero());
            assert!(f.congruent(std::slice::from_ref(v)).is_zero());
        }
        // on span(e1, e3) the form is x^2
        let e1 = vec![Rational::one(), Rational::zero(), Rational::zero()];
        let e3 = vec![Rational::zero(), Rational::zero(), Rational::one()];
        assert_eq!(f.congruent(&[e1, e3]), q(&[&[1, 0], &[0, 0]]));
        assert_eq!(f.semidefinite(), Some((Definite::Positive, 1)));
        assert!(sum_of_squares(2).radical().is_empty());
    }
}
