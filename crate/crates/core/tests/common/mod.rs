#![allow(dead_code)]

use eqknot::linalg::LambdaMatrix;
use eqknot::ring::{LaurentPoly, Rational, RationalFn};
use proptest::prelude::*;

/// Laurent polynomials with small integer coefficients, exponents in `[-1, 3]`.
pub fn laurent(max_len: usize) -> impl Strategy<Value = LaurentPoly> {
    (-1i64..=1, prop::collection::vec(-3i64..=3, 0..=max_len)).prop_map(|(low, c)| LaurentPoly::from_ints(low, &c))
}

/// Mostly sparse entries so that random matrices have interesting SNFs.
pub fn entry() -> impl Strategy<Value = LaurentPoly> {
    prop_oneof![
        2 => Just(LaurentPoly::zero()),
        3 => laurent(4),
    ]
}

pub fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = LambdaMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(entry(), r * c).prop_map(move |e| LambdaMatrix::new(r, c, e).unwrap())
    })
}

pub fn square(max_n: usize) -> impl Strategy<Value = LambdaMatrix> {
    (1..=max_n).prop_flat_map(|n| prop::collection::vec(entry(), n * n).prop_map(move |e| LambdaMatrix::new(n, n, e).unwrap()))
}

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

/// Independent Gauss-Jordan solve over Q(t) with full pivot search; returns
/// `None` for a singular system.
pub fn solve_qt(m: &LambdaMatrix, rhs: &[RationalFn]) -> Option<Vec<RationalFn>> {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let mut a: Vec<Vec<RationalFn>> = (0..n)
        .map(|i| {
            let mut row: Vec<RationalFn> = (0..n).map(|j| RationalFn::from_poly(m.get(i, j).clone())).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(p, k);
        let inv = a[k][k].recip().unwrap();
        for x in a[k].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != k && !a[i][k].is_zero() {
                let f = a[i][k].clone();
                for j in 0..=n {
                    let v = &a[i][j] - &(&f * &a[k][j]);
                    a[i][j] = v;
                }
            }
        }
    }
    debug_assert!(a.iter().enumerate().all(|(i, r)| r[i] == RationalFn::one() && r[..n].iter().enumerate().all(|(j, x)| j == i || x.is_zero())));
    Some(a.into_iter().map(|r| r[n].clone()).collect())
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn is_zero_vec(v: &[LaurentPoly]) -> bool {
    v.iter().all(LaurentPoly::is_zero)
}
