//! Dense univariate polynomials over Q stored low-degree first.
//!
//! These helpers back the Euclidean operations of [`LaurentPoly`](super::LaurentPoly):
//! every Laurent computation that needs a degree strips its `t`-power first
//! and then works here.

use num_traits::{One, Zero};

use super::Rational;

pub(crate) fn trim(v: &mut Vec<Rational>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

pub(crate) fn degree(v: &[Rational]) -> Option<usize> {
    if v.is_empty() {
        None
    } else {
        Some(v.len() - 1)
    }
}

pub(crate) fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let c = match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x + y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        };
        out.push(c);
    }
    trim(&mut out);
    out
}

pub(crate) fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let c = match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x - y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => -y.clone(),
            (None, None) => unreachable!(),
        };
        out.push(c);
    }
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn scale(a: &[Rational], c: &Rational) -> Vec<Rational> {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|x| x * c).collect()
}

/// Euclidean division `a = q*b + r` with `deg r < deg b`. Panics if `b` is zero.
pub(crate) fn divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    if a.len() < b.len() {
        return (Vec::new(), a.to_vec());
    }
    let db = b.len() - 1;
    let lead_inv = b[db].recip();
    let mut r = a.to_vec();
    let mut q = vec![Rational::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let c = &r[k + db] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                r[k + j] -= &c * bj;
            }
        }
        q[k] = c;
    }
    r.truncate(db);
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

pub(crate) fn rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    divrem(a, b).1
}

pub(crate) fn monic(a: &[Rational]) -> Vec<Rational> {
    match a.last() {
        None => Vec::new(),
        Some(lead) => {
            let inv = lead.recip();
            a.iter().map(|x| x * &inv).collect()
        }
    }
}

pub(crate) fn gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = monic(&y);
        y = monic(&r);
    }
    monic(&x)
}

/// Returns `(g, s, u)` with `s*a + u*b = g`, `g` monic (or zero when both inputs vanish).
pub(crate) fn ext_gcd(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>, Vec<Rational>) {
    let one = vec![Rational::one()];
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (one.clone(), Vec::new());
    let (mut u0, mut u1) = (Vec::new(), one);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1);
        let s2 = sub(&s0, &mul(&q, &s1));
        let u2 = sub(&u0, &mul(&q, &u1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        u0 = std::mem::replace(&mut u1, u2);
    }
    match r0.last() {
        None => (r0, s0, u0),
        Some(lead) => {
            let inv = lead.recip();
            (scale(&r0, &inv), scale(&s0, &inv), scale(&u0, &inv))
        }
    }
}

pub(crate) fn eval(a: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in a.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Multiplies `r` (already reduced modulo `d`) by `t^-1` modulo `d`; `d(0)` must be nonzero.
pub(crate) fn mul_t_inv_mod(r: &[Rational], d: &[Rational]) -> Vec<Rational> {
    if r.is_empty() {
        return Vec::new();
    }
    let c = &r[0] / &d[0];
    let shifted = sub(r, &scale(d, &c));
    // constant term is now zero; divide by t
    let mut out: Vec<Rational> = shifted.into_iter().skip(1).collect();
    trim(&mut out);
    rem(&out, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(v: &[i64]) -> Vec<Rational> {
        let mut out: Vec<Rational> = v.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect();
        trim(&mut out);
        out
    }

    #[test]
    fn divrem_recombines() {
        let a = q(&[2, -5, 2]);
        let b = q(&[-2, 1]);
        let (qq, r) = divrem(&a, &b);
        assert!(r.is_empty());
        assert_eq!(qq, q(&[-1, 2]));
    }

    #[test]
    fn ext_gcd_bezout() {
        let a = q(&[-2, 1]);
        let b = q(&[-1, 2]);
        let (g, s, u) = ext_gcd(&a, &b);
        assert_eq!(g, q(&[1]));
        assert_eq!(add(&mul(&s, &a), &mul(&u, &b)), g);
    }

    #[test]
    fn t_inverse_modulo() {
        // modulo t - 2, t acts as 2 so t^-1 acts as 1/2
        let d = q(&[-2, 1]);
        let r = mul_t_inv_mod(&q(&[1]), &d);
        assert_eq!(r, vec![Rational::new(BigInt::from(1), BigInt::from(2))]);
        assert_eq!(rem(&mul(&r, &q(&[0, 1])), &d), q(&[1]));
    }
}
