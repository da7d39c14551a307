use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{LaurentPoly, Rational, RingError};

/// Pairwise-coprime monic polynomials such that every input is, up to a unit,
/// a product of powers of them. Units are dropped; output is sorted.
pub fn gcd_free_basis(polys: &[LaurentPoly]) -> Vec<LaurentPoly> {
    let mut basis: Vec<LaurentPoly> = Vec::new();
    for p in polys {
        let m = p.monic_associate();
        if !m.is_zero() && !m.is_one() && !basis.contains(&m) {
            basis.push(m);
        }
    }
    'outer: loop {
        for i in 0..basis.len() {
            for j in (i + 1)..basis.len() {
                let g = basis[i].gcd(&basis[j]);
                if g.is_one() {
                    continue;
                }
                let a = basis[i].div_exact(&g).expect("gcd divides").monic_associate();
                let b = basis[j].div_exact(&g).expect("gcd divides").monic_associate();
                basis.remove(j);
                basis.remove(i);
                for q in [g, a, b] {
                    if !q.is_one() && !basis.contains(&q) {
                        basis.push(q);
                    }
                }
                continue 'outer;
            }
        }
        break;
    }
    basis.sort();
    basis
}

/// Largest `e` with `f^e` dividing `p`; `f` must be a non-unit.
pub fn multiplicity(p: &LaurentPoly, f: &LaurentPoly) -> u32 {
    assert!(!f.is_unit(), "multiplicity of a unit");
    let mut e = 0;
    let mut rest = p.clone();
    while !rest.is_zero() {
        match rest.div_exact(f) {
            Some(q) => {
                rest = q;
                e += 1;
            }
            None => break,
        }
    }
    e
}

/// Canonical unit multiple of an Alexander-type polynomial.
///
/// When some unit multiple is fixed by conjugation, returns that multiple
/// with coprime integer coefficients and positive leading coefficient
/// (so `(2t-1)(t-2)` becomes `2t - 5 + 2t^-1`). Otherwise returns the monic
/// ordinary associate. Constants normalize to 1.
pub fn normalize_alexander(p: &LaurentPoly) -> LaurentPoly {
    if p.is_zero() {
        return LaurentPoly::zero();
    }
    let ord = p.ordinary();
    let n = ord.span().unwrap();
    if n == 0 {
        return LaurentPoly::one();
    }
    let palindromic = n.is_multiple_of(2) && (0..=n as i64).all(|i| ord.coeff(i) == ord.coeff(n as i64 - i));
    if !palindromic {
        return ord.monic_associate();
    }
    let centered = ord.shift(-(n as i64 / 2));
    primitive_integral(&centered)
}

/// Scales to coprime integer coefficients with positive leading coefficient.
pub fn primitive_integral(p: &LaurentPoly) -> LaurentPoly {
    if p.is_zero() {
        return LaurentPoly::zero();
    }
    let mut lcm = BigInt::one();
    for (_, c) in p.terms() {
        lcm = lcm.lcm(c.denom());
    }
    let mut g = BigInt::zero();
    for (_, c) in p.terms() {
        let v = c * Rational::from_integer(lcm.clone());
        g = g.gcd(v.numer());
    }
    let mut s = Rational::new(lcm, g);
    if p.leading_coeff().unwrap().is_negative() {
        s = -s;
    }
    p.scale(&s)
}

/// Positive divisors of `n`, or `None` when `|n|` is too large to factor by
/// trial division.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n.bits() > 48 {
        return None;
    }
    let n = u64::try_from(&n).ok()?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

/// Monic `t - r` for the distinct nonzero rational roots `r` of `p`, found
/// by the rational root test. Empty when the coefficients are too large.
pub fn linear_factors(p: &LaurentPoly) -> Vec<LaurentPoly> {
    let ord = primitive_integral(&p.ordinary());
    if ord.span().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let lead = ord.leading_coeff().expect("nonzero").to_integer();
    let constant = ord.trailing_coeff().expect("nonzero").to_integer();
    let (Some(num), Some(den)) = (divisors(&constant), divisors(&lead)) else {
        return Vec::new();
    };
    let mut roots: Vec<Rational> = Vec::new();
    for r in &num {
        for s in &den {
            for sign in [1, -1] {
                let x = Rational::new(r * sign, s.clone());
                if !roots.contains(&x) && ord.eval(&x).is_some_and(|v| v.is_zero()) {
                    roots.push(x);
                }
            }
        }
    }
    let mut out: Vec<LaurentPoly> = roots.into_iter().map(|r| LaurentPoly::from_coeffs(0, vec![-r, Rational::one()])).collect();
    out.sort();
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticTests {
    pub irreducible: bool,
    pub fox_milnor_possible: bool,
    /// `|p(-1)|`
    pub witness: BigInt,
    pub discriminant: BigInt,
}

fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}

/// Irreducibility and Fox-Milnor screening for a symmetric quadratic
/// `a t^2 + b t + a` (any unit multiple thereof) with `|p(1)| = 1`.
pub fn symmetric_quadratic_tests(p: &LaurentPoly) -> Result<QuadraticTests, RingError> {
    let ord = p.ordinary();
    if ord.span() != Some(2) {
        return Err(RingError::InvalidInput(format!("expected span 2, got {p}")));
    }
    if !ord.is_integral() {
        return Err(RingError::InvalidInput(format!("expected integer coefficients, got {p}")));
    }
    let a = ord.coeff(0);
    let b = ord.coeff(1);
    if ord.coeff(2) != a {
        return Err(RingError::InvalidInput(format!("{p} is not symmetric")));
    }
    let at_one = &a + &a + &b;
    if at_one.abs() != Rational::one() {
        return Err(RingError::InvalidInput(format!("|p(1)| = {} is not 1", at_one.abs())));
    }
    let a = a.to_integer();
    let b = b.to_integer();
    let witness = (&a + &a - &b).abs();
    let discriminant = &b * &b - BigInt::from(4) * &a * &a;
    Ok(QuadraticTests {
        irreducible: !is_square(&discriminant),
        fox_milnor_possible: is_square(&witness),
        witness,
        discriminant,
    })
}
