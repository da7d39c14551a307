use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_traits::Zero;

use super::dense;
use super::parse::ParseError;
use super::{LaurentPoly, Rational, RationalFn, RingError};

/// An element of Q(t)/Λ.
///
/// Canonical representative `n/d` with `d` monic ordinary, `n` ordinary of
/// degree below `deg d`, and `gcd(n, d) = 1`. The zero class is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TorsionClass {
    rep: RationalFn,
}

/// Reduces a Laurent polynomial modulo a dense ordinary `d` with `d(0) != 0`,
/// returning the residue of degree below `deg d`.
pub(crate) fn reduce_mod(n: &LaurentPoly, d: &[Rational]) -> Vec<Rational> {
    let (low, n0) = n.ordinary_part();
    if d.len() <= 1 {
        return Vec::new();
    }
    if low >= 0 {
        let mut shifted = vec![Rational::zero(); low as usize];
        shifted.extend(n0.iter().cloned());
        return dense::rem(&shifted, d);
    }
    let mut r = dense::rem(n0, d);
    for _ in 0..low.unsigned_abs() {
        r = dense::mul_t_inv_mod(&r, d);
    }
    r
}

impl TorsionClass {
    pub fn zero() -> Self {
        TorsionClass { rep: RationalFn::zero() }
    }

    /// The class of `num/den`.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, RingError> {
        Ok(Self::from_fn(&RationalFn::new(num, den)?))
    }

    pub fn from_fn(f: &RationalFn) -> Self {
        if f.in_lambda() {
            return Self::zero();
        }
        let d = f.denominator();
        let r = reduce_mod(f.numerator(), d.dense());
        // numerator stays coprime to d: reduction and t-powers are invertible mod d
        let rep = RationalFn::new(LaurentPoly::from_dense(r), d.clone()).expect("nonzero denominator");
        TorsionClass { rep }
    }

    pub fn representative(&self) -> &RationalFn {
        &self.rep
    }

    pub fn numerator(&self) -> &LaurentPoly {
        self.rep.numerator()
    }

    pub fn denominator(&self) -> &LaurentPoly {
        self.rep.denominator()
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(&self.rep.conj())
    }

    pub fn mul_poly(&self, p: &LaurentPoly) -> Self {
        if self.is_zero() || p.is_zero() {
            return Self::zero();
        }
        Self::from_fn(&self.rep.mul_poly(p))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TorsionClass { rep: self.rep.scale(c) }
    }

    /// Numerator coefficients of the class written over the monic ordinary
    /// denominator `big`, or `None` if the class's denominator does not divide it.
    pub fn coords_over(&self, big: &LaurentPoly) -> Option<Vec<Rational>> {
        let dim = big.span()?;
        let mut out = vec![Rational::zero(); dim];
        if self.is_zero() {
            return Some(out);
        }
        let cof = big.div_exact(self.denominator())?;
        let n = reduce_mod(&(self.numerator() * &cof), big.dense());
        for (i, c) in n.into_iter().enumerate() {
            out[i] = c;
        }
        Some(out)
    }

    /// Inverse of [`coords_over`](Self::coords_over).
    pub fn from_coords(big: &LaurentPoly, coords: &[Rational]) -> Self {
        let num = LaurentPoly::from_coeffs(0, coords.to_vec());
        Self::from_fn(&RationalFn::new(num, big.clone()).expect("nonzero denominator"))
    }
}

impl<'a> Add<&'a TorsionClass> for &'a TorsionClass {
    type Output = TorsionClass;
    fn add(self, rhs: &TorsionClass) -> TorsionClass {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        TorsionClass::from_fn(&(&self.rep + &rhs.rep))
    }
}

impl<'a> Sub<&'a TorsionClass> for &'a TorsionClass {
    type Output = TorsionClass;
    fn sub(self, rhs: &TorsionClass) -> TorsionClass {
        self + &(-rhs)
    }
}

impl Neg for &TorsionClass {
    type Output = TorsionClass;
    fn neg(self) -> TorsionClass {
        TorsionClass { rep: -&self.rep }
    }
}

impl fmt::Display for TorsionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}", self.rep)
        }
    }
}

impl fmt::Debug for TorsionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for TorsionClass {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let f: RationalFn = s.parse()?;
        Ok(TorsionClass::from_fn(&f))
    }
}

impl From<&RationalFn> for TorsionClass {
    fn from(f: &RationalFn) -> Self {
        TorsionClass::from_fn(f)
    }
}

/// Splits `x` into parts with denominators dividing the given pairwise-coprime
/// factors. The parts sum to `x`, and `x` is zero iff every part is.
pub fn coprime_split(x: &TorsionClass, factors: &[LaurentPoly]) -> Result<Vec<TorsionClass>, RingError> {
    for (i, a) in factors.iter().enumerate() {
        if a.is_zero() {
            return Err(RingError::InvalidInput("zero factor".into()));
        }
        for (j, b) in factors.iter().enumerate().skip(i + 1) {
            if !a.is_coprime(b) {
                return Err(RingError::NotCoprime { first: i, second: j });
            }
        }
    }
    let monic: Vec<LaurentPoly> = factors.iter().map(LaurentPoly::monic_associate).collect();
    let product = monic.iter().fold(LaurentPoly::one(), |acc, f| &acc * f);
    if x.is_zero() {
        return Ok(vec![TorsionClass::zero(); factors.len()]);
    }
    let cof = product.div_exact(x.denominator()).ok_or(RingError::NotAnnihilated)?;
    let big_num = x.numerator() * &cof;
    let mut parts = Vec::with_capacity(factors.len());
    for f in &monic {
        if f.is_one() {
            parts.push(TorsionClass::zero());
            continue;
        }
        let rest = product.div_exact(f).expect("factor divides product");
        // u * rest = 1 mod f
        let (g, u, _) = rest.ext_gcd(f);
        debug_assert!(g.is_one());
        parts.push(TorsionClass::new(&big_num * &u, f.clone())?);
    }
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tc(s: &str) -> TorsionClass {
        s.parse().unwrap()
    }
    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn reduction_is_canonical() {
        assert!(tc("(t^2 - 4)/(t - 2)").is_zero());
        // t = 2 modulo t - 2, so t^-1/(t-2) equals (1/2)/(t-2)
        assert_eq!(tc("(t^-1)/(t - 2)"), tc("(1/2)/(t - 2)"));
        let x = tc("(t^5 + 3)/(t^2 - t + 1)");
        assert!(x.numerator().span().unwrap() < 2);
        assert_eq!(&x - &x, TorsionClass::zero());
    }

    #[test]
    fn conjugation_is_involutive() {
        let x = tc("(3*t + 1)/(2*t^2 - 5*t + 2)");
        assert_eq!(x.conj().conj(), x);
    }

    #[test]
    fn split_nine46_shape() {
        // -(t-1)(1/(2t-1) + 1/(t-2)) splits into its two displayed summands
        let a = tc("(1 - t)/(2*t - 1)");
        let b = tc("(1 - t)/(t - 2)");
        let x = &a + &b;
        let parts = coprime_split(&x, &[p("2*t - 1"), p("t - 2")]).unwrap();
        assert_eq!(parts, vec![a, b]);
    }

    #[test]
    fn split_recombines() {
        let x = tc("(3*t + 1)/(2*t^2 - 5*t + 2)");
        let parts = coprime_split(&x, &[p("t - 2"), p("2*t - 1")]).unwrap();
        let sum = parts.iter().fold(TorsionClass::zero(), |acc, y| &acc + y);
        assert_eq!(sum, x);
        assert!(parts[0].mul_poly(&p("t - 2")).is_zero());
        assert!(parts[1].mul_poly(&p("2*t - 1")).is_zero());
    }

    #[test]
    fn split_errors() {
        let x = tc("(1)/(t - 2)");
        assert!(matches!(coprime_split(&x, &[p("t - 2"), p("2*t - 4")]), Err(RingError::NotCoprime { .. })));
        assert!(matches!(coprime_split(&x, &[p("2*t - 1")]), Err(RingError::NotAnnihilated)));
        let z = coprime_split(&TorsionClass::zero(), &[p("t"), p("t + 1")]).unwrap();
        assert!(z.iter().all(TorsionClass::is_zero));
    }

    #[test]
    fn coordinates_round_trip() {
        let big = p("2*t^2 - 5*t + 2").monic_associate();
        let x = tc("(1)/(t - 2)");
        let c = x.coords_over(&big).unwrap();
        assert_eq!(TorsionClass::from_coords(&big, &c), x);
        assert!(tc("(1)/(t - 3)").coords_over(&big).is_none());
    }
}
