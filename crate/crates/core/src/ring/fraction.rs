use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::Zero;

use super::dense;
use super::parse::{self, ParseError};
use super::{LaurentPoly, Rational, RingError};

/// An element of Q(t) in canonical form.
///
/// The denominator is a monic ordinary polynomial with nonzero constant term
/// and shares no factor with the numerator, so equal functions have equal
/// representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFn {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFn {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, RingError> {
        if den.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RationalFn { num: p, den: LaurentPoly::one() }
    }

    pub fn zero() -> Self {
        Self::from_poly(LaurentPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    fn canonical(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (k, d0) = den.ordinary_part();
        let num = num.shift(-k);
        let (j, n0) = num.ordinary_part();
        let g = dense::gcd(n0, d0);
        let (n1, _) = dense::divrem(n0, &g);
        let (d1, _) = dense::divrem(d0, &g);
        let lead = d1.last().expect("nonzero denominator").recip();
        let num = LaurentPoly::from_coeffs(j, dense::scale(&n1, &lead));
        let den = LaurentPoly::from_dense(dense::monic(&d1));
        RationalFn { num, den }
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True iff the function is a Laurent polynomial.
    pub fn in_lambda(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&LaurentPoly> {
        if self.in_lambda() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn conj(&self) -> Self {
        Self::canonical(self.num.conj(), self.den.conj())
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::canonical(self.den.clone(), self.num.clone()))
        }
    }

    pub fn mul_poly(&self, p: &LaurentPoly) -> Self {
        Self::canonical(&self.num * p, self.den.clone())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFn { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn div(&self, other: &Self) -> Result<Self, RingError> {
        let inv = other.recip().ok_or(RingError::DivisionByZero)?;
        Ok(self * &inv)
    }

    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x)?;
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x)? / d)
    }
}

impl<'a> Add<&'a RationalFn> for &'a RationalFn {
    type Output = RationalFn;
    fn add(self, rhs: &RationalFn) -> RationalFn {
        if self.den == rhs.den {
            return RationalFn::canonical(&self.num + &rhs.num, self.den.clone());
        }
        RationalFn::canonical(&self.num * &rhs.den + &rhs.num * &self.den, &self.den * &rhs.den)
    }
}

impl<'a> Sub<&'a RationalFn> for &'a RationalFn {
    type Output = RationalFn;
    fn sub(self, rhs: &RationalFn) -> RationalFn {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RationalFn> for &'a RationalFn {
    type Output = RationalFn;
    fn mul(self, rhs: &RationalFn) -> RationalFn {
        RationalFn::canonical(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        RationalFn { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.in_lambda() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFn({self})")
    }
}

impl FromStr for RationalFn {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let (n, d) = parse::parse_fraction(s)?;
        RationalFn::new(n, d).map_err(|_| ParseError { position: 0, message: "zero denominator".into() })
    }
}

impl From<LaurentPoly> for RationalFn {
    fn from(p: LaurentPoly) -> Self {
        Self::from_poly(p)
    }
}

/// Membership of a canonical rational function in the Laurent ring.
pub fn in_lambda(f: &RationalFn) -> bool {
    f.in_lambda()
}
