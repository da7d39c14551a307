use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::dense;
use super::parse::{self, ParseError};
use super::Rational;

/// An element of Q[t, t^-1].
///
/// Stored densely as `t^low * (c_0 + c_1 t + ... + c_k t^k)` with `c_0` and
/// `c_k` nonzero. The zero polynomial has no coefficients and `low == 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { low: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// The indeterminate `t`.
    pub fn t() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(c)))
    }

    pub fn monomial(c: Rational, exp: i64) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            LaurentPoly { low: exp, coeffs: vec![c] }
        }
    }

    /// Builds `t^low * sum coeffs[i] t^i`, normalizing away zero ends.
    pub fn from_coeffs(low: i64, coeffs: Vec<Rational>) -> Self {
        let mut coeffs = coeffs;
        dense::trim(&mut coeffs);
        let lead_zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros == coeffs.len() {
            return Self::zero();
        }
        coeffs.drain(..lead_zeros);
        LaurentPoly { low: low + lead_zeros as i64, coeffs }
    }

    /// Integer coefficients, lowest exponent first.
    pub fn from_ints(low: i64, coeffs: &[i64]) -> Self {
        Self::from_coeffs(low, coeffs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
    }

    pub(crate) fn from_dense(v: Vec<Rational>) -> Self {
        Self::from_coeffs(0, v)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Units of the Laurent ring are the nonzero monomials `q t^k`.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.is_zero() || (self.low == 0 && self.coeffs.len() == 1)
    }

    pub fn low_exp(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.low)
        }
    }

    pub fn high_exp(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.low + self.coeffs.len() as i64 - 1)
        }
    }

    /// `high - low`; the Euclidean size on the Laurent ring.
    pub fn span(&self) -> Option<usize> {
        dense::degree(&self.coeffs)
    }

    pub fn coeff(&self, exp: i64) -> Rational {
        let i = exp - self.low;
        if i < 0 || i as usize >= self.coeffs.len() {
            Rational::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    /// Nonzero terms as `(exponent, coefficient)`, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn trailing_coeff(&self) -> Option<&Rational> {
        self.coeffs.first()
    }

    /// The Q-linear involution `t^k -> t^-k`.
    pub fn conj(&self) -> Self {
        match self.high_exp() {
            None => Self::zero(),
            Some(high) => {
                let coeffs = self.coeffs.iter().rev().cloned().collect();
                LaurentPoly { low: -high, coeffs }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { low: self.low, coeffs: dense::scale(&self.coeffs, c) }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentPoly { low: self.low + k, coeffs: self.coeffs.clone() }
    }

    /// Splits off the unit power of `t`: `self = t^k * p` with `p(0) != 0`.
    pub fn ordinary_part(&self) -> (i64, &[Rational]) {
        (self.low, &self.coeffs)
    }

    /// The associate `t^-low * self`, an ordinary polynomial with nonzero constant term.
    pub fn ordinary(&self) -> Self {
        LaurentPoly { low: 0, coeffs: self.coeffs.clone() }
    }

    /// The monic ordinary-polynomial associate; zero stays zero.
    pub fn monic_associate(&self) -> Self {
        LaurentPoly::from_dense(dense::monic(&self.coeffs))
    }

    /// True when `self` and `other` differ by a unit `q t^k`.
    pub fn associate_of(&self, other: &Self) -> bool {
        self.monic_associate() == other.monic_associate()
    }

    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if x.is_zero() && self.low < 0 {
            return None;
        }
        let base = dense::eval(&self.coeffs, x);
        Some(base * pow_rational(x, self.low))
    }

    /// Euclidean division in the Laurent ring: `self = q*d + r` with `span r < span d`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "Laurent division by zero");
        if self.is_zero() {
            return (Self::zero(), Self::zero());
        }
        let (q0, r0) = dense::divrem(&self.coeffs, &d.coeffs);
        let q = LaurentPoly::from_coeffs(self.low - d.low, q0);
        let r = LaurentPoly::from_coeffs(self.low, r0);
        (q, r)
    }

    /// `self / d` when `d` divides `self` in the Laurent ring.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(d);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.div_exact(self).is_some()
    }

    /// Monic ordinary gcd after extracting unit powers of `t`.
    pub fn gcd(&self, other: &Self) -> Self {
        LaurentPoly::from_dense(dense::gcd(&self.coeffs, &other.coeffs))
    }

    /// Returns `(g, s, u)` with `s*self + u*other = g`, `g = gcd(self, other)`.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (g, s, u) = dense::ext_gcd(&self.coeffs, &other.coeffs);
        (
            LaurentPoly::from_dense(g),
            LaurentPoly::from_coeffs(-self.low, s),
            LaurentPoly::from_coeffs(-other.low, u),
        )
    }

    pub fn is_coprime(&self, other: &Self) -> bool {
        self.gcd(other).is_one()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn is_symmetric(&self) -> bool {
        self.conj() == *self
    }

    /// All coefficients are integers.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub(crate) fn dense(&self) -> &[Rational] {
        &self.coeffs
    }
}

fn pow_rational(x: &Rational, e: i64) -> Rational {
    let mut acc = Rational::one();
    let base = if e < 0 { x.recip() } else { x.clone() };
    for _ in 0..e.unsigned_abs() {
        acc *= &base;
    }
    acc
}

impl Default for LaurentPoly {
    fn default() -> Self {
        Self::zero()
    }
}

impl PartialOrd for LaurentPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by span, then lowest exponent, then coefficients from the top down.
/// Only used to make outputs deterministic.
impl Ord for LaurentPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then(self.low.cmp(&other.low))
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let low = self.low.min(rhs.low);
        let a = pad(self, low);
        let b = pad(rhs, low);
        LaurentPoly::from_coeffs(low, dense::add(&a, &b))
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return -rhs;
        }
        let low = self.low.min(rhs.low);
        let a = pad(self, low);
        let b = pad(rhs, low);
        LaurentPoly::from_coeffs(low, dense::sub(&a, &b))
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly::from_coeffs(self.low + rhs.low, dense::mul(&self.coeffs, &rhs.coeffs))
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { low: self.low, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<LaurentPoly> for &'a LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        *self = &*self - rhs;
    }
}

fn pad(p: &LaurentPoly, low: i64) -> Vec<Rational> {
    let k = (p.low - low) as usize;
    let mut v = vec![Rational::zero(); k];
    v.extend(p.coeffs.iter().cloned());
    v
}

fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Prints terms from the highest exponent down, e.g. `2*t - 5 + 2*t^-1`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let terms: Vec<_> = self.terms().collect();
        for (exp, c) in terms.into_iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let var = match exp {
                0 => String::new(),
                1 => "t".to_string(),
                k => format!("t^{k}"),
            };
            if var.is_empty() {
                write!(f, "{}", fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{}*{var}", fmt_rational(&mag))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl FromStr for LaurentPoly {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse::parse_laurent(s)
    }
}
