//! Exact arithmetic in Λ = Q[t, t^-1], its fraction field Q(t), and Q(t)/Λ.

mod alg;
pub(crate) mod dense;
mod fraction;
mod laurent;
mod parse;
mod torsion;

use thiserror::Error;

pub use alg::{gcd_free_basis, linear_factors, multiplicity, normalize_alexander, primitive_integral, symmetric_quadratic_tests, QuadraticTests};
pub use fraction::{in_lambda, RationalFn};
pub use laurent::LaurentPoly;
pub use parse::ParseError;
pub use torsion::{coprime_split, TorsionClass};

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("factors {first} and {second} are not coprime")]
    NotCoprime { first: usize, second: usize },
    #[error("product of the factors does not annihilate the class")]
    NotAnnihilated,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
}

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for `n/d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Parses a rational such as `-5` or `2/3`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    let p: LaurentPoly = s.parse()?;
    if !p.is_constant() {
        return Err(ParseError { position: 0, message: format!("'{s}' is not a rational constant") });
    }
    Ok(p.coeff(0))
}

macro_rules! serde_via_string {
    ($($ty:ty),*) => {$(
        impl serde::Serialize for $ty {
            fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> serde::Deserialize<'de> for $ty {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let s = <std::borrow::Cow<'de, str>>::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    )*};
}

serde_via_string!(LaurentPoly, RationalFn, TorsionClass);
