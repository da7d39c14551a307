//! Text grammar for Laurent polynomials and rational functions.
//!
//! Terms are `c`, `c*t`, `c*t^k` (also `t`, `-t^-2`, `2t`), joined by `+`/`-`.
//! Coefficients are integers or fractions such as `2/3`. A rational function
//! is either a polynomial or `(p)/(q)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{LaurentPoly, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the parsed string.
    pub position: usize,
    pub message: String,
}

impl ParseError {
    fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError { position, message: message.into() }
    }

    pub(crate) fn offset(mut self, by: usize) -> Self {
        self.position += by;
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at offset {}", self.message, self.position)
    }
}

impl std::error::Error for ParseError {}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).ok()?;
        s.parse().ok()
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let paren = self.eat(b'(');
        self.skip_ws();
        let start = self.pos;
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let n = self
            .digits()
            .ok_or_else(|| ParseError::new(start, "expected integer exponent"))?;
        let n: i64 = n
            .try_into()
            .map_err(|_| ParseError::new(start, "exponent out of range"))?;
        if paren && !self.eat(b')') {
            return Err(ParseError::new(self.pos, "expected ')'"));
        }
        Ok(if neg { -n } else { n })
    }

    fn coefficient(&mut self) -> Result<Option<Rational>, ParseError> {
        let Some(num) = self.digits() else {
            return Ok(None);
        };
        let save = self.pos;
        if self.eat(b'/') {
            let at = self.pos;
            let den = self
                .digits()
                .ok_or_else(|| ParseError::new(at, "expected denominator"))?;
            if den.is_zero() {
                return Err(ParseError::new(at, "zero denominator"));
            }
            return Ok(Some(Rational::new(num, den)));
        }
        self.pos = save;
        Ok(Some(Rational::from_integer(num)))
    }

    /// One unsigned term `[c][*]t[^k]` or `c`.
    fn term(&mut self) -> Result<(Rational, i64), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let coeff = self.coefficient()?;
        let had_star = coeff.is_some() && self.eat(b'*');
        self.skip_ws();
        if self.peek() == Some(b't') {
            self.pos += 1;
            let exp = if self.eat(b'^') { self.integer()? } else { 1 };
            Ok((coeff.unwrap_or_else(Rational::one), exp))
        } else if had_star {
            Err(ParseError::new(self.pos, "expected 't' after '*'"))
        } else {
            match coeff {
                Some(c) => Ok((c, 0)),
                None => Err(ParseError::new(start, "expected coefficient or 't'")),
            }
        }
    }

    fn polynomial(&mut self) -> Result<LaurentPoly, ParseError> {
        self.skip_ws();
        if self.peek().is_none() {
            return Err(ParseError::new(self.pos, "empty polynomial"));
        }
        let mut acc = LaurentPoly::zero();
        let mut negative = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        loop {
            let (c, e) = self.term()?;
            let c = if negative { -c } else { c };
            acc += &LaurentPoly::monomial(c, e);
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    negative = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negative = true;
                }
                _ => break,
            }
        }
        Ok(acc)
    }
}

pub(crate) fn parse_laurent(s: &str) -> Result<LaurentPoly, ParseError> {
    let mut cur = Cursor { src: s.as_bytes(), pos: 0 };
    let p = cur.polynomial()?;
    cur.skip_ws();
    if cur.pos != s.len() {
        return Err(ParseError::new(cur.pos, format!("unexpected character '{}'", s[cur.pos..].chars().next().unwrap())));
    }
    Ok(p)
}

/// Parses `p` or `(p)/(q)` into a numerator/denominator pair.
pub(crate) fn parse_fraction(s: &str) -> Result<(LaurentPoly, LaurentPoly), ParseError> {
    let trimmed_start = s.len() - s.trim_start().len();
    let body = s.trim();
    if !body.starts_with('(') {
        return Ok((parse_laurent(s)?, LaurentPoly::one()));
    }
    let close = matching_paren(body).ok_or_else(|| ParseError::new(trimmed_start, "unbalanced '('"))?;
    let num = parse_laurent(&body[1..close]).map_err(|e| e.offset(trimmed_start + 1))?;
    let rest = &body[close + 1..];
    let rest_off = trimmed_start + close + 1;
    let after = rest.trim_start();
    if after.is_empty() {
        return Ok((num, LaurentPoly::one()));
    }
    let slash_off = rest_off + (rest.len() - after.len());
    let Some(den_src) = after.strip_prefix('/') else {
        return Err(ParseError::new(slash_off, "expected '/'"));
    };
    let den_trim = den_src.trim_start();
    let den_off = slash_off + 1 + (den_src.len() - den_trim.len());
    let den_body = den_trim.trim_end();
    if den_body.starts_with('(') {
        let close2 = matching_paren(den_body).ok_or_else(|| ParseError::new(den_off, "unbalanced '('"))?;
        if close2 + 1 != den_body.len() {
            return Err(ParseError::new(den_off + close2 + 1, "trailing input after denominator"));
        }
        let den = parse_laurent(&den_body[1..close2]).map_err(|e| e.offset(den_off + 1))?;
        Ok((num, den))
    } else {
        let den = parse_laurent(den_body).map_err(|e| e.offset(den_off))?;
        Ok((num, den))
    }
}

fn matching_paren(s: &str) -> Option<usize> {
    let mut depth = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth = depth.checked_sub(1)?;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}
