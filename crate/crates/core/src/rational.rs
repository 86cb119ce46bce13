//! Exact rationals shared by every module, with the literal grammar used on
//! the command line: `p/q`, integers, and finite decimals such as `2.5`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Exact rational number.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p/q`, an integer, or a decimal literal without going through
/// floating point.
pub fn parse_rational(src: &str) -> Result<Q> {
    let s = src.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational literal".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = parse_decimal(num)?;
        let d = parse_decimal(den)?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(n / d);
    }
    parse_decimal(s)
}

fn parse_decimal(src: &str) -> Result<Q> {
    let s = src.trim();
    let bad = || Error::Parse(format!("invalid number `{src}`"));
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let digits_ok = |p: &str| p.chars().all(|c| c.is_ascii_digit());
    if !digits_ok(int_part) || !digits_ok(frac_part) {
        return Err(bad());
    }
    let mut all = String::with_capacity(int_part.len() + frac_part.len());
    all.push_str(int_part);
    all.push_str(frac_part);
    let numer: BigInt = all.parse().map_err(|_| bad())?;
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let v = Q::new(numer, denom);
    Ok(if neg { -v } else { v })
}

pub fn format_rational(v: &Q) -> String {
    v.to_string()
}
