//! Exact rational scalars.
//!
//! Every numeric value in this crate is a [`Rat`] — an arbitrary-precision
//! rational number. There are no floating-point values anywhere: equality
//! of two results is exact equality, and a nonzero residual is a proof of
//! failure rather than rounding noise.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number.
pub type Rat = num_rational::BigRational;

/// Builds a rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Builds the rational `n / d`.
///
/// # Panics
/// Panics when `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rat {
    assert!(d != 0, "zero denominator");
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Error produced when a string is not a valid `p` or `p/q` rational.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal {input:?}: {reason}")]
pub struct RatParseError {
    /// The rejected input.
    pub input: String,
    /// Why it was rejected.
    pub reason: &'static str,
}

fn bad(input: &str, reason: &'static str) -> RatParseError {
    RatParseError { input: input.to_owned(), reason }
}

/// Parses `"p"` or `"p/q"` (optionally signed) into a rational.
pub fn parse_rat(s: &str) -> Result<Rat, RatParseError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(bad(s, "empty string"));
    }
    let (numer, denom) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let n: BigInt = numer
        .parse()
        .map_err(|_| bad(s, "numerator is not an integer"))?;
    let d: BigInt = match denom {
        Some(d) => d
            .parse()
            .map_err(|_| bad(s, "denominator is not an integer"))?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(bad(s, "zero denominator"));
    }
    Ok(Rat::new(n, d))
}

/// Formats a rational canonically: `"p"` for integers, `"p/q"` otherwise,
/// with `q > 0` and the sign on the numerator.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `k!` as a rational, used by the nilpotent exponential.
pub fn factorial(k: usize) -> Rat {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= BigInt::from(i);
    }
    Rat::from_integer(acc)
}

/// True when the rational is negative.
pub fn is_negative(r: &Rat) -> bool {
    r.is_negative()
}
