//! Exact rational scalars.
//!
//! Everything in this crate that looks like a number is a [`QRat`]:
//! monomial coefficients, exponents (half-integers like `t2^(1/2)` and
//! general rationals like `q^(2/3)` are first class), slopes, and the
//! quasi-periodicity bookkeeping. No floating point is involved anywhere
//! except the explicitly numeric evaluation oracle.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type QRat = BigRational;

/// The rational `n`.
pub fn qint(n: i64) -> QRat {
    QRat::from_integer(BigInt::from(n))
}

/// The rational `p/q`. Panics if `q == 0` (programming error, not input).
pub fn qrat(p: i64, q: i64) -> QRat {
    assert!(q != 0, "zero denominator");
    QRat::new(BigInt::from(p), BigInt::from(q))
}

/// Floor of a rational as a `BigInt`-backed rational, returned as `i64`.
///
/// The exponents handled by the normal form stay tiny (the examples never
/// leave single digits), so an `i64` floor is safe; an overflow here would
/// mean the input was degenerate to begin with.
pub fn qfloor(x: &QRat) -> Result<i64> {
    x.floor()
        .to_integer()
        .to_i64()
        .ok_or_else(|| Error::validation(format!("q-exponent {x} out of supported range")))
}

/// True if `x` is an integer.
pub fn is_integer(x: &QRat) -> bool {
    x.is_integer()
}

/// `x` as `i64` if it is an integer in range.
pub fn to_i64(x: &QRat) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

/// Render a rational in the text grammar: `5`, `-5`, `3/2`, `-3/2`.
pub fn format_qrat(x: &QRat) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse a rational written as `p` or `p/q` with an optional leading sign.
pub fn parse_qrat(text: &str) -> Result<QRat> {
    let bad = || Error::validation(format!("`{text}` is not a rational number"));
    let s = text.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let p: BigInt = num.parse().map_err(|_| bad())?;
    let q: BigInt = den.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(QRat::new(p, q))
}

/// `base^exp` for integer `exp` (negative allowed; `0^0 = 1`).
pub fn qpow(base: &QRat, exp: i64) -> Result<QRat> {
    if base.is_zero() {
        return match exp {
            0 => Ok(QRat::one()),
            e if e > 0 => Ok(QRat::zero()),
            _ => Err(Error::pole("0 raised to a negative power".to_string())),
        };
    }
    let mag: i32 = exp
        .unsigned_abs()
        .try_into()
        .map_err(|_| Error::validation(format!("exponent {exp} out of range")))?;
    let powed = base.pow(mag);
    Ok(if exp >= 0 { powed } else { powed.recip() })
}

/// Sign of a rational as -1, 0, or 1.
pub fn qsign(x: &QRat) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

// ====================================================================
// Tests
// ====================================================================
