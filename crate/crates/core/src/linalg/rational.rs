use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always stored in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses a decimal integer or a `p/q` literal.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidRational(s.to_string());
    let t = s.trim();
    let int = |part: &str| -> Result<BigInt> {
        let p = part.trim();
        let digits = p.strip_prefix(['-', '+']).unwrap_or(p);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        p.parse::<BigInt>().map_err(|_| bad())
    };
    match t.split_once('/') {
        None => Ok(Rational::from_integer(int(t)?)),
        Some((p, q)) => {
            let den = int(q)?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(int(p)?, den))
        }
    }
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Converts to `i128` when the value is an integer that fits.
pub fn to_i128(r: &Rational) -> Option<i128> {
    if !r.is_integer() {
        return None;
    }
    i128::try_from(r.numer()).ok()
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Sum of the bit lengths of numerator and denominator, used as a pivot-size heuristic.
pub(crate) fn bit_size(r: &Rational) -> u64 {
    r.numer().bits() + r.denom().bits()
}

/// `serialize_with` adapter writing a rational as its `p/q` string.
pub fn serialize_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}
