//! Arbitrary-precision rationals and their text format (`p/q` or `p`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ScalarParseError;

/// Exact rational number, always stored in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den`, reduced. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn render_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// For `#[serde(serialize_with = ...)]`: writes the `p/q` text form.
pub fn serialize_rational<S: serde::Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&render_rational(q))
}

/// Parses `p`, `-p`, `p/q` (whitespace around tokens allowed).
pub fn parse_rational(text: &str) -> Result<Rational, ScalarParseError> {
    let t = text.trim();
    let (num_text, den_text) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (t, None),
    };
    let num: BigInt = num_text.parse().map_err(|_| ScalarParseError {
        position: 0,
        message: format!("invalid integer `{num_text}`"),
    })?;
    let den: BigInt = match den_text {
        Some(d) => d.parse().map_err(|_| ScalarParseError {
            position: num_text.len() + 1,
            message: format!("invalid integer `{d}`"),
        })?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(ScalarParseError {
            position: t.len(),
            message: "zero denominator".into(),
        });
    }
    if den.is_negative() {
        return Err(ScalarParseError {
            position: num_text.len() + 1,
            message: "denominator must be positive".into(),
        });
    }
    Ok(Rational::new(num, den))
}
