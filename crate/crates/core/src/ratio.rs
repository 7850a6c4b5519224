//! Exact rational numbers and their textual forms.
//!
//! The toolkit leans on `num`'s arbitrary-precision rationals; this module
//! adds the literal grammar used by game files and reports: an optional
//! sign, then either `p`, `p/q` (q positive), or a decimal with at most 12
//! fractional digits. Decimals are converted exactly.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always reduced, denominator positive.
pub type Rational = num_rational::BigRational;

/// Largest number of fractional digits accepted in decimal literals.
pub const MAX_DECIMAL_DIGITS: usize = 12;

/// Shorthand for a rational from an integer.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `p/q`. Panics if `q == 0`.
pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Error produced by [`parse`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal {0:?}")]
    Invalid(String),
    #[error("denominator must be positive in {0:?}")]
    ZeroDenominator(String),
    #[error("at most {MAX_DECIMAL_DIGITS} fractional digits are supported, got {0:?}")]
    TooManyDigits(String),
}

/// Parses `p`, `p/q`, or a decimal literal, exactly.
pub fn parse(text: &str) -> Result<Rational, ParseRationalError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let bad = || ParseRationalError::Invalid(text.to_owned());
    let (sign, rest) = match s.strip_prefix('-') {
        Some(r) => (-1, r),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let digits = |part: &str| -> Result<BigInt, ParseRationalError> {
        if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        Ok(part.parse::<BigInt>().expect("checked digits"))
    };
    let value = if let Some((num, den)) = rest.split_once('/') {
        let num = digits(num)?;
        let den = digits(den)?;
        if den.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(text.to_owned()));
        }
        Rational::new(num, den)
    } else if let Some((whole, fractional)) = rest.split_once('.') {
        if fractional.len() > MAX_DECIMAL_DIGITS {
            return Err(ParseRationalError::TooManyDigits(text.to_owned()));
        }
        let whole = digits(whole)?;
        let frac = digits(fractional)?;
        let scale = BigInt::from(10u8).pow(fractional.len() as u32);
        Rational::new(whole * &scale + frac, scale)
    } else {
        Rational::from_integer(digits(rest)?)
    };
    Ok(if sign < 0 { -value } else { value })
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn display(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal approximation for human-facing output.
pub fn approx(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse("54").unwrap(), int(54));
        assert_eq!(parse("-10").unwrap(), int(-10));
        assert_eq!(parse("+3/4").unwrap(), frac(3, 4));
        assert_eq!(parse("-6/4").unwrap(), frac(-3, 2));
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse("0.25").unwrap(), frac(1, 4));
        assert_eq!(parse("-1.5").unwrap(), frac(-3, 2));
        assert_eq!(parse("0.333333333333").unwrap(), frac(333_333_333_333, 1_000_000_000_000));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", " ", "1/0", "1/-2", "1.2.3", "a", "1e3", "0.1234567890123", "--2", "/3"] {
            assert!(parse(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn canonical_display() {
        assert_eq!(display(&frac(6, 4)), "3/2");
        assert_eq!(display(&int(-7)), "-7");
        assert_eq!(display(&frac(-6, 4)), "-3/2");
    }
}
