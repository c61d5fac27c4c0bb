//! Exact rational scalar type and formatting helpers.
//!
//! Values are always stored normalized: positive denominator, numerator and
//! denominator coprime. Equality is therefore structural, which the engine
//! relies on for deduplication and error-class grouping.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Arbitrary-precision rational number. Backed by `num_rational::BigRational`,
/// which maintains the normalization invariants on every operation.
pub type Rational = num_rational::BigRational;

/// Rational from an integer numerator/denominator pair. Panics on `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Rational from an integer.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `base^exp` for a non-negative integer exponent.
pub fn pow(base: &Rational, exp: u32) -> Rational {
    let mut acc = int(1);
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Nearest `f64` approximation, for display and for the Lloyd search.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().expect("rational representable as f64")
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse(s: &str) -> Result<Rational, Error> {
    let invalid = || Error::InvalidArgument(format!("malformed rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| invalid())?;
    let d: BigInt = den.parse().map_err(|_| invalid())?;
    if d.is_zero() {
        return Err(invalid());
    }
    Ok(Rational::new(n, d))
}

/// Canonical exact string: `"p/q"`, or `"p"` when the value is an integer.
/// This is the form used on every serialized surface.
pub fn format_exact(r: &Rational) -> String {
    r.to_string()
}

/// Decimal rendering with six fractional digits, the table format.
pub fn format_decimal6(r: &Rational) -> String {
    format!("{:.6}", to_f64(r))
}

/// True if `r` lies in the closed unit interval.
pub fn in_unit_interval(r: &Rational) -> bool {
    !r.is_negative() && *r <= int(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratios_are_normalized() {
        assert_eq!(ratio(2, 4), ratio(1, 2));
        assert_eq!(ratio(-3, -9), ratio(1, 3));
        assert_eq!(ratio(3, -9), ratio(-1, 3));
        assert!(ratio(3, -9).denom() > &BigInt::from(0));
    }

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["31/288", "7/32", "1", "0", "-5/96"] {
            let r = parse(s).unwrap();
            assert_eq!(format_exact(&r), s);
        }
        assert!(parse("1/0").is_err());
        assert!(parse("x/2").is_err());
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        assert_eq!(pow(&ratio(1, 3), 5), ratio(1, 243));
        assert_eq!(pow(&ratio(2, 1), 0), int(1));
    }
}
