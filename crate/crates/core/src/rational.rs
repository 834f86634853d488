//! Exact rational scalars.
//!
//! Every coordinate and measure value in this crate is a [`Rational`];
//! there is no floating point anywhere. Values are serialized as
//! decimal-free `"p/q"` strings (plain `"p"` when the denominator is 1).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Shorthand constructor for small rationals.
///
/// Panics on a zero denominator; use [`parse_rational`] for untrusted input.
pub fn rat(numerator: i64, denominator: i64) -> Rational {
    assert!(denominator != 0, "zero denominator");
    BigRational::new(BigInt::from(numerator), BigInt::from(denominator))
}

/// Integer as a rational.
pub fn int(n: i64) -> Rational {
    BigRational::from(BigInt::from(n))
}

/// Parse an exact `"p/q"` (or plain `"p"`) string.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Schema("empty rational".into()));
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let numerator: BigInt = num
        .parse()
        .map_err(|_| Error::Schema(format!("bad rational numerator in {s:?}")))?;
    let denominator: BigInt = match den {
        Some(d) => d
            .parse()
            .map_err(|_| Error::Schema(format!("bad rational denominator in {s:?}")))?,
        None => BigInt::one(),
    };
    if denominator.is_zero() {
        return Err(Error::Schema(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(numerator, denominator))
}

/// Format as a decimal-free string, `"p/q"` or `"p"`.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// True when `0 <= r <= 1`.
pub fn in_unit_interval(r: &Rational) -> bool {
    *r >= Rational::zero() && *r <= Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "1", "1/2", "49/100", "25/49", "-3/7"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
        }
    }

    #[test]
    fn parse_normalizes() {
        assert_eq!(parse_rational("2/4").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("3/1").unwrap(), int(3));
        assert_eq!(parse_rational("4/-8").unwrap(), rat(-1, 2));
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "0.5", "1/0", "a/b", "1/2/3"] {
            assert!(parse_rational(s).is_err(), "accepted {s:?}");
        }
    }

    #[test]
    fn exact_arithmetic() {
        let third = rat(1, 3);
        assert_eq!(&third + &third + &third, int(1));
        assert_eq!(rat(1, 2) * rat(2, 3), rat(1, 3));
    }

    #[test]
    fn unit_interval_bounds() {
        assert!(in_unit_interval(&rat(0, 1)));
        assert!(in_unit_interval(&rat(1, 1)));
        assert!(!in_unit_interval(&rat(-1, 5)));
        assert!(!in_unit_interval(&rat(6, 5)));
    }
}
