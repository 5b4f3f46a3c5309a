//! Exact rational arithmetic used everywhere in the crate.
//!
//! All certified quantities (function values, weights, LP solutions,
//! perturbations) are carried as arbitrary-precision rationals in lowest
//! terms. There is no floating-point fallback on any certified path.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Arbitrary-precision rational, always reduced, denominator positive.
pub type Rational = num_rational::BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational from an integer pair. Panics on zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p"` or `"p/q"` in base 10 into a reduced rational.
///
/// Rejects empty parts, a zero denominator, and any trailing garbage.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let bad = || Error::MalformedRational(s.to_string());
    let mut parts = s.splitn(2, '/');
    let num_str = parts.next().ok_or_else(bad)?.trim();
    let num: BigInt = num_str.parse().map_err(|_| bad())?;
    match parts.next() {
        None => Ok(Rational::from_integer(num)),
        Some(den_str) => {
            let den: BigInt = den_str.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(num, den))
        }
    }
}

/// Canonical text form: lowest terms, `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// The denominator of `x` in lowest terms, as an unsigned integer.
pub fn denominator(x: &Rational) -> BigUint {
    x.denom().magnitude().clone()
}

/// Largest denominator appearing in `xs` (at least 1, also for empty input).
pub fn max_denominator(xs: &[Rational]) -> BigUint {
    xs.iter()
        .map(denominator)
        .max()
        .unwrap_or_else(BigUint::one)
}

/// Least common multiple of the denominators of `xs` (1 for empty input).
pub fn lcm_denominator(xs: &[Rational]) -> BigInt {
    let mut acc = BigInt::one();
    for x in xs {
        acc = num_integer::lcm(acc, x.denom().abs());
    }
    acc
}

/// True when every entry is an integer.
pub fn all_integers(xs: &[Rational]) -> bool {
    xs.iter().all(|x| x.is_integer())
}

/// Rounds `x` to the nearest multiple of 2^-bits (ties toward +inf).
pub fn round_to_dyadic(x: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    let scaled = x * Rational::from_integer(scale.clone());
    let floor = scaled.floor();
    let frac = &scaled - &floor;
    let nearest = if frac * rat(2) >= Rational::one() {
        floor.numer() + BigInt::one()
    } else {
        floor.numer().clone()
    };
    Rational::new(nearest, scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "5", "-3", "2/4", "-7/3", "10/5"] {
            let x = parse_rational(s).unwrap();
            let y = parse_rational(&format_rational(&x)).unwrap();
            assert_eq!(x, y);
        }
        assert_eq!(format_rational(&parse_rational("2/4").unwrap()), "1/2");
        assert_eq!(format_rational(&parse_rational("10/5").unwrap()), "2");
        assert_eq!(format_rational(&parse_rational("-7/3").unwrap()), "-7/3");
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "1/0", "x", "1/2/3", "1.5", "2/"] {
            assert!(parse_rational(s).is_err(), "accepted {s:?}");
        }
    }

    #[test]
    fn dyadic_rounding_is_close() {
        let x = ratio(1, 3);
        let r = round_to_dyadic(&x, 16);
        assert!((&r - &x).abs() <= ratio(1, 65536));
        assert!(denominator(&r) <= BigUint::from(65536u32));
    }

    #[test]
    fn denominator_helpers() {
        let xs = vec![ratio(1, 2), ratio(1, 3), rat(4)];
        assert_eq!(max_denominator(&xs), BigUint::from(3u32));
        assert_eq!(lcm_denominator(&xs), BigInt::from(6));
        assert!(!all_integers(&xs));
        assert!(all_integers(&[rat(1), rat(-2)]));
    }
}
