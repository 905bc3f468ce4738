//! Exact rational scalars.
//!
//! Every coefficient in the kernel is a [`Rational`]: a big-integer fraction
//! kept in lowest terms with a positive denominator.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_rational::BigRational as Rational;

use crate::error::ParseError;

/// `n / 1`.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n / d`, reduced. Panics if `d == 0`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"-3"`, `"3/7"`, `"-3/7"`. Whitespace around the text is ignored.
pub fn parse_rational(text: &str) -> Result<Rational, ParseError> {
    let t = text.trim();
    let bad = || ParseError::BadRational(t.to_string());
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = match den {
        Some(d) => {
            if d.starts_with('-') || d.starts_with('+') {
                return Err(bad());
            }
            d.parse().map_err(|_| bad())?
        }
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// `k!` as a rational.
pub fn factorial(k: usize) -> Rational {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= BigInt::from(i);
    }
    Rational::from_integer(acc)
}

/// Falling factorial `k (k-1) ... (k-j+1)`; valid for negative `k`.
pub fn falling_factorial(k: i64, j: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..j as i64 {
        acc *= BigInt::from(k - i);
    }
    acc
}

/// Lossy conversion used only for report formatting.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// `base^exp` for a non-negative exponent.
pub fn pow(base: &Rational, exp: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/7").unwrap(), frac(3, 7));
        assert_eq!(parse_rational("-6/4").unwrap(), frac(-3, 2));
        assert_eq!(parse_rational(" 5 ").unwrap(), int(5));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn lowest_terms_positive_denominator() {
        let r = frac(4, -6);
        assert_eq!(r.numer(), &BigInt::from(-2));
        assert_eq!(r.denom(), &BigInt::from(3));
    }

    #[test]
    fn falling_factorial_negative_order() {
        // (-1)(-2)(-3)
        assert_eq!(falling_factorial(-1, 3), BigInt::from(-6));
        assert_eq!(falling_factorial(2, 3), BigInt::zero());
        assert_eq!(falling_factorial(5, 0), BigInt::one());
    }
}
