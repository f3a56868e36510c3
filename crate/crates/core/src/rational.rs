//! Exact rational scalars.
//!
//! [`Rational`] is `num_rational::BigRational`, which already keeps the
//! canonical form (positive denominator, reduced, zero as `0/1`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn factorial_q(n: usize) -> Rational {
    Rational::from_integer(factorial(n))
}

/// Falling factorial `m (m-1) ... (m-k+1)`; zero when `k > m`.
pub fn falling_factorial(m: usize, k: usize) -> BigInt {
    if k > m {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(m - i))
}

/// Parses `p` or `p/q` with an optional leading sign.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::InvalidInput(format!("not a rational literal: `{t}`"));
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::InvalidInput(format!("zero denominator in `{t}`")));
    }
    Ok(Rational::new(num, den))
}

/// `p` for integers, `p/q` otherwise.
pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn midpoint(a: &Rational, b: &Rational) -> Rational {
    (a + b) / rat(2)
}

/// A rational of smallest denominator strictly inside `(lo, hi)`, preferring
/// integers. Used to pick readable sample points.
pub fn simple_between(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo < hi);
    let mut den = BigInt::one();
    loop {
        let d = Rational::from_integer(den.clone());
        // smallest k with k/den > lo
        let k = (lo * &d).floor().to_integer() + BigInt::one();
        let cand = Rational::new(k, den.clone());
        if &cand < hi {
            return cand;
        }
        den *= BigInt::from(2);
    }
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}

/// Least common multiple of the denominators.
pub fn denominator_lcm<'a>(it: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    it.into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let q = ratio(4, -6);
        assert_eq!(q.numer(), &BigInt::from(-2));
        assert_eq!(q.denom(), &BigInt::from(3));
        assert_eq!(fmt_rational(&rat(0)), "0");
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-3/6").unwrap(), ratio(-1, 2));
        assert_eq!(fmt_rational(&parse_rational("10/5").unwrap()), "2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn falling() {
        assert_eq!(falling_factorial(5, 2), BigInt::from(20));
        assert_eq!(falling_factorial(3, 3), BigInt::from(6));
        assert_eq!(falling_factorial(2, 3), BigInt::zero());
        assert_eq!(factorial(0), BigInt::one());
    }

    #[test]
    fn simple_points() {
        assert_eq!(simple_between(&ratio(1, 3), &rat(5)), rat(1));
        assert_eq!(simple_between(&ratio(1, 3), &ratio(2, 3)), ratio(1, 2));
        assert_eq!(simple_between(&rat(-2), &rat(-1)), ratio(-3, 2));
    }
}
