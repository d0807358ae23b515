//! Exact rational arithmetic helpers. Densities, kernel values and weights
//! are all `BigRational`; nothing in this crate ever rounds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `p/q` as an exact rational. Panics on `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// `r^e` by repeated multiplication; `r^0 = 1` (also for `r = 0`).
pub fn rat_pow(r: &Rational, e: usize) -> Rational {
    let mut out = Rational::one();
    for _ in 0..e {
        out *= r;
    }
    out
}

pub fn factorial(k: usize) -> BigInt {
    let mut out = BigInt::one();
    for i in 2..=k {
        out *= BigInt::from(i);
    }
    out
}

/// Falling factorial `(n)_k = n (n-1) ... (n-k+1)`; `(n)_0 = 1`.
pub fn falling(n: usize, k: usize) -> BigInt {
    let mut out = BigInt::one();
    for i in 0..k {
        if i >= n {
            return BigInt::zero();
        }
        out *= BigInt::from(n - i);
    }
    out
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    falling(n, k) / factorial(k)
}

/// Always `p/q`, including integer values (`3` prints as `3/1`).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q`, a plain integer, or a decimal literal such as `0.25`
/// (converted exactly, never through a float).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::ParseError("empty rational".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::ParseError(format!("bad numerator in {s:?}")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::ParseError(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::ParseError(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            int.parse()
                .map_err(|_| Error::ParseError(format!("bad decimal in {s:?}")))?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::ParseError(format!("bad decimal in {s:?}")));
        }
        let frac_num: BigInt = frac
            .parse()
            .map_err(|_| Error::ParseError(format!("bad decimal in {s:?}")))?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let abs = int_part.abs() * &scale + frac_num;
        let signed = if neg { -abs } else { abs };
        return Ok(Rational::new(signed, scale));
    }
    let n: BigInt = s
        .parse()
        .map_err(|_| Error::ParseError(format!("bad rational {s:?}")))?;
    Ok(Rational::from_integer(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-3/4").unwrap(), rat(-3, 4));
        assert_eq!(parse_rational("2").unwrap(), rat_int(2));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-0.125").unwrap(), rat(-1, 8));
        assert_eq!(parse_rational("1.5").unwrap(), rat(3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn format_always_p_over_q() {
        assert_eq!(format_rational(&rat_int(0)), "0/1");
        assert_eq!(format_rational(&rat(6, 8)), "3/4");
    }

    #[test]
    fn combinatorics() {
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(falling(6, 3), BigInt::from(120));
        assert_eq!(falling(3, 5), BigInt::zero());
        assert_eq!(binomial(7, 3), BigInt::from(35));
        assert_eq!(rat_pow(&rat(1, 2), 3), rat(1, 8));
        assert_eq!(rat_pow(&rat_int(0), 0), rat_int(1));
    }
}
