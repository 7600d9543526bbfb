use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number of unbounded size, always in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Default denominator bound used when a float parameter is rationalised.
pub const RATIONALIZE_MAX_DENOMINATOR: u64 = 1_000_000_000_000;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `(n)!! = n (n - 2) (n - 4) ...`, with `(-1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= BigInt::from(k);
        k -= 2;
    }
    acc
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Parses `"num/den"`, a plain integer, or a finite decimal such as `"-0.25"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = whole.trim_start_matches(['-', '+']);
        if frac.is_empty() && digits.is_empty() {
            return Err(bad());
        }
        if !digits.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let mantissa: BigInt = format!("{digits}{frac}").parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let value = Rational::new(mantissa, scale);
        return Ok(if negative { -value } else { value });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Comma-separated list of rationals, e.g. `"1,-1/2,0.5"`.
pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(parse_rational).collect()
}

/// Best rational approximation of a float with denominator at most `max_den`,
/// by continued-fraction expansion of the float's exact binary value.
pub fn rationalize(x: f64, max_den: u64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::Parse(format!("cannot rationalise non-finite value {x}")));
    }
    let exact = Rational::from_float(x).ok_or_else(|| Error::Parse(format!("{x}")))?;
    let bound = BigInt::from(max_den.max(1));
    if exact.denom() <= &bound {
        return Ok(exact);
    }
    // Convergents h/k of the continued fraction of `exact`.
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    let (mut num, mut den) = (exact.numer().clone(), exact.denom().clone());
    loop {
        let (a, rem) = num.div_mod_floor(&den);
        let k_next = &a * &k + &k_prev;
        if k_next > bound {
            // Best semiconvergent that respects the bound.
            let t = (&bound - &k_prev) / &k;
            let semi = Rational::new(&t * &h + &h_prev, &t * &k + &k_prev);
            let conv = Rational::new(h.clone(), k.clone());
            let d_semi = (&semi - &exact).abs();
            let d_conv = (&conv - &exact).abs();
            return Ok(if d_semi < d_conv { semi } else { conv });
        }
        let h_next = &a * &h + &h_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        if rem.is_zero() {
            return Ok(Rational::new(h, k));
        }
        num = std::mem::replace(&mut den, rem);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_common_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-2").unwrap(), int(-2));
        assert_eq!(parse_rational("-0.25").unwrap(), rat(-1, 4));
        assert_eq!(parse_rational(" 7/-14 ").unwrap(), rat(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert_eq!(parse_rational_list("1,-1").unwrap(), vec![int(1), int(-1)]);
    }

    #[test]
    fn rationalize_recovers_simple_fractions() {
        assert_eq!(rationalize(0.1, RATIONALIZE_MAX_DENOMINATOR).unwrap(), rat(1, 10));
        assert_eq!(rationalize(-1.5, RATIONALIZE_MAX_DENOMINATOR).unwrap(), rat(-3, 2));
        assert_eq!(rationalize(1.0 / 3.0, 1000).unwrap(), rat(1, 3));
        let pi = rationalize(std::f64::consts::PI, 1000).unwrap();
        assert_eq!(pi, rat(355, 113));
        assert!(rationalize(f64::NAN, 10).is_err());
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(double_factorial(-1), BigInt::one());
        assert_eq!(double_factorial(7), BigInt::from(105));
    }
}
