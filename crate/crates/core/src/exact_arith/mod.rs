//! Exact rational substrate: digit codes, the series map `λ ↦ π_λ(code)`,
//! and certified brackets around the parameters defined by `π_λ(code) = x`.
//!
//! Nothing in this module rounds. Every comparison between parameter values
//! is decided either symbolically (identical codes) or by exact sign tests
//! on rational inputs, refining brackets on demand.

mod bracket;
mod code;

pub(crate) use bracket::solve_lambda_within;
pub use bracket::{
    compare_brackets, compare_brackets_capped, default_tol, eval_pi, solve_lambda, Bracket, DEFAULT_REFINE_CAP,
};
pub use code::{format_word, parse_word, Code, Tail, Word};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// `n/d` as a [`Rational`]. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `2^k` for any signed exponent.
pub fn pow2(k: i64) -> Rational {
    let p = BigInt::one() << k.unsigned_abs();
    if k >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

/// `1/m`.
pub fn inv_m(m: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(m))
}

/// Convex hull `[x/(m-1+x), 1/m]` of the parameter set of `x`.
pub fn hull_of(x: &Rational, m: u32) -> (Rational, Rational) {
    let lo = x / (Rational::from_integer(BigInt::from(m - 1)) + x);
    (lo, inv_m(m))
}

/// Lossy conversion for display and statistics only.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Rational as an exact `p/q` string (integers keep the `/1`).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses an exact rational from `p/q`, an integer, a plain or scientific
/// decimal (`0.125`, `1e-6`), or a power of two (`2^-64`). Parsing never
/// consults the locale.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("cannot parse {s:?} as a rational"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((base, exp)) = s.split_once('^') {
        let base: i64 = base.trim().parse().map_err(|_| bad())?;
        let exp: i64 = exp.trim().parse().map_err(|_| bad())?;
        if base == 0 || exp.unsigned_abs() > 1 << 20 {
            return Err(bad());
        }
        let b = Rational::from_integer(BigInt::from(base));
        let p = num_traits::pow::pow(b, exp.unsigned_abs() as usize);
        return Ok(if exp >= 0 { p } else { p.recip() });
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    parse_decimal(s).ok_or_else(bad)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    if exp.unsigned_abs() > 100_000 {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
    let digits = digits / BigInt::from(10);
    let scale = exp - frac_part.len() as i64;
    let ten = Rational::from_integer(BigInt::from(10));
    let factor = num_traits::pow::pow(ten, scale.unsigned_abs() as usize);
    let mut r = Rational::from_integer(digits);
    if scale >= 0 {
        r *= factor;
    } else {
        r /= factor;
    }
    Some(if neg { -r } else { r })
}

/// Decimal rendering of `r` rounded half away from zero to `digits`
/// fractional digits.
pub fn format_decimal(r: &Rational, digits: usize) -> String {
    let scale = num_traits::pow::pow(BigInt::from(10), digits);
    let scaled = r * Rational::from_integer(scale.clone());
    let neg = scaled.is_negative();
    let abs = scaled.abs();
    let (q, rem) = abs.numer().div_rem(abs.denom());
    let rounded = if rem.clone() * 2 >= *abs.denom() { q + 1 } else { q };
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let sign = if neg && !(int_part.is_zero() && frac_part.is_zero()) { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    let frac = frac_part.to_str_radix(10);
    format!("{sign}{int_part}.{}{frac}", "0".repeat(digits - frac.len()))
}

/// Decimal rendering of `r` rounded toward −∞ to `digits` fractional
/// digits, so that a rendered lower bound stays a lower bound.
pub fn format_decimal_down(r: &Rational, digits: usize) -> String {
    let scale = Rational::from_integer(num_traits::pow::pow(BigInt::from(10), digits));
    let floored = (r * &scale).floor() / scale;
    format_decimal(&floored, digits)
}

/// Smallest `k ≥ 0` such that `2^-k ≤ r` for positive `r`.
pub(crate) fn log2_ceil_recip(r: &Rational) -> u64 {
    debug_assert!(r.is_positive());
    let t = (r.denom() + r.numer() - BigInt::one()) / r.numer();
    if t.sign() == Sign::NoSign {
        return 0;
    }
    let bits = t.bits();
    // 2^(bits-1) <= t < 2^bits
    if t == BigInt::one() << (bits - 1) {
        bits - 1
    } else {
        bits
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_supported_notation() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), ratio(7, 1));
        assert_eq!(parse_rational("0.125").unwrap(), ratio(1, 8));
        assert_eq!(parse_rational("1e-6").unwrap(), ratio(1, 1_000_000));
        assert_eq!(parse_rational("-2.5E1").unwrap(), ratio(-25, 1));
        assert_eq!(parse_rational("2^-64").unwrap(), pow2(-64));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0,5").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn decimal_rounding_is_half_away_from_zero() {
        assert_eq!(format_decimal(&ratio(1, 3), 6), "0.333333");
        assert_eq!(format_decimal(&ratio(2, 3), 6), "0.666667");
        assert_eq!(format_decimal(&ratio(1, 2), 0), "1");
        assert_eq!(format_decimal(&ratio(-1, 8), 2), "-0.13");
        assert_eq!(format_decimal(&ratio(1, 100), 1), "0.0");
        assert_eq!(format_decimal(&ratio(5, 1), 3), "5.000");
        assert_eq!(format_decimal_down(&ratio(2, 3), 3), "0.666");
        assert_eq!(format_decimal_down(&ratio(-1, 3), 2), "-0.34");
    }

    #[test]
    fn log2_ceil_recip_matches_definition() {
        for (n, d, k) in [(1, 1, 0), (1, 2, 1), (1, 3, 2), (3, 8, 2), (1, 1024, 10), (2, 1, 0)] {
            assert_eq!(log2_ceil_recip(&ratio(n, d)), k, "{n}/{d}");
        }
    }

    #[test]
    fn hull_endpoints() {
        let (lo, hi) = hull_of(&ratio(1, 2), 2);
        assert_eq!(lo, ratio(1, 3));
        assert_eq!(hi, ratio(1, 2));
    }
}
