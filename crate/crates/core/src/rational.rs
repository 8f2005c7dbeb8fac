//! Exact rational arithmetic helpers.
//!
//! All core quantities are carried as [`Rational`] values (arbitrary-precision,
//! canonical reduced form, positive denominator). Floating point appears only
//! in the casebook, where Poisson weights are irrational; there the float is
//! converted to the exact rational it denotes and everything downstream stays
//! exact.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses "p/q", plain integers, and terminating decimals ("0.25", "-1.5").
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num
            .trim()
            .parse()
            .map_err(|_| ParseRationalError::Malformed(s.to_string()))?;
        let den: BigInt = den
            .trim()
            .parse()
            .map_err(|_| ParseRationalError::Malformed(s.to_string()))?;
        if den.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(s.to_string()));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let whole: BigInt = if whole == "-" || whole.is_empty() {
            BigInt::zero()
        } else {
            whole
                .parse()
                .map_err(|_| ParseRationalError::Malformed(s.to_string()))?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseRationalError::Malformed(s.to_string()));
        }
        let digits: BigInt = frac
            .parse()
            .map_err(|_| ParseRationalError::Malformed(s.to_string()))?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part = Rational::new(digits, scale);
        let whole_part = Rational::from_integer(whole);
        return Ok(if negative {
            whole_part - frac_part
        } else {
            whole_part + frac_part
        });
    }
    let n: BigInt = s
        .parse()
        .map_err(|_| ParseRationalError::Malformed(s.to_string()))?;
    Ok(Rational::from_integer(n))
}

/// Prints `p/q` (or just `p` when the denominator is 1).
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// The exact rational denoted by a finite f64.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    // Good enough for reporting: exact for small values, otherwise a close
    // double by scaled integer division.
    let num = r.numer();
    let den = r.denom();
    let fnum = bigint_to_f64(num);
    let fden = bigint_to_f64(den);
    if fnum.is_finite() && fden.is_finite() && fden != 0.0 {
        fnum / fden
    } else {
        // Fall back on a 64-bit-mantissa quotient.
        let shift = 64i64;
        let scaled = (num << shift as u32) / den;
        bigint_to_f64(&scaled) / 2f64.powi(shift as i32)
    }
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    let (sign, digits) = n.to_u64_digits();
    let mut value = 0f64;
    for d in digits.iter().rev() {
        value = value * 2f64.powi(64) + *d as f64;
    }
    if sign == Sign::Minus {
        -value
    } else {
        value
    }
}

/// `~`-prefixed decimal with 12 significant digits, for the casebook's
/// irrational quantities.
pub fn format_approx(x: f64) -> String {
    format!("~{:.*e}", 11, x)
}

pub fn is_nonnegative(r: &Rational) -> bool {
    !r.is_negative()
}
