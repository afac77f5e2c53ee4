//! Exact rational helpers and output-layer decimal rendering.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_u64(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rounds to the nearest integer, halves away from zero.
pub fn round_half_up(value: &Rational) -> BigInt {
    let two = BigInt::from(2);
    let num = value.numer().abs();
    let den = value.denom();
    // floor((2|n| + d) / 2d)
    let rounded = (num * &two + den).div_floor(&(den * &two));
    if value.is_negative() {
        -rounded
    } else {
        rounded
    }
}

/// Rounds half away from zero to `places` decimals and renders the result.
pub fn render_decimal(value: &Rational, places: u32) -> String {
    let scale = BigInt::from(10).pow(places);
    let scaled = round_half_up(&(value * Rational::from_integer(scale.clone())));
    let negative = scaled.is_negative();
    let digits = scaled.abs().to_string();
    let body = if places == 0 {
        digits
    } else {
        let width = places as usize + 1;
        let padded = format!("{digits:0>width$}");
        let (int_part, frac_part) = padded.split_at(padded.len() - places as usize);
        format!("{int_part}.{frac_part}")
    };
    if negative && scaled != BigInt::zero() {
        format!("-{body}")
    } else {
        body
    }
}

/// `num/den` rendering; the denominator is always present (`1/1`).
pub fn fraction_string(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn parse_fraction(text: &str) -> Option<Rational> {
    let (n, d) = text.split_once('/')?;
    let n: BigInt = n.trim().parse().ok()?;
    let d: BigInt = d.trim().parse().ok()?;
    (!d.is_zero()).then(|| Rational::new(n, d))
}

/// Parses a plain decimal literal (`12`, `0.25`, `-3.5`) into an exact rational.
pub fn parse_decimal(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (negative, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let joined = format!("{int_part}{frac_part}");
    let num: BigInt = if joined.is_empty() { BigInt::zero() } else { joined.parse().ok()? };
    let den = BigInt::from(10).pow(frac_part.len() as u32);
    let value = Rational::new(num, den);
    Some(if negative { -value } else { value })
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Output form of an exact value: `"11/12"` plus a rounded decimal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exact {
    pub rational: String,
    pub decimal: String,
}

impl Exact {
    pub fn new(value: &Rational, places: u32) -> Self {
        Exact { rational: fraction_string(value), decimal: render_decimal(value, places) }
    }
}
