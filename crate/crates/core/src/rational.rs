//! Exact rational numbers and their textual forms.
//!
//! Every coefficient in the crate is a [`Rational`]; literals are converted
//! exactly (`0.1` becomes `1/10`, `2.5e-2` becomes `1/40`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Largest decimal exponent accepted in a literal. Keeps `1e999999999` from
/// allocating gigabytes.
const MAX_EXPONENT: i64 = 4096;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses an integer, decimal, scientific, or `p/q` literal with an optional
/// leading sign.
pub fn parse_rational(token: &str) -> Result<Rational, Error> {
    let malformed = || Error::MalformedLiteral(token.to_string());
    let (negative, body) = match token.as_bytes().first() {
        Some(b'-') => (true, &token[1..]),
        Some(b'+') => (false, &token[1..]),
        _ => (false, token),
    };
    if body.is_empty() {
        return Err(malformed());
    }

    let value = if let Some((num, den)) = body.split_once('/') {
        if !is_digits(num) || !is_digits(den) {
            return Err(malformed());
        }
        let num: BigInt = num.parse().map_err(|_| malformed())?;
        let den: BigInt = den.parse().map_err(|_| malformed())?;
        if den.is_zero() {
            return Err(malformed());
        }
        Rational::new(num, den)
    } else {
        let (mantissa, exponent) = match body.find(['e', 'E']) {
            Some(pos) => {
                let exp_text = &body[pos + 1..];
                let digits = exp_text.strip_prefix(['+', '-']).unwrap_or(exp_text);
                if !is_digits(digits) {
                    return Err(malformed());
                }
                let exp: i64 = exp_text.parse().map_err(|_| malformed())?;
                if exp.abs() > MAX_EXPONENT {
                    return Err(malformed());
                }
                (&body[..pos], exp)
            }
            None => (body, 0),
        };
        let (whole, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        if whole.is_empty() && frac.is_empty() {
            return Err(malformed());
        }
        if (!whole.is_empty() && !is_digits(whole)) || (!frac.is_empty() && !is_digits(frac)) {
            return Err(malformed());
        }
        let digits = format!("{whole}{frac}");
        let mantissa: BigInt = digits.parse().map_err(|_| malformed())?;
        let scale = exponent - frac.len() as i64;
        let ten = BigInt::from(10u8);
        if scale >= 0 {
            Rational::from_integer(mantissa * Pow::pow(&ten, scale as u64))
        } else {
            Rational::new(mantissa, Pow::pow(&ten, (-scale) as u64))
        }
    };
    Ok(if negative { -value } else { value })
}

fn is_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

/// Formats a rational losslessly: integers as `3`, power-of-ten denominators
/// as decimals (`1/10` prints `0.1`), anything else as `p/q` (`1/4` stays
/// `1/4`).
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    match decimal_places(r.denom()) {
        Some(places) => {
            let abs = r.numer().abs();
            let scale = Pow::pow(&BigInt::from(10u8), places as u64);
            let (whole, frac) = abs.div_rem(&scale);
            let sign = if r.is_negative() { "-" } else { "" };
            format!("{sign}{whole}.{frac:0>width$}", width = places)
        }
        None => format!("{}/{}", r.numer(), r.denom()),
    }
}

/// `Some(k)` when `den == 10^k`.
fn decimal_places(den: &BigInt) -> Option<usize> {
    let text = den.to_string();
    let (head, tail) = text.split_at(1);
    (head == "1" && tail.bytes().all(|b| b == b'0')).then_some(tail.len())
}

/// Lossy conversion for human-facing summaries only.
pub fn approx_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn is_one(r: &Rational) -> bool {
    r.is_one()
}
