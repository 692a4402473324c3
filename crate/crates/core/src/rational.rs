//! Exact rational scalars and their text forms.
//!
//! Rationals are written as `num/den` (or a bare integer when `den = 1`),
//! which is also the accepted input syntax. Terminating decimals such as
//! `2.5` are accepted on input and converted exactly.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type BigRat = BigRational;

pub fn rat(n: i64, d: i64) -> BigRat {
    BigRat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: impl Into<BigInt>) -> BigRat {
    BigRat::from_integer(n.into())
}

pub fn from_biguint(n: &BigUint) -> BigRat {
    BigRat::from_integer(BigInt::from_biguint(Sign::Plus, n.clone()))
}

/// `base^exp` for a nonnegative exponent.
pub fn pow(base: &BigRat, exp: u64) -> BigRat {
    let mut acc = BigRat::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    acc
}

/// `base^exp` for any integer exponent; errors on `0^negative`.
pub fn pow_signed(base: &BigRat, exp: i64) -> Result<BigRat> {
    if exp >= 0 {
        return Ok(pow(base, exp as u64));
    }
    if base.is_zero() {
        return Err(Error::Singular("zero raised to a negative power".into()));
    }
    Ok(pow(&base.recip(), exp.unsigned_abs()))
}

/// Parse `p/q`, an integer, or a terminating decimal into an exact rational.
pub fn parse_rat(s: &str) -> Result<BigRat> {
    let s = s.trim();
    let bad = || Error::InvalidParameter(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::InvalidParameter(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRat::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{}{}", whole_digits, frac);
        let mut n = BigInt::from_str(&digits).map_err(|_| bad())?;
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10u32), frac.len());
        return Ok(BigRat::new(n, d));
    }
    BigInt::from_str(s).map(BigRat::from_integer).map_err(|_| bad())
}

/// `num/den`, or just `num` for integers.
pub fn format_rat(q: &BigRat) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Decimal rendering with `digits` significant digits, rounded half away
/// from zero. Uses scientific notation outside `[1e-5, 1e15)`.
pub fn to_decimal(q: &BigRat, digits: usize) -> String {
    let digits = digits.max(1);
    if q.is_zero() {
        return "0".to_string();
    }
    let negative = q.is_negative();
    let x = q.abs();
    // exponent e with 10^e <= x < 10^(e+1)
    let mut e = x.numer().to_string().len() as i64 - x.denom().to_string().len() as i64;
    let ten = int(10);
    loop {
        let lo = pow_signed(&ten, e).expect("nonzero base");
        if x < lo {
            e -= 1;
            continue;
        }
        if x >= &lo * &ten {
            e += 1;
            continue;
        }
        break;
    }
    // integer with exactly `digits` digits (possibly digits+1 after carry)
    let shift = digits as i64 - 1 - e;
    let scaled = &x * pow_signed(&ten, shift).expect("nonzero base");
    let (mut m, rem) = scaled.numer().div_rem(scaled.denom());
    if rem * 2 >= *scaled.denom() {
        m += 1;
    }
    let mut mant = m.to_string();
    if mant.len() > digits {
        mant.truncate(digits);
        e += 1;
    }
    let sign = if negative { "-" } else { "" };
    if (-5..15).contains(&e) {
        let body = if e >= 0 {
            let int_len = (e + 1) as usize;
            if mant.len() <= int_len {
                format!("{}{}", mant, "0".repeat(int_len - mant.len()))
            } else {
                format!("{}.{}", &mant[..int_len], &mant[int_len..])
            }
        } else {
            format!("0.{}{}", "0".repeat((-e - 1) as usize), mant)
        };
        format!("{sign}{body}")
    } else {
        let tail = if mant.len() > 1 { format!(".{}", &mant[1..]) } else { String::new() };
        format!("{sign}{}{}e{}", &mant[..1], tail, e)
    }
}

pub fn to_f64(q: &BigRat) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Serde adapter writing a rational as its `num/den` string.
pub mod serde_rat {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rat, parse_rat, BigRat};

    pub fn serialize<S: Serializer>(q: &BigRat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

/// Same as [`serde_rat`] for vectors.
pub mod serde_rat_vec {
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rat, parse_rat, BigRat};

    pub fn serialize<S: Serializer>(qs: &[BigRat], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(qs.len()))?;
        for q in qs {
            seq.serialize_element(&format_rat(q))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRat>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rat(s).map_err(serde::de::Error::custom))
            .collect()
    }
}
