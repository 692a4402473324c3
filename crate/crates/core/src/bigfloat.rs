//! Binary floating point with arbitrary precision, used only where exact
//! rationals have to give way to `sqrt` and `pi`.
//!
//! Every constructor rounds an exactly known real to nearest, ties to even:
//! [`BigFloat::from_rational`] rounds a rational, [`BigFloat::sqrt_rational`]
//! rounds the square root of a rational. Arithmetic goes through the exact
//! rational value of the operands, so each operation rounds once.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{to_decimal, BigRat};

pub const DEFAULT_PRECISION: u32 = 128;

/// `mantissa * 2^exponent` with `|mantissa|` exactly `precision` bits wide
/// (or zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigFloat {
    mantissa: BigInt,
    exponent: i64,
    precision: u32,
}

fn bits(x: &BigUint) -> i64 {
    x.bits() as i64
}

fn shifted(x: &BigUint, by: i64) -> BigUint {
    if by >= 0 {
        x << by as u64
    } else {
        x >> (-by) as u64
    }
}

/// Round `num / den` (both scaled so the quotient has `prec` or `prec+1`
/// bits) to nearest-even. Returns the rounded quotient.
fn round_quotient(num: &BigUint, den: &BigUint) -> BigUint {
    let (q, r) = num.div_rem(den);
    let twice = r << 1u32;
    match twice.cmp(den) {
        Ordering::Greater => q + 1u32,
        Ordering::Equal if q.is_odd() => q + 1u32,
        _ => q,
    }
}

impl BigFloat {
    pub fn zero(precision: u32) -> Self {
        BigFloat { mantissa: BigInt::zero(), exponent: 0, precision }
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    fn check_precision(precision: u32) -> Result<()> {
        if !(2..=1 << 20).contains(&precision) {
            return Err(Error::InvalidParameter(format!("precision {precision} bits out of range [2, 2^20]")));
        }
        Ok(())
    }

    fn from_parts(sign: Sign, mut mag: BigUint, mut exponent: i64, precision: u32) -> Self {
        if bits(&mag) > precision as i64 {
            // only reachable when rounding carried into a new bit: mag = 2^precision
            mag >>= 1u32;
            exponent += 1;
        }
        BigFloat { mantissa: BigInt::from_biguint(sign, mag), exponent, precision }
    }

    /// Nearest `precision`-bit float to `q`, ties to even.
    pub fn from_rational(q: &BigRat, precision: u32) -> Result<Self> {
        Self::check_precision(precision)?;
        if q.is_zero() {
            return Ok(Self::zero(precision));
        }
        let sign = if q.is_negative() { Sign::Minus } else { Sign::Plus };
        let n = q.numer().magnitude();
        let d = q.denom().magnitude();
        let p = precision as i64;
        // choose e so that n / (d 2^e) lies in [2^(p-1), 2^p)
        let mut e = bits(n) - bits(d) - p;
        loop {
            let (num, den) = if e >= 0 { (n.clone(), shifted(d, e)) } else { (shifted(n, -e), d.clone()) };
            let floor = &num / &den;
            match bits(&floor).cmp(&p) {
                Ordering::Greater => e += 1,
                Ordering::Less => e -= 1,
                Ordering::Equal => {
                    let mag = round_quotient(&num, &den);
                    return Ok(Self::from_parts(sign, mag, e, precision));
                }
            }
        }
    }

    /// Nearest `precision`-bit float to `sqrt(q)`, ties to even.
    pub fn sqrt_rational(q: &BigRat, precision: u32) -> Result<Self> {
        Self::check_precision(precision)?;
        if q.is_negative() {
            return Err(Error::InvalidParameter("square root of a negative number".into()));
        }
        if q.is_zero() {
            return Ok(Self::zero(precision));
        }
        let n = q.numer().magnitude();
        let d = q.denom().magnitude();
        let p = precision as i64;
        // sqrt(q) / 2^e = sqrt(q / 4^e) should have p bits
        let mut e = (bits(n) - bits(d)).div_euclid(2) - p;
        loop {
            let (num, den) = if e >= 0 { (n.clone(), shifted(d, 2 * e)) } else { (shifted(n, -2 * e), d.clone()) };
            let s = (&num / &den).sqrt();
            match bits(&s).cmp(&p) {
                Ordering::Greater => e += 1,
                Ordering::Less => e -= 1,
                Ordering::Equal => {
                    // round up iff num/den >= (s + 1/2)^2, i.e. 4 num >= (4s^2 + 4s + 1) den
                    let lhs = &num << 2u32;
                    let mid = ((&s * &s) << 2u32) + (&s << 2u32) + 1u32;
                    let rhs = mid * &den;
                    let mag = match lhs.cmp(&rhs) {
                        Ordering::Greater => s + 1u32,
                        Ordering::Equal if s.is_odd() => s + 1u32,
                        _ => s,
                    };
                    return Ok(Self::from_parts(Sign::Plus, mag, e, precision));
                }
            }
        }
    }

    /// The exact value as a rational.
    pub fn to_rational(&self) -> BigRat {
        let m = BigRat::from_integer(self.mantissa.clone());
        if self.exponent >= 0 {
            m * BigRat::from_integer(BigInt::one() << self.exponent as u64)
        } else {
            m / BigRat::from_integer(BigInt::one() << (-self.exponent) as u64)
        }
    }

    pub fn round_to(&self, precision: u32) -> Result<Self> {
        Self::from_rational(&self.to_rational(), precision)
    }

    pub fn mul(&self, other: &BigFloat, precision: u32) -> Result<Self> {
        Self::from_rational(&(self.to_rational() * other.to_rational()), precision)
    }

    pub fn div(&self, other: &BigFloat, precision: u32) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::Singular("division by zero".into()));
        }
        Self::from_rational(&(self.to_rational() / other.to_rational()), precision)
    }

    pub fn sub(&self, other: &BigFloat, precision: u32) -> Result<Self> {
        Self::from_rational(&(self.to_rational() - other.to_rational()), precision)
    }

    pub fn sqrt(&self, precision: u32) -> Result<Self> {
        Self::sqrt_rational(&self.to_rational(), precision)
    }

    pub fn abs(&self) -> Self {
        BigFloat { mantissa: self.mantissa.abs(), ..self.clone() }
    }

    /// `pi` rounded to `precision` bits.
    pub fn pi(precision: u32) -> Result<Self> {
        Self::check_precision(precision)?;
        // Machin: pi = 16 atan(1/5) - 4 atan(1/239), in fixed point with guard bits.
        // Each truncated term is off by < 1 unit, far below the guard.
        let work = precision as u64 + 64;
        let scale = BigInt::one() << work;
        let atan_inv = |x: u32| -> BigInt {
            let x = BigInt::from(x);
            let x2 = &x * &x;
            let mut power = &scale / &x;
            let mut sum = BigInt::zero();
            let mut k = 0u64;
            while !power.is_zero() {
                let term = &power / BigInt::from(2 * k + 1);
                if k.is_multiple_of(2) {
                    sum += term;
                } else {
                    sum -= term;
                }
                power /= &x2;
                k += 1;
            }
            sum
        };
        let fixed = atan_inv(5) * 16 - atan_inv(239) * 4;
        Self::from_rational(&BigRat::new(fixed, scale), precision)
    }

    /// Decimal digits that faithfully represent `precision` bits.
    pub fn decimal_digits(precision: u32) -> usize {
        (precision as f64 * std::f64::consts::LOG10_2).ceil() as usize
    }

    /// `digits` significant decimal digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        to_decimal(&self.to_rational(), digits)
    }

    pub fn to_f64(&self) -> f64 {
        crate::rational::to_f64(&self.to_rational())
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.to_rational().cmp(&other.to_rational()))
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or_else(|| Self::decimal_digits(self.precision));
        write!(f, "{}", self.to_decimal(digits))
    }
}

impl Serialize for BigFloat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    // 1/sqrt(pi), 3/sqrt(pi) and pi to 45 digits, from an independent
    // multiprecision evaluation.
    const PI_45: &str = "3.14159265358979323846264338327950288419716940";
    const THREE_OVER_SQRT_PI_45: &str = "1.69256875064326886084423835468231775753215189";

    #[test]
    fn exact_values_round_trip() {
        for q in [rat(1, 2), rat(-3, 4), int(5), rat(1, 1024), int(0)] {
            assert_eq!(BigFloat::from_rational(&q, 53).unwrap().to_rational(), q);
        }
    }

    #[test]
    fn rounding_matches_f64() {
        for (n, d) in [(1i64, 3i64), (2, 3), (-7, 10), (22, 7), (1, 1_000_003), (123_456_789, 1000)] {
            let ours = BigFloat::from_rational(&rat(n, d), 53).unwrap().to_f64();
            assert_eq!(ours, n as f64 / d as f64, "{n}/{d}");
        }
        for x in [2i64, 3, 5, 10, 1_000_001] {
            let ours = BigFloat::sqrt_rational(&int(x), 53).unwrap().to_f64();
            assert_eq!(ours, (x as f64).sqrt(), "sqrt {x}");
        }
    }

    #[test]
    fn ties_go_to_even() {
        // 4 bits: 17/16 = 1.0001b sits halfway between 1.000b and 1.001b
        let x = BigFloat::from_rational(&rat(17, 16), 4).unwrap();
        assert_eq!(x.to_rational(), int(1));
        let x = BigFloat::from_rational(&rat(19, 16), 4).unwrap();
        assert_eq!(x.to_rational(), rat(5, 4));
        // carry into a new bit: 31/16 -> 2
        let x = BigFloat::from_rational(&rat(31, 16), 4).unwrap();
        assert_eq!(x.to_rational(), int(2));
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(BigFloat::sqrt_rational(&rat(9, 4), 64).unwrap().to_rational(), rat(3, 2));
        assert_eq!(BigFloat::sqrt_rational(&int(1i64 << 40), 20).unwrap().to_rational(), int(1i64 << 20));
        assert!(BigFloat::sqrt_rational(&int(-1), 64).is_err());
    }

    #[test]
    fn pi_digits() {
        let pi = BigFloat::pi(160).unwrap();
        assert_eq!(pi.to_decimal(45), PI_45);
        let pi64 = BigFloat::pi(53).unwrap();
        assert_eq!(pi64.to_f64(), std::f64::consts::PI);
    }

    #[test]
    fn three_over_sqrt_pi() {
        let pi = BigFloat::pi(200).unwrap();
        let v = BigFloat::from_rational(&int(3), 200).unwrap().div(&pi.sqrt(200).unwrap(), 200).unwrap();
        assert_eq!(v.to_decimal(45), THREE_OVER_SQRT_PI_45);
    }

    proptest! {
        #[test]
        fn from_rational_is_nearest(n in -10_000i64..10_000, d in 1i64..10_000, p in 2u32..40) {
            let q = rat(n, d);
            let x = BigFloat::from_rational(&q, p).unwrap();
            // neighbours one ulp away are no closer
            if !x.is_zero() {
                let ulp = x.to_rational().abs() / BigRat::from_integer(BigInt::one() << (p as u64 - 1));
                let err = (x.to_rational() - &q).abs();
                prop_assert!(err * int(2) <= ulp);
            } else {
                prop_assert!(q.is_zero());
            }
        }

        #[test]
        fn sqrt_is_nearest(n in 1i64..100_000, d in 1i64..1000, p in 2u32..40) {
            let q = rat(n, d);
            let s = BigFloat::sqrt_rational(&q, p).unwrap().to_rational();
            let ulp = &s / BigRat::from_integer(BigInt::one() << (p as u64 - 1));
            // (s - ulp/2)^2 <= q <= (s + ulp/2)^2
            let half = &ulp / int(2);
            let lo = &s - &half;
            let hi = &s + &half;
            prop_assert!(&lo * &lo <= q.clone() || lo <= BigRat::zero());
            prop_assert!(&hi * &hi >= q);
        }
    }
}
