//! Bounds on the peak value `f(m, a, r_a)`, its scaled form
//! `f(m, a, r_a) sqrt(m) ((1+a)/(1+2a))^m`, and the limit of that scaled
//! value as `m` grows.
//!
//! The scaled value is kept as an exact rational until the final `sqrt(m)`;
//! the result is computed as `sqrt(m * x^2)` with a single correct rounding.

use num_traits::{One, Signed};
use serde::Serialize;

use crate::bigfloat::BigFloat;
use crate::binom::{binomial, f_value, predicted_peak, MAX_EXACT_M};
use crate::error::{Error, Result};
use crate::params;
use crate::rational::{from_biguint, int, pow, rat, BigRat};
use crate::report::{Relation, VerificationReport};

fn require_weight(a: u32) -> Result<()> {
    if a == 0 {
        return Err(Error::InvalidParameter("a must be a positive integer".into()));
    }
    Ok(())
}

fn require_exact_m(m: u32) -> Result<()> {
    if m > MAX_EXACT_M {
        return Err(Error::InvalidParameter(format!(
            "m = {m} exceeds the exact-arithmetic guard {MAX_EXACT_M}"
        )));
    }
    Ok(())
}

/// `delta = (1+2a) r_a - a m + a + 1`; lies in `(2, 2a+3]`.
pub fn peak_offset(m: u32, a: u32) -> Result<i64> {
    require_weight(a)?;
    let r = predicted_peak(m, a)? as i64;
    let (m, a) = (m as i64, a as i64);
    Ok((1 + 2 * a) * r - a * m + a + 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeakBounds {
    pub lower: BigRat,
    pub upper: BigRat,
}

/// Exact sandwich around the peak value, valid for `m > 6(a+1)`:
///
/// ```text
/// upper = (a/(1+a))^(r-1) C(m, r)
/// lower = (1 - delta / ((1+a)(1+r))) * upper
/// ```
pub fn peak_bounds(m: u32, a: u32) -> Result<PeakBounds> {
    require_weight(a)?;
    require_exact_m(m)?;
    if m as u64 <= 6 * (a as u64 + 1) {
        return Err(Error::OutOfScope(format!("peak bounds need m > 6(a+1) = {}, got m = {m}", 6 * (a + 1))));
    }
    let r = predicted_peak(m, a)?;
    let delta = peak_offset(m, a)?;
    let upper = pow(&rat(a as i64, a as i64 + 1), r as u64 - 1) * from_biguint(&binomial(m as u64, r as i64));
    let factor = BigRat::one() - rat(delta, (1 + a as i64) * (1 + r as i64));
    Ok(PeakBounds { lower: factor * &upper, upper })
}

/// `lower < f(m, a, r_a) < upper`, both strict.
pub fn check_peak_bounds(m: u32, a: u32) -> Result<VerificationReport> {
    let bounds = peak_bounds(m, a)?;
    let r = predicted_peak(m, a)?;
    let f = f_value(m, &int(a), r)?;
    let mut report = VerificationReport::new("prop51", format!("a={a}, m={m}"));
    report.record(params!(a = a, m = m, side = "lower"), bounds.lower, Relation::Lt, f.clone());
    report.record(params!(a = a, m = m, side = "upper"), f, Relation::Lt, bounds.upper);
    Ok(report)
}

/// `2 < delta <= 2a + 3`.
pub fn offset_range_check(m: u32, a: u32) -> Result<VerificationReport> {
    let delta = int(peak_offset(m, a)?);
    let mut report = VerificationReport::new("offset-range", format!("a={a}, m={m}"));
    report.record(params!(a = a, m = m, side = "low"), int(2), Relation::Lt, delta.clone());
    report.record(params!(a = a, m = m, side = "high"), delta, Relation::Le, int(2 * a as i64 + 3));
    Ok(report)
}

/// `f(m, a, r_a) ((1+a)/(1+2a))^m`, exact.
pub fn scaled_peak_factor(m: u32, a: u32) -> Result<BigRat> {
    require_weight(a)?;
    require_exact_m(m)?;
    let r = predicted_peak(m, a)?;
    let f = f_value(m, &int(a), r)?;
    Ok(f * pow(&rat(1 + a as i64, 1 + 2 * a as i64), m as u64))
}

/// `f(m, a, r_a) sqrt(m) ((1+a)/(1+2a))^m`, correctly rounded to `precision` bits.
pub fn scaled_peak_value(m: u32, a: u32, precision: u32) -> Result<BigFloat> {
    let x = scaled_peak_factor(m, a)?;
    BigFloat::sqrt_rational(&(&x * &x * int(m)), precision)
}

/// `(1+a)^(1/2) (1+2a) / (a^(3/2) sqrt(2 pi))`, evaluated as
/// `(1+2a)/a * sqrt((1+a) / (2 pi a))` with 32 guard bits, then rounded.
pub fn limit_constant(a: u32, precision: u32) -> Result<BigFloat> {
    require_weight(a)?;
    let work = precision + 32;
    let pi = BigFloat::pi(work)?;
    let two_pi_a = pi.to_rational() * int(2 * a as i64);
    let root = BigFloat::sqrt_rational(&(int(1 + a as i64) / two_pi_a), work)?;
    let value = root.to_rational() * rat(1 + 2 * a as i64, a as i64);
    BigFloat::from_rational(&value, precision)
}

/// `sqrt(2/pi)`, the limit of [`limit_constant`] as `a` grows.
pub fn large_weight_limit(precision: u32) -> Result<BigFloat> {
    let work = precision + 32;
    let pi = BigFloat::pi(work)?;
    let root = BigFloat::sqrt_rational(&(int(2) / pi.to_rational()), work)?;
    root.round_to(precision)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub m: u32,
    pub scaled: BigFloat,
    pub limit: BigFloat,
    pub rel_err: BigFloat,
}

/// Scaled peak value against the limit constant along a schedule of `m`.
pub fn convergence_table(a: u32, m_schedule: &[u32], precision: u32) -> Result<Vec<ConvergenceRow>> {
    require_weight(a)?;
    if m_schedule.is_empty() {
        return Err(Error::InvalidParameter("empty m schedule".into()));
    }
    if m_schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("m schedule must be strictly ascending".into()));
    }
    if let Some(m) = m_schedule.iter().find(|&&m| m < 2) {
        return Err(Error::InvalidParameter(format!("schedule entry m = {m} is below 2")));
    }
    let limit = limit_constant(a, precision)?;
    let limit_q = limit.to_rational();
    m_schedule
        .iter()
        .map(|&m| {
            let scaled = scaled_peak_value(m, a, precision)?;
            let rel = (scaled.to_rational() / &limit_q - BigRat::one()).abs();
            Ok(ConvergenceRow { m, rel_err: BigFloat::from_rational(&rel, precision)?, scaled, limit: limit.clone() })
        })
        .collect()
}

/// Residue of `m` modulo `2a + 1`; schedules should keep it fixed.
pub fn residue_class(m: u32, a: u32) -> u32 {
    m % (2 * a + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offset_examples() {
        assert_eq!(peak_offset(7, 1).unwrap(), 4);
        assert_eq!(peak_offset(12, 1).unwrap(), 5);
        assert_eq!(peak_offset(5, 2).unwrap(), 3);
        for (m, a) in [(7, 1), (12, 1), (5, 2)] {
            assert!(offset_range_check(m, a).unwrap().passed());
        }
    }

    #[test]
    fn offset_sweep() {
        for a in 1..=5 {
            for m in 2..=400 {
                assert!(offset_range_check(m, a).unwrap().passed(), "a={a} m={m}");
            }
        }
    }

    #[test]
    fn bounds_example() {
        let b = peak_bounds(13, 1).unwrap();
        assert_eq!(b.upper, rat(1287, 16));
        // delta = 4, factor 1 - 4/12 = 2/3
        assert_eq!(b.lower, rat(2, 3) * rat(1287, 16));
        let f = f_value(13, &int(1), 5).unwrap();
        assert_eq!(f, rat(2380, 32));
        assert!(b.lower < f && f < b.upper);
        assert!(check_peak_bounds(13, 1).unwrap().passed());
        assert!(matches!(peak_bounds(10, 1), Err(Error::OutOfScope(_))));
        assert!(matches!(peak_bounds(12, 1), Err(Error::OutOfScope(_))));
    }

    #[test]
    fn scaled_small() {
        // (3/2)(2/3)^2 sqrt(2) = (2/3) sqrt(2)
        assert_eq!(scaled_peak_factor(2, 1).unwrap(), rat(2, 3));
        let v = scaled_peak_value(2, 1, 128).unwrap();
        assert_eq!(v.to_decimal(30), "0.942809041582063365867792482806");
        assert!(scaled_peak_factor(40, 3).unwrap().is_positive());
    }

    #[test]
    fn precision_only_changes_rounding() {
        let lo = scaled_peak_value(301, 2, 64).unwrap();
        let hi = scaled_peak_value(301, 2, 256).unwrap();
        assert_eq!(hi.round_to(64).unwrap(), lo);
    }

    #[test]
    fn limit_constant_values() {
        let c1 = limit_constant(1, 128).unwrap();
        assert_eq!(c1.to_decimal(30), "1.69256875064326886084423835468");
        // a = 2: sqrt(3) * 5 / (2 sqrt(2) sqrt(2 pi))
        let c2 = limit_constant(2, 128).unwrap().to_f64();
        let expect = 3f64.sqrt() * 5.0 / (2.0 * 2f64.sqrt() * (2.0 * std::f64::consts::PI).sqrt());
        assert!((c2 - expect).abs() < 1e-15);
    }

    #[test]
    fn limit_constant_is_stable_under_precision() {
        for a in [1, 2, 7] {
            let lo = limit_constant(a, 96).unwrap();
            let hi = limit_constant(a, 192).unwrap();
            assert_eq!(hi.round_to(96).unwrap(), lo);
        }
    }

    #[test]
    fn large_weight_ratio() {
        let s = large_weight_limit(128).unwrap().to_rational();
        for (a, tol) in [(1000u32, rat(1, 100)), (1_000_000, rat(1, 100_000))] {
            let ratio = limit_constant(a, 128).unwrap().to_rational() / &s;
            assert!((ratio - BigRat::one()).abs() < tol, "a={a}");
        }
        assert_eq!(large_weight_limit(64).unwrap().to_decimal(7), "0.7978846");
    }

    #[test]
    fn convergence_rows() {
        let rows = convergence_table(3, &[700, 1400, 2800], 128).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.rel_err.to_f64().is_finite()));
        let one = convergence_table(1, &[50], 128).unwrap();
        let r = &one[0];
        let expect = (r.scaled.to_rational() / r.limit.to_rational() - BigRat::one()).abs();
        assert_eq!(r.rel_err, BigFloat::from_rational(&expect, 128).unwrap());
        assert!(convergence_table(1, &[10, 5], 128).is_err());
        assert!(convergence_table(1, &[], 128).is_err());
    }
}
