//! Binomial coefficients, weighted partial sums and the sequence
//! `f(m, a, r) = (1+a)^-r * sum_{i<=r} C(m,i) a^i`, together with the
//! predicted and observed location of its maximum.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rat, pow, serde_rat, serde_rat_vec, BigRat};

/// Largest `m` accepted by the exact sequence routines.
pub const MAX_EXACT_M: u32 = 50_000;

/// `C(m, i)`, zero when `i` is outside `[0, m]`.
pub fn binomial(m: u64, i: i64) -> BigUint {
    if i < 0 || i as u64 > m {
        return BigUint::zero();
    }
    let i = i as u64;
    let k = i.min(m - i);
    let mut acc = BigUint::one();
    for j in 0..k {
        acc *= m - j;
        acc /= j + 1;
    }
    acc
}

/// Parameters of one weighted binomial sequence: length `m + 1`, weight `a > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeqSpec {
    m: u32,
    #[serde(with = "serde_rat")]
    a: BigRat,
}

impl SeqSpec {
    pub fn new(m: u32, a: BigRat) -> Result<Self> {
        check_weight(&a)?;
        check_m(m)?;
        Ok(SeqSpec { m, a })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn a(&self) -> &BigRat {
        &self.a
    }
}

pub(crate) fn check_weight(a: &BigRat) -> Result<()> {
    if !a.is_positive() {
        return Err(Error::InvalidParameter(format!(
            "weight a must be positive, got {}",
            format_rat(a)
        )));
    }
    Ok(())
}

pub(crate) fn check_m(m: u32) -> Result<()> {
    if m > MAX_EXACT_M {
        return Err(Error::InvalidParameter(format!(
            "m = {m} exceeds the exact-arithmetic guard {MAX_EXACT_M}"
        )));
    }
    Ok(())
}

fn check_index(m: u32, r: u32) -> Result<()> {
    if r > m {
        return Err(Error::InvalidParameter(format!("index r = {r} outside [0, {m}]")));
    }
    Ok(())
}

/// Narrow a rational weight to a positive integer; the peak-location and
/// limit statements are only claimed for integer weights.
pub fn integer_weight(a: &BigRat) -> Result<u32> {
    check_weight(a)?;
    if !a.is_integer() {
        return Err(Error::OutOfScope(format!(
            "a = {} is not an integer; peak location and limit are only established for integer a",
            format_rat(a)
        )));
    }
    a.numer()
        .to_u32()
        .ok_or_else(|| Error::InvalidParameter(format!("a = {} too large", format_rat(a))))
}

/// `sum_{i=0}^{r} C(m,i) a^i`, exact.
pub fn weighted_partial_sum(m: u32, a: &BigRat, r: u32) -> Result<BigRat> {
    check_weight(a)?;
    check_index(m, r)?;
    let mut sum = BigRat::zero();
    let mut a_pow = BigRat::one();
    for i in 0..=r {
        sum += BigRat::from_integer(BigInt::from(binomial(m as u64, i as i64))) * &a_pow;
        a_pow *= a;
    }
    Ok(sum)
}

/// `f(m, a, r)`, evaluated directly from the partial sum.
pub fn f_value(m: u32, a: &BigRat, r: u32) -> Result<BigRat> {
    let s = weighted_partial_sum(m, a, r)?;
    let one_plus_a = BigRat::one() + a;
    Ok(s / pow(&one_plus_a, r as u64))
}

/// The full sequence `f(m, a, 0..=m)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FSequence {
    spec: SeqSpec,
    #[serde(with = "serde_rat_vec")]
    values: Vec<BigRat>,
}

impl FSequence {
    pub fn spec(&self) -> &SeqSpec {
        &self.spec
    }

    pub fn values(&self) -> &[BigRat] {
        &self.values
    }

    pub fn into_values(self) -> Vec<BigRat> {
        self.values
    }
}

/// Build the whole sequence in O(m) big-integer operations.
///
/// With `a = p/q`, `f(r) = S_r / (p+q)^r` where
/// `S_r = q S_{r-1} + C(m,r) p^r` stays integral; binomials and powers are
/// carried forward instead of recomputed.
pub fn f_sequence(spec: &SeqSpec) -> FSequence {
    let m = spec.m as u64;
    let p = spec.a.numer().clone();
    let q = spec.a.denom().clone();
    let p_plus_q = &p + &q;

    let mut values = Vec::with_capacity(spec.m as usize + 1);
    let mut binom = BigInt::one();
    let mut p_pow = BigInt::one();
    let mut s = BigInt::one();
    let mut denom = BigInt::one();
    values.push(BigRat::one());
    for r in 1..=m {
        binom = binom * BigInt::from(m - r + 1) / BigInt::from(r);
        p_pow *= &p;
        s = &s * &q + &binom * &p_pow;
        denom *= &p_plus_q;
        values.push(BigRat::new(s.clone(), denom.clone()));
    }
    FSequence { spec: spec.clone(), values }
}

/// `floor((a m - (a - 1)) / (2a + 1)) + 1`, the claimed argmax for integer `a`.
pub fn predicted_peak(m: u32, a: u32) -> Result<u32> {
    if a == 0 {
        return Err(Error::InvalidParameter("a must be a positive integer".into()));
    }
    if m < 2 {
        return Err(Error::InvalidParameter(format!("predicted peak needs m >= 2, got {m}")));
    }
    let (m, a) = (m as u64, a as u64);
    Ok(((a * m + 1 - a) / (2 * a + 1) + 1) as u32)
}

/// The values of `m` excluded from the peak-location statement:
/// `{3, 2a+4, 4a+5}`, plus `12` when `a = 1`.
pub fn exceptional_m_set(a: u32) -> Result<BTreeSet<u32>> {
    if a == 0 {
        return Err(Error::InvalidParameter("a must be a positive integer".into()));
    }
    let mut set: BTreeSet<u32> = [3, 2 * a + 4, 4 * a + 5].into_iter().collect();
    if a == 1 {
        set.insert(12);
    }
    Ok(set)
}

pub fn is_exceptional(m: u32, a: u32) -> bool {
    exceptional_m_set(a).map(|s| s.contains(&m)).unwrap_or(false)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeakReport {
    pub argmax_min: usize,
    pub tie_indices: Vec<usize>,
    #[serde(with = "serde_rat")]
    pub peak_value: BigRat,
}

/// Exact argmax scan over any nonempty list of values.
pub fn peak_of(values: &[BigRat]) -> Result<PeakReport> {
    let max = values
        .iter()
        .max()
        .ok_or_else(|| Error::InvalidParameter("empty sequence has no peak".into()))?;
    let tie_indices: Vec<usize> = values
        .iter()
        .enumerate()
        .filter(|(_, v)| *v == max)
        .map(|(i, _)| i)
        .collect();
    Ok(PeakReport { argmax_min: tie_indices[0], tie_indices, peak_value: max.clone() })
}

pub fn observed_peak(seq: &FSequence) -> PeakReport {
    peak_of(&seq.values).expect("sequences have m + 1 >= 1 entries")
}

/// Predicted against observed peak for one `(m, a)` cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeakComparison {
    pub m: u32,
    pub a: u32,
    pub predicted: u32,
    pub observed: PeakReport,
    pub exceptional: bool,
}

impl PeakComparison {
    /// The maximum is attained only at the predicted index.
    pub fn matches(&self) -> bool {
        self.observed.tie_indices == [self.predicted as usize]
    }

    /// `predicted - argmax_min`.
    pub fn shift(&self) -> i64 {
        self.predicted as i64 - self.observed.argmax_min as i64
    }
}

pub fn compare_peak(m: u32, a: u32) -> Result<PeakComparison> {
    let predicted = predicted_peak(m, a)?;
    let spec = SeqSpec::new(m, BigRat::from_integer(a.into()))?;
    let observed = observed_peak(&f_sequence(&spec));
    Ok(PeakComparison { m, a, predicted, observed, exceptional: is_exceptional(m, a) })
}
