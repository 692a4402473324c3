//! Pointwise exact verification of the inequalities that pin down the peak
//! of `f(m, a, .)` for integer weights, and of the residue-class bookkeeping
//! that chains them together.
//!
//! Every check compares two exact rationals and returns a
//! [`VerificationReport`]; parameter values outside a statement's range give
//! [`Error::OutOfScope`] instead of a vacuous pass.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::binom::{binomial, exceptional_m_set, predicted_peak};
use crate::error::{Error, Result};
use crate::params;
use crate::pq::sign_threshold;
use crate::rational::{format_rat, int, pow_signed, BigRat};
use crate::report::{Relation, VerificationReport};

/// `C(m, i) * a^exp`; `exp` may be negative.
fn term(m: u64, a: u32, i: i64, exp: i64) -> BigRat {
    let c = BigInt::from(binomial(m, i));
    if c.is_zero() {
        return BigRat::zero();
    }
    BigRat::from_integer(c) * pow_signed(&int(a), exp).expect("a >= 1")
}

/// `sum_{i=lo}^{hi} C(m,i) a^i` (empty when `lo > hi`).
fn weighted_range_sum(m: u64, a: u32, lo: i64, hi: i64) -> BigRat {
    let mut acc = BigInt::zero();
    let a_big = BigInt::from(a);
    let mut a_pow = num_traits::pow(a_big.clone(), lo.max(0) as usize);
    for i in lo.max(0)..=hi {
        acc += BigInt::from(binomial(m, i)) * &a_pow;
        a_pow *= &a_big;
    }
    BigRat::from_integer(acc)
}

fn require_weight(a: u32) -> Result<()> {
    if a == 0 {
        return Err(Error::InvalidParameter("a must be a positive integer".into()));
    }
    Ok(())
}

/// Rise into the peak: `sum_{i<r} C(m,i) a^i < C(m,r) a^(r-1)` with
/// `r = r_a(m)`, i.e. `f(r-1) < f(r)`. Only claimed off the exceptional set.
pub fn check_peak_rise(m: u32, a: u32) -> Result<VerificationReport> {
    require_weight(a)?;
    let excluded = exceptional_m_set(a)?;
    if m < 2 || excluded.contains(&m) {
        return Err(Error::OutOfScope(format!(
            "rise into the peak needs m >= 2 outside {:?} for a = {a}, got m = {m}",
            excluded
        )));
    }
    let r = predicted_peak(m, a)? as i64;
    let mut report = VerificationReport::new("prop31", format!("a={a}, m={m}"));
    let lhs = weighted_range_sum(m as u64, a, 0, r - 1);
    let rhs = term(m as u64, a, r, r - 1);
    report.record(params!(a = a, m = m, r = r), lhs, Relation::Lt, rhs);
    Ok(report)
}

/// Fall after the peak: `sum_{i<=r} C(m,i) a^i > C(m,r+1) a^r` with
/// `r = r_a(m)`, i.e. `f(r) > f(r+1)`. Claimed for every `m >= 2`.
pub fn check_peak_fall(m: u32, a: u32) -> Result<VerificationReport> {
    require_weight(a)?;
    let r = predicted_peak(m, a)? as i64;
    let mut report = VerificationReport::new("prop32", format!("a={a}, m={m}"));
    let lhs = weighted_range_sum(m as u64, a, 0, r);
    let rhs = term(m as u64, a, r + 1, r);
    report.record(params!(a = a, m = m, r = r), lhs, Relation::Gt, rhs);
    Ok(report)
}

fn paired_terms_scope(m: u32, a: u32) -> Result<()> {
    require_weight(a)?;
    let modulus = 2 * a + 1;
    if m < 4 || m % modulus == 3 % modulus {
        return Err(Error::OutOfScope(format!(
            "paired-term bound needs m >= 4 and m not congruent to 3 mod {modulus}, got m = {m}"
        )));
    }
    Ok(())
}

fn record_paired_terms(report: &mut VerificationReport, m: u32, a: u32, i: i64) {
    let mm = m as u64;
    let lhs = term(mm, a, i - 1, i - 1) + term(mm, a, i, i);
    let rhs = term(mm, a, i + 1, i) - term(mm, a, i - 1, i - 2);
    report.record(params!(a = a, m = m, i = i, form = "binomial"), lhs, Relation::Le, rhs);

    // i(i+1)(a+1) <= (m-2i-1)(m-i+1)a^2
    let (mi, ai) = (m as i64, a as i64);
    let lhs = int(i * (i + 1) * (ai + 1));
    let rhs = int((mi - 2 * i - 1) * (mi - i + 1) * ai * ai);
    report.record(params!(a = a, m = m, i = i, form = "polynomial"), lhs, Relation::Le, rhs);
}

/// For every `1 <= i < r_a(m)`:
/// `C(m,i-1)a^(i-1) + C(m,i)a^i <= C(m,i+1)a^i - C(m,i-1)a^(i-2)`,
/// together with its cleared-denominator form
/// `i(i+1)(a+1) <= (m-2i-1)(m-i+1)a^2`.
pub fn check_paired_terms(m: u32, a: u32) -> Result<VerificationReport> {
    paired_terms_scope(m, a)?;
    let r = predicted_peak(m, a)? as i64;
    let mut report = VerificationReport::new("lemma33", format!("a={a}, m={m}, 1<=i<{r}"));
    for i in 1..r {
        record_paired_terms(&mut report, m, a, i);
    }
    Ok(report)
}

/// Single-index form of [`check_paired_terms`].
pub fn check_paired_terms_at(m: u32, a: u32, i: u32) -> Result<VerificationReport> {
    paired_terms_scope(m, a)?;
    let r = predicted_peak(m, a)?;
    if i < 1 || i >= r {
        return Err(Error::OutOfScope(format!("index i = {i} outside [1, {r})")));
    }
    let mut report = VerificationReport::new("lemma33", format!("a={a}, m={m}, i={i}"));
    record_paired_terms(&mut report, m, a, i as i64);
    Ok(report)
}

fn congruent_rise_report(a: u32, k: u32, check_id: &str) -> VerificationReport {
    let (ai, ki) = (a as i64, k as i64);
    let m = ((2 * a + 1) * k + 3) as u64;
    let mut report = VerificationReport::new(check_id, format!("a={a}, k={k}, m={m}"));
    let lhs = weighted_range_sum(m, a, 0, ai * ki + 1);
    let rhs = term(m, a, ai * ki + 2, ai * ki + 1);
    report.record(params!(a = a, k = k, m = m), lhs, Relation::Lt, rhs);
    report
}

/// Rise into the peak on the class `m = (2a+1)k + 3`:
/// `sum_{i<=ak+1} C(m,i)a^i < C(m,ak+2)a^(ak+1)`,
/// claimed for `a >= 2, k >= 3` and for `a = 1, k >= 4`.
pub fn check_congruent_rise(a: u32, k: u32) -> Result<VerificationReport> {
    require_weight(a)?;
    let in_scope = (a >= 2 && k >= 3) || (a == 1 && k >= 4);
    if !in_scope {
        return Err(Error::OutOfScope(format!(
            "congruent-class rise needs (a >= 2, k >= 3) or (a = 1, k >= 4), got a = {a}, k = {k}"
        )));
    }
    Ok(congruent_rise_report(a, k, "lemma35"))
}

/// The same comparison as [`check_congruent_rise`] without the scope guard.
/// At `(a, k) = (1, 3)` (so `m = 12`) the inequality is known to fail.
pub fn probe_congruent_rise(a: u32, k: u32) -> Result<VerificationReport> {
    require_weight(a)?;
    Ok(congruent_rise_report(a, k, "lemma35-probe"))
}

/// The anchor of the falling chain, `m = (2a+1)l + 5`:
/// `sum_{i<=al+2} C(m,i)a^i > C(m,al+3)a^(al+2)`.
pub fn check_anchor_fall(a: u32, l: u32) -> Result<VerificationReport> {
    require_weight(a)?;
    let (ai, li) = (a as i64, l as i64);
    let m = ((2 * a + 1) * l + 5) as u64;
    let mut report = VerificationReport::new("lemma38", format!("a={a}, l={l}, m={m}"));
    let lhs = weighted_range_sum(m, a, 0, ai * li + 2);
    let rhs = term(m, a, ai * li + 3, ai * li + 2);
    report.record(params!(a = a, l = l, m = m), lhs, Relation::Gt, rhs);
    Ok(report)
}

/// The top `n` terms alone already exceed the pivot term:
/// `sum_{i=al+3-n}^{al+2} C(m,i)a^i > C(m,al+3)a^(al+2)` for `m = (2a+1)l+5`,
/// inside the window `(n-3)/a <= l <= T(n,a)` with `n <= al + 2`.
pub fn check_tail_window(a: u32, l: u32, n: u32) -> Result<VerificationReport> {
    require_weight(a)?;
    if n < 3 {
        return Err(Error::OutOfScope(format!("tail window needs n >= 3, got n = {n}")));
    }
    let lower = BigRat::new(BigInt::from(n - 3), BigInt::from(a));
    let upper = sign_threshold(n, &int(a))?;
    let l_rat = int(l);
    let al2 = a as u64 * l as u64 + 2;
    if l_rat < lower || l_rat > upper || n as u64 > al2 {
        return Err(Error::OutOfScope(format!(
            "need {} <= l <= {} and n <= al + 2 = {al2}; got l = {l}, n = {n}",
            format_rat(&lower),
            format_rat(&upper)
        )));
    }
    let (ai, li, ni) = (a as i64, l as i64, n as i64);
    let m = ((2 * a + 1) * l + 5) as u64;
    let mut report = VerificationReport::new("prop71", format!("a={a}, l={l}, n={n}, m={m}"));
    let lhs = weighted_range_sum(m, a, ai * li + 3 - ni, ai * li + 2);
    let rhs = term(m, a, ai * li + 3, ai * li + 2);
    report.record(params!(a = a, l = l, n = n, m = m), lhs, Relation::Gt, rhs);
    Ok(report)
}

/// Which residue class of `m` modulo `2a+1` a value falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum ResidueCase {
    /// `m = (2a+1)k + 3`
    M3,
    /// `m = (2a+1)k + 2n + epsilon`, `2 <= n <= a+1`, `epsilon` in `{0, 1}`
    Gen { n: u32, epsilon: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueInfo {
    pub a: u32,
    pub m: u32,
    pub k: u32,
    pub case: ResidueCase,
    /// `ak + 2` for `M3`, `ak + n` for `Gen`; equal to `r_a(m)`.
    pub peak: u32,
}

impl ResidueInfo {
    pub fn reconstruct(&self) -> u32 {
        let base = (2 * self.a + 1) * self.k;
        match self.case {
            ResidueCase::M3 => base + 3,
            ResidueCase::Gen { n, epsilon } => base + 2 * n + epsilon,
        }
    }
}

/// Write `m >= 3` uniquely as `(2a+1)k + s` with `3 <= s <= 2a+3` and
/// classify the offset. The peak index implied by the class is checked
/// against `r_a(m)`; disagreement is an [`Error::Invariant`].
pub fn residue_decompose(m: u32, a: u32) -> Result<ResidueInfo> {
    require_weight(a)?;
    if m < 3 {
        return Err(Error::InvalidParameter(format!("residue decomposition needs m >= 3, got {m}")));
    }
    let modulus = 2 * a + 1;
    let k = (m - 3) / modulus;
    let offset = m - modulus * k;
    let (case, peak) = if offset == 3 {
        (ResidueCase::M3, a * k + 2)
    } else {
        let n = offset / 2;
        (ResidueCase::Gen { n, epsilon: offset % 2 }, a * k + n)
    };
    let info = ResidueInfo { a, m, k, case, peak };
    debug_assert_eq!(info.reconstruct(), m);
    let predicted = predicted_peak(m, a)?;
    if predicted != peak {
        return Err(Error::Invariant(format!(
            "residue class of m = {m}, a = {a} implies peak {peak} but r_a(m) = {predicted}"
        )));
    }
    Ok(info)
}

/// Structural facts behind the falling-side induction on the block
/// `I_k = {(2a+1)k + s : 3 <= s <= 2a+3}`:
///
/// * the anchor `m0 = (2a+1)k + 5` has `r_a(m0) = ak + 2`, matching [`check_anchor_fall`];
/// * every upward step `m -> m+2` (`m0 <= m <= (2a+1)k + 2a + 1`, odd offsets)
///   has `r_a(m+2) = r_a(m) + 1` and `r_a(m) <= floor((m-1)/2)`;
/// * every downward step `m -> m-1` (from odd offsets, and from offset 4 to 3)
///   has `r_a(m-1) = r_a(m)` and `r_a(m) < m`;
/// * the falling inequality itself holds at every element of the block.
pub fn check_chain_structure(a: u32, k: u32) -> Result<VerificationReport> {
    require_weight(a)?;
    let base = (2 * a + 1) * k;
    let first = base + 3;
    let last = base + 2 * a + 3;
    let anchor = base + 5;
    let mut report =
        VerificationReport::new("chain", format!("a={a}, k={k}, I_k=[{first}, {last}]"));
    let r = |m: u32| predicted_peak(m, a).map(|r| int(r as i64));

    report.record(params!(a = a, k = k, m = anchor, step = "anchor"), r(anchor)?, Relation::Eq, int((a * k + 2) as i64));
    report.absorb(check_anchor_fall(a, k)?);

    let mut m = anchor;
    while m + 2 <= last {
        report.record(params!(a = a, k = k, m = m, step = "up"), r(m + 2)?, Relation::Eq, r(m)? + int(1));
        report.record(params!(a = a, k = k, m = m, step = "up-room"), r(m)?, Relation::Le, int(((m - 1) / 2) as i64));
        m += 2;
    }

    let mut sources: Vec<u32> = (anchor..=last).step_by(2).collect();
    sources.push(base + 4);
    for m in sources {
        report.record(params!(a = a, k = k, m = m, step = "down"), r(m - 1)?, Relation::Eq, r(m)?);
        report.record(params!(a = a, k = k, m = m, step = "down-room"), r(m)?, Relation::Lt, int(m as i64));
    }

    for m in first..=last {
        let mut fall = check_peak_fall(m, a)?;
        fall.set_domain(report.domain().to_string());
        report.absorb(fall);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binom::f_value;

    fn single(r: &VerificationReport) -> bool {
        r.cases() >= 1 && r.passed()
    }

    #[test]
    fn peak_rise_examples() {
        // 1 + 7 + 21 = 29 < 35
        assert_eq!(weighted_range_sum(7, 1, 0, 2), int(29));
        assert!(single(&check_peak_rise(7, 1).unwrap()));
        // r = 2: 1 + 10*2 = 11 < C(5,2)*2 = 20
        assert_eq!(weighted_range_sum(5, 2, 0, 1), int(11));
        assert_eq!(term(5, 2, 2, 1), int(20));
        assert!(single(&check_peak_rise(5, 2).unwrap()));
        assert!(matches!(check_peak_rise(3, 1), Err(Error::OutOfScope(_))));
        assert!(matches!(check_peak_rise(12, 1), Err(Error::OutOfScope(_))));
    }

    #[test]
    fn peak_fall_examples() {
        assert!(single(&check_peak_fall(2, 1).unwrap()));
        assert_eq!(weighted_range_sum(7, 1, 0, 3), int(64));
        assert!(single(&check_peak_fall(7, 1).unwrap()));
        assert_eq!(weighted_range_sum(5, 2, 0, 2), int(51));
        assert_eq!(term(5, 2, 3, 2), int(40));
        assert!(single(&check_peak_fall(5, 2).unwrap()));
    }

    #[test]
    fn rise_and_fall_agree_with_sequence_values() {
        for a in 1..=4u32 {
            for m in 2..=40u32 {
                let r = predicted_peak(m, a).unwrap();
                let ar = int(a);
                let fr = f_value(m, &ar, r).unwrap();
                if let Ok(rep) = check_peak_rise(m, a) {
                    assert_eq!(rep.passed(), f_value(m, &ar, r - 1).unwrap() < fr);
                }
                if r < m {
                    let rep = check_peak_fall(m, a).unwrap();
                    assert_eq!(rep.passed(), fr > f_value(m, &ar, r + 1).unwrap());
                }
            }
        }
    }

    #[test]
    fn paired_terms_examples() {
        // i = 1: 1 + 7 <= 21 - 1
        let r = check_paired_terms_at(7, 1, 1).unwrap();
        assert!(r.passed());
        // i = 2: equality in the polynomial form, 12 <= 12
        let r = check_paired_terms_at(7, 1, 2).unwrap();
        assert!(r.passed());
        assert_eq!(r.cases(), 2);
        assert!(check_paired_terms(7, 1).unwrap().passed());
        // 10 = 7 + 3 sits in the excluded class for a = 3
        assert!(matches!(check_paired_terms(10, 3), Err(Error::OutOfScope(_))));
        assert!(matches!(check_paired_terms(3, 2), Err(Error::OutOfScope(_))));
        assert!(check_paired_terms(11, 3).unwrap().passed());
    }

    #[test]
    fn paired_terms_sweep() {
        for a in 1..=5 {
            for m in 4..=150 {
                if m % (2 * a + 1) == 3 % (2 * a + 1) {
                    continue;
                }
                assert!(check_paired_terms(m, a).unwrap().passed(), "a={a} m={m}");
            }
        }
    }

    #[test]
    fn congruent_rise_scope_and_probe() {
        assert!(check_congruent_rise(1, 4).unwrap().passed());
        assert!(check_congruent_rise(2, 3).unwrap().passed());
        assert!(matches!(check_congruent_rise(1, 3), Err(Error::OutOfScope(_))));
        assert!(matches!(check_congruent_rise(2, 2), Err(Error::OutOfScope(_))));
        let probe = probe_congruent_rise(1, 3).unwrap();
        assert!(!probe.passed());
        assert_eq!(probe.counterexamples().len(), 1);
    }

    #[test]
    fn anchor_fall_examples() {
        assert_eq!(weighted_range_sum(5, 1, 0, 2), int(16));
        assert_eq!(term(5, 1, 3, 2), int(10));
        assert!(check_anchor_fall(1, 0).unwrap().passed());
        assert_eq!(weighted_range_sum(11, 1, 0, 4), int(562));
        assert_eq!(term(11, 1, 5, 4), int(462));
        assert!(check_anchor_fall(1, 2).unwrap().passed());
        // m = 12, threshold index 5: brute force both sides
        let lhs: i64 = (0..=4).map(|i| [1, 12, 66, 220, 495][i] * 2i64.pow(i as u32)).sum();
        assert_eq!(weighted_range_sum(12, 2, 0, 4), int(lhs));
        assert_eq!(term(12, 2, 5, 4), int(792 * 16));
        assert!(check_anchor_fall(2, 1).unwrap().passed());
    }

    #[test]
    fn tail_window_examples() {
        // C(11,2..=4) = 55 + 165 + 330 = 550 > 462
        assert_eq!(weighted_range_sum(11, 1, 2, 4), int(550));
        assert!(check_tail_window(1, 2, 3).unwrap().passed());
        // m = 10, a = 2: 4500 > 4032
        assert!(check_tail_window(2, 1, 3).unwrap().passed());
        match check_tail_window(1, 10, 4) {
            Err(Error::OutOfScope(msg)) => assert!(msg.contains("l <= 6"), "{msg}"),
            other => panic!("expected scope error, got {other:?}"),
        }
        assert!(matches!(check_tail_window(1, 2, 2), Err(Error::OutOfScope(_))));
    }

    #[test]
    fn residue_examples() {
        let r = residue_decompose(12, 1).unwrap();
        assert_eq!((r.case, r.k, r.peak), (ResidueCase::M3, 3, 5));
        let r = residue_decompose(7, 1).unwrap();
        assert_eq!((r.case, r.k, r.peak), (ResidueCase::Gen { n: 2, epsilon: 0 }, 1, 3));
        let r = residue_decompose(5, 2).unwrap();
        assert_eq!((r.case, r.k, r.peak), (ResidueCase::Gen { n: 2, epsilon: 1 }, 0, 2));
        assert!(residue_decompose(2, 1).is_err());
    }

    #[test]
    fn residue_round_trip() {
        for a in 1..=5 {
            for m in 3..=300 {
                let info = residue_decompose(m, a).unwrap();
                assert_eq!(info.reconstruct(), m);
                if let ResidueCase::Gen { n, epsilon } = info.case {
                    assert!((2..=a + 1).contains(&n) && epsilon <= 1);
                }
            }
        }
    }

    #[test]
    fn chain_examples() {
        let r = check_chain_structure(1, 1).unwrap();
        assert!(r.passed(), "{:?}", r.counterexamples());
        assert!(r.domain().contains("[6, 8]"));
        let r = check_chain_structure(2, 0).unwrap();
        assert!(r.passed(), "{:?}", r.counterexamples());
        assert!(r.domain().contains("[3, 7]"));
        // fall holds at m = 3 for a = 1 even though the rise fails there: 7 > 1
        assert_eq!(weighted_range_sum(3, 1, 0, 2), int(7));
        assert!(check_chain_structure(1, 0).unwrap().passed());
    }
}
