//! The polynomial pair `P_n(a, l)`, `Q_n(a, l)` in `Z[a][l]`:
//!
//! ```text
//! P_0 = Q_0 = 1
//! Q_{n+1} = (a l + 3 - n) Q_n
//! P_{n+1} = a((a+1) l + 3 + n) P_n - a Q_{n+1}
//! ```
//!
//! `P_n / Q_n` is the exact remainder left after stripping the top `n` terms
//! from the critical binomial comparison at `m = (2a+1)l + 5`. Coefficients
//! of `l^i` below the leading one are written `p_{n,i}` (negated, so that
//! `P_n = a^n l^n - sum p_{n,i} l^i`) and `q_{n,i}` (plain).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::binom::binomial;
use crate::error::{Error, Result};
use crate::params;
use crate::rational::{format_rat, int, pow, pow_signed, BigRat};
use crate::report::{Relation, VerificationReport};

/// Polynomial in `a` with integer coefficients; `coeffs[k]` multiplies `a^k`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct APoly {
    coeffs: Vec<BigInt>,
}

impl APoly {
    pub fn zero() -> Self {
        APoly { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * a^k`
    pub fn monomial(c: impl Into<BigInt>, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c.into();
        APoly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        APoly { coeffs }
    }

    /// Coefficients lowest power first.
    pub fn from_i64(coeffs: &[i64]) -> Self {
        APoly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn scale(&self, c: &BigInt) -> APoly {
        APoly::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn eval(&self, a: &BigRat) -> BigRat {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRat::zero(), |acc, c| acc * a + BigRat::from_integer(c.clone()))
    }
}

impl Add for &APoly {
    type Output = APoly;
    fn add(self, rhs: &APoly) -> APoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |p: &APoly, i: usize| p.coeffs.get(i).cloned().unwrap_or_default();
        APoly::from_coeffs((0..n).map(|i| get(self, i) + get(rhs, i)).collect())
    }
}

impl Sub for &APoly {
    type Output = APoly;
    fn sub(self, rhs: &APoly) -> APoly {
        self + &(-rhs)
    }
}

impl Neg for &APoly {
    type Output = APoly;
    fn neg(self) -> APoly {
        APoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &APoly {
    type Output = APoly;
    fn mul(self, rhs: &APoly) -> APoly {
        if self.is_zero() || rhs.is_zero() {
            return APoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            for (j, y) in rhs.coeffs.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        APoly::from_coeffs(out)
    }
}

impl fmt::Display for APoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            let show_mag = k == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "a")?,
                _ => write!(f, "a^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for APoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

/// Polynomial in `l` whose coefficients are [`APoly`]s; `coeffs[j]` multiplies `l^j`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LPoly {
    coeffs: Vec<APoly>,
}

impl LPoly {
    pub fn one() -> Self {
        LPoly { coeffs: vec![APoly::constant(1)] }
    }

    pub fn from_coeffs(mut coeffs: Vec<APoly>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        LPoly { coeffs }
    }

    /// `a_coeff + l_coeff * l` with both coefficients in `Z[a]`.
    pub fn linear(constant: APoly, slope: APoly) -> Self {
        LPoly::from_coeffs(vec![constant, slope])
    }

    pub fn coeffs(&self) -> &[APoly] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> APoly {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &APoly) -> LPoly {
        LPoly::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn eval(&self, a: &BigRat, l: &BigRat) -> BigRat {
        self.coeffs.iter().rev().fold(BigRat::zero(), |acc, c| acc * l + c.eval(a))
    }
}

impl Add for &LPoly {
    type Output = LPoly;
    fn add(self, rhs: &LPoly) -> LPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |p: &LPoly, i: usize| p.coeffs.get(i).cloned().unwrap_or_default();
        LPoly::from_coeffs((0..n).map(|i| &get(self, i) + &get(rhs, i)).collect())
    }
}

impl Sub for &LPoly {
    type Output = LPoly;
    fn sub(self, rhs: &LPoly) -> LPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |p: &LPoly, i: usize| p.coeffs.get(i).cloned().unwrap_or_default();
        LPoly::from_coeffs((0..n).map(|i| &get(self, i) - &get(rhs, i)).collect())
    }
}

impl Mul for &LPoly {
    type Output = LPoly;
    fn mul(self, rhs: &LPoly) -> LPoly {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return LPoly::default();
        }
        let mut out = vec![APoly::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            for (j, y) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
        LPoly::from_coeffs(out)
    }
}

impl fmt::Display for LPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})l")?,
                _ => write!(f, "({c})l^{j}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for LPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(c)?;
        }
        seq.end()
    }
}

/// Coefficient of `l^j`; zero outside the stored range.
pub fn coeff(poly: &LPoly, j: usize) -> APoly {
    poly.coeffs.get(j).cloned().unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PQPair {
    pub n: usize,
    pub p: LPoly,
    pub q: LPoly,
}

impl PQPair {
    /// `p_{n,i}`: the negated coefficient of `l^i` for `i < n`. At `i = n`
    /// the raw leading coefficient is returned, so that `p_{0,0} = 1`.
    pub fn p_coeff(&self, i: usize) -> APoly {
        let raw = coeff(&self.p, i);
        if i < self.n {
            -&raw
        } else {
            raw
        }
    }

    /// `q_{n,i}`: the plain coefficient of `l^i`.
    pub fn q_coeff(&self, i: usize) -> APoly {
        coeff(&self.q, i)
    }
}

fn a_poly() -> APoly {
    APoly::monomial(1, 1)
}

/// `a l + c`
fn shifted_factor(c: i64) -> LPoly {
    LPoly::linear(APoly::constant(c), a_poly())
}

/// `P_n, Q_n` for `n = 0..=n_max` from the defining recurrences.
pub fn build_pq(n_max: usize) -> Vec<PQPair> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut p = LPoly::one();
    let mut q = LPoly::one();
    out.push(PQPair { n: 0, p: p.clone(), q: q.clone() });
    let a = a_poly();
    let a_plus_1 = APoly::from_i64(&[1, 1]);
    for n in 0..n_max {
        let q_next = &shifted_factor(3 - n as i64) * &q;
        // a((a+1) l + 3 + n)
        let lead = LPoly::linear(APoly::monomial(3 + n as i64, 1), &a * &a_plus_1);
        let p_next = &(&lead * &p) - &q_next.scale(&a);
        p = p_next;
        q = q_next;
        out.push(PQPair { n: n + 1, p: p.clone(), q: q.clone() });
    }
    out
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn record_poly_eq(
    report: &mut VerificationReport,
    law: &str,
    n: usize,
    j: usize,
    lhs: &APoly,
    rhs: &APoly,
) {
    if lhs == rhs {
        report.record_fact(params!(law = law, n = n, j = j), true);
    } else {
        report.record_fact(
            params!(law = law, n = n, j = j, lhs = lhs, rhs = rhs),
            false,
        );
    }
}

/// Every closed form and coefficient recurrence of the tower, checked as
/// exact polynomial identities in `a` for all indices up to `n_max`.
///
/// A mismatch means the tower or one of its closed forms is wrong and is
/// reported as [`Error::Invariant`].
pub fn closed_form_checks(n_max: usize) -> Result<VerificationReport> {
    if n_max < 3 {
        return Err(Error::InvalidParameter(format!("closed-form checks need n_max >= 3, got {n_max}")));
    }
    let pairs = build_pq(n_max);
    let mut report = VerificationReport::new("pq-closed-forms", format!("n<={n_max}"));
    let a = a_poly();
    let a_plus_1 = APoly::from_i64(&[1, 1]);
    let a_a_plus_1 = &a * &a_plus_1;

    // base values
    record_poly_eq(&mut report, "p00", 0, 0, &pairs[0].p_coeff(0), &APoly::constant(1));
    record_poly_eq(&mut report, "p10", 1, 0, &pairs[1].p_coeff(0), &APoly::zero());
    record_poly_eq(&mut report, "p20", 2, 0, &pairs[2].p_coeff(0), &APoly::monomial(6, 1));
    record_poly_eq(&mut report, "p30", 3, 0, &pairs[3].p_coeff(0), &APoly::from_i64(&[0, 6, 30]));

    for pair in &pairs {
        let n = pair.n;
        let lead = APoly::monomial(1, n);
        record_poly_eq(&mut report, "deg-P", n, n, &pair.p.leading(), &lead);
        record_poly_eq(&mut report, "deg-Q", n, n, &pair.q.leading(), &lead);
        report.record_fact(params!(law = "deg", n = n), pair.p.degree() == Some(n) && pair.q.degree() == Some(n));

        // Q_n re-expanded from its factors in the opposite order
        let expanded = (0..n as i64).rev().fold(LPoly::one(), |acc, i| &acc * &shifted_factor(3 - i));
        report.record_fact(params!(law = "Q-product", n = n), expanded == pair.q);
    }

    for n in 0..n_max {
        let cur = &pairs[n];
        let next = &pairs[n + 1];
        let ni = n as i64;

        let q0: i64 = (0..=ni).map(|i| 3 - i).product();
        record_poly_eq(&mut report, "q(n+1,0)", n + 1, 0, &next.q_coeff(0), &APoly::constant(q0));

        let top = (6 - ni) * (ni + 1) / 2;
        record_poly_eq(&mut report, "q(n+1,n)", n + 1, n, &next.q_coeff(n), &APoly::monomial(top, n));

        if n >= 3 {
            let sign = if (n - 3) % 2 == 0 { 1 } else { -1 };
            let rhs = APoly::monomial(factorial(n as u64 - 3) * (6 * sign), 1);
            record_poly_eq(&mut report, "q(n+1,1)", n + 1, 1, &next.q_coeff(1), &rhs);
        }

        for j in 1..n {
            let rhs = &(&a * &cur.q_coeff(j - 1)) + &cur.q_coeff(j).scale(&BigInt::from(3 - ni));
            record_poly_eq(&mut report, "q-recurrence", n + 1, j, &next.q_coeff(j), &rhs);
        }

        if n >= 3 {
            let rhs = (&a * &cur.p_coeff(0)).scale(&BigInt::from(ni + 3));
            record_poly_eq(&mut report, "p(n+1,0)-step", n + 1, 0, &next.p_coeff(0), &rhs);
        }
        if n >= 2 {
            // a^(n-2) (n+3)!/5! (30a^2 + 6a)
            let c = factorial(n as u64 + 3) / BigInt::from(120);
            let rhs = &APoly::monomial(c, n - 2) * &APoly::from_i64(&[0, 6, 30]);
            record_poly_eq(&mut report, "p(n+1,0)-closed", n + 1, 0, &next.p_coeff(0), &rhs);
        }
        if n >= 1 {
            let rhs = &(&a_a_plus_1 * &cur.p_coeff(n - 1)) - &APoly::monomial(ni * (ni - 3) / 2, n + 1);
            record_poly_eq(&mut report, "p(n+1,n)", n + 1, n, &next.p_coeff(n), &rhs);
        }
        for j in 1..n {
            let base = &(&a_a_plus_1 * &cur.p_coeff(j - 1)) + &(&a * &cur.p_coeff(j)).scale(&BigInt::from(3 + ni));
            let via_next = &base + &(&a * &next.q_coeff(j));
            record_poly_eq(&mut report, "p-recurrence", n + 1, j, &next.p_coeff(j), &via_next);
            let a2 = APoly::monomial(1, 2);
            let via_cur = &(&base + &(&a2 * &cur.q_coeff(j - 1))) + &(&a * &cur.q_coeff(j)).scale(&BigInt::from(3 - ni));
            record_poly_eq(&mut report, "p-recurrence-expanded", n + 1, j, &next.p_coeff(j), &via_cur);
        }
    }

    if let Some(bad) = report.counterexamples().first() {
        return Err(Error::Invariant(format!("polynomial tower identity failed: {bad}")));
    }
    Ok(report)
}

fn pair_for(pairs: &[PQPair], n: usize) -> PQPair {
    match pairs.get(n) {
        Some(p) => p.clone(),
        None => build_pq(n).pop().expect("build_pq returns n+1 pairs"),
    }
}

/// `C(m, al+3) a^(al+2) - sum_{i=al+3-n}^{al+2} C(m,i) a^i
///    = P_n/Q_n * C(m, al+3-n) a^(al+2-n)` at `m = (2a+1)l + 5`, exactly.
///
/// `pairs` is used when it already covers index `n`.
pub fn verify_remainder_identity(pairs: &[PQPair], a: u32, l: u32, n: u32) -> Result<VerificationReport> {
    if a == 0 {
        return Err(Error::InvalidParameter("a must be a positive integer".into()));
    }
    let pair = pair_for(pairs, n as usize);
    let a_rat = int(a);
    let q_val = pair.q.eval(&a_rat, &int(l));
    if q_val.is_zero() {
        return Err(Error::Singular(format!("Q_{n}({a}, {l}) = 0")));
    }
    let al = a as i64 * l as i64;
    if n as i64 > al + 2 {
        return Err(Error::OutOfScope(format!("remainder identity needs n <= al + 2 = {}, got n = {n}", al + 2)));
    }
    let m = (2 * a as u64 + 1) * l as u64 + 5;
    let term = |i: i64, e: i64| -> BigRat {
        BigRat::from_integer(binomial(m, i).into()) * pow_signed(&a_rat, e).expect("a >= 1")
    };
    let stripped: BigRat = (al + 3 - n as i64..=al + 2).map(|i| term(i, i)).sum();
    let lhs = term(al + 3, al + 2) - stripped;
    let ratio = pair.p.eval(&a_rat, &int(l)) / q_val;
    let rhs = ratio * term(al + 3 - n as i64, al + 2 - n as i64);
    let mut report = VerificationReport::new("prop41", format!("a={a}, l={l}, n={n}, m={m}"));
    report.record(params!(a = a, l = l, n = n), lhs, Relation::Eq, rhs);
    Ok(report)
}

fn require_samples(n: usize, samples: &[BigRat]) -> Result<()> {
    if n < 3 {
        return Err(Error::OutOfScope(format!("coefficient bounds need n >= 3, got {n}")));
    }
    if let Some(bad) = samples.iter().find(|a| **a < BigRat::one()) {
        return Err(Error::OutOfScope(format!("sample a = {} is below 1", format_rat(bad))));
    }
    Ok(())
}

/// `p_{n,n-1}(a) >= a^(2n-2) + (n-1)a^(2n-3) + n(n-3)/2 a^(2n-4)` at each sample.
pub fn verify_subleading_bound(pairs: &[PQPair], n: usize, samples: &[BigRat]) -> Result<VerificationReport> {
    require_samples(n, samples)?;
    let pair = pair_for(pairs, n);
    let ni = n as i64;
    let mut report = VerificationReport::new("prop42", format!("n={n}, {} sample(s) of a", samples.len()));
    let p = pair.p_coeff(n - 1);
    for a in samples {
        let lhs = p.eval(a);
        let rhs = pow(a, 2 * n as u64 - 2)
            + int(ni - 1) * pow(a, 2 * n as u64 - 3)
            + int(ni * (ni - 3) / 2) * pow(a, 2 * n as u64 - 4);
        report.record(params!(n = n, a = format_rat(a)), lhs, Relation::Ge, rhs);
    }
    Ok(report)
}

/// `p_{n,i-1}(a) > |q_{n,i-1}(a)| + (n-3)|q_{n,i}(a)|` and `p_{n,i-1}(a) > 0`
/// for every `1 <= i <= n-1` at each sample.
pub fn verify_coefficient_dominance(pairs: &[PQPair], n: usize, samples: &[BigRat]) -> Result<VerificationReport> {
    require_samples(n, samples)?;
    let pair = pair_for(pairs, n);
    let mut report = VerificationReport::new("prop43", format!("n={n}, 1<=i<={}, {} sample(s) of a", n - 1, samples.len()));
    for a in samples {
        for i in 1..n {
            let p = pair.p_coeff(i - 1).eval(a);
            let rhs = pair.q_coeff(i - 1).eval(a).abs() + int(n as i64 - 3) * pair.q_coeff(i).eval(a).abs();
            report.record(params!(n = n, i = i, a = format_rat(a), form = "dominance"), p.clone(), Relation::Gt, rhs);
            report.record(params!(n = n, i = i, a = format_rat(a), form = "positive"), p, Relation::Gt, BigRat::zero());
        }
    }
    Ok(report)
}

/// `T(n, a) = a^(n-2) + (n-1)a^(n-3) + n(n-3)/2 a^(n-4)`: for `l <= T`,
/// `P_n(a, l)` is negative.
pub fn sign_threshold(n: u32, a: &BigRat) -> Result<BigRat> {
    if n < 3 {
        return Err(Error::OutOfScope(format!("sign threshold needs n >= 3, got {n}")));
    }
    if *a < BigRat::one() {
        return Err(Error::OutOfScope(format!("sign threshold needs a >= 1, got {}", format_rat(a))));
    }
    let ni = n as i64;
    Ok(pow_signed(a, ni - 2)?
        + int(ni - 1) * pow_signed(a, ni - 3)?
        + int(ni * (ni - 3) / 2) * pow_signed(a, ni - 4)?)
}

/// `P_{l+1}(a, l) < 0` and `Q_{l+1}(a, l) > 0`, claimed for `l >= 2`.
pub fn check_diagonal_sign(pairs: &[PQPair], a: u32, l: u32) -> Result<VerificationReport> {
    if a == 0 {
        return Err(Error::InvalidParameter("a must be a positive integer".into()));
    }
    if l < 2 {
        return Err(Error::OutOfScope(format!("diagonal sign claim needs l >= 2, got {l}")));
    }
    let pair = pair_for(pairs, l as usize + 1);
    let (a_rat, l_rat) = (int(a), int(l));
    let mut report = VerificationReport::new("pq-diagonal-sign", format!("a={a}, l={l}, n={}", l + 1));
    report.record(params!(a = a, l = l, poly = "P"), pair.p.eval(&a_rat, &l_rat), Relation::Lt, BigRat::zero());
    report.record(params!(a = a, l = l, poly = "Q"), pair.q.eval(&a_rat, &l_rat), Relation::Gt, BigRat::zero());
    Ok(report)
}

/// Coefficient of `a^k` inside `coeff(poly, j)`, as `i64` when it fits.
pub fn coeff_i64(poly: &LPoly, j: usize, k: usize) -> Option<i64> {
    coeff(poly, j).coeffs().get(k).map_or(Some(0), |c| c.to_i64())
}
