//! Outcome records for inequality and identity sweeps.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rational::{format_rat, serde_rat, BigRat};

/// The comparison a check asserts between its two sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

impl Relation {
    pub fn holds(self, lhs: &BigRat, rhs: &BigRat) -> bool {
        match self {
            Relation::Lt => lhs < rhs,
            Relation::Le => lhs <= rhs,
            Relation::Gt => lhs > rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Eq => lhs == rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Gt => ">",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Param {
    pub name: String,
    pub value: String,
}

/// A parameter tuple at which the asserted relation failed, with both sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub params: Vec<Param>,
    #[serde(with = "serde_rat")]
    pub lhs: BigRat,
    pub relation: Relation,
    #[serde(with = "serde_rat")]
    pub rhs: BigRat,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self
            .params
            .iter()
            .map(|p| format!("{}={}", p.name, p.value))
            .collect();
        write!(
            f,
            "({}): expected {} {} {}",
            params.join(", "),
            format_rat(&self.lhs),
            self.relation.symbol(),
            format_rat(&self.rhs)
        )
    }
}

/// Result of checking one named claim over a finite parameter domain.
///
/// `passed` is maintained as `counterexamples.is_empty()`; all mutation goes
/// through [`VerificationReport::record`] and [`VerificationReport::absorb`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    check_id: String,
    domain: String,
    cases: u64,
    skipped: u64,
    passed: bool,
    counterexamples: Vec<Counterexample>,
}

impl VerificationReport {
    pub fn new(check_id: impl Into<String>, domain: impl Into<String>) -> Self {
        VerificationReport {
            check_id: check_id.into(),
            domain: domain.into(),
            cases: 0,
            skipped: 0,
            passed: true,
            counterexamples: Vec::new(),
        }
    }

    /// Check `lhs relation rhs` and log a counterexample if it fails.
    /// Returns whether the relation held.
    pub fn record(
        &mut self,
        params: &[(&str, String)],
        lhs: BigRat,
        relation: Relation,
        rhs: BigRat,
    ) -> bool {
        self.cases += 1;
        let ok = relation.holds(&lhs, &rhs);
        if !ok {
            self.counterexamples.push(Counterexample {
                params: params
                    .iter()
                    .map(|(n, v)| Param { name: (*n).to_string(), value: v.clone() })
                    .collect(),
                lhs,
                relation,
                rhs,
            });
            self.passed = false;
        }
        ok
    }

    /// Record a boolean structural fact, encoded as `1 = 1` or `0 = 1`.
    pub fn record_fact(&mut self, params: &[(&str, String)], holds: bool) -> bool {
        let lhs = if holds { BigRat::from_integer(1.into()) } else { BigRat::from_integer(0.into()) };
        self.record(params, lhs, Relation::Eq, BigRat::from_integer(1.into()))
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }

    /// Fold another report's cases into this one.
    pub fn absorb(&mut self, other: VerificationReport) {
        self.cases += other.cases;
        self.skipped += other.skipped;
        self.passed &= other.passed;
        self.counterexamples.extend(other.counterexamples);
    }

    pub fn set_domain(&mut self, domain: impl Into<String>) {
        self.domain = domain.into();
    }

    pub fn check_id(&self) -> &str {
        &self.check_id
    }

    pub fn domain(&self) -> &str {
        &self.domain
    }

    pub fn cases(&self) -> u64 {
        self.cases
    }

    pub fn skipped(&self) -> u64 {
        self.skipped
    }

    pub fn passed(&self) -> bool {
        self.passed
    }

    pub fn counterexamples(&self) -> &[Counterexample] {
        &self.counterexamples
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} over {}: {} cases, {} skipped, {} counterexample(s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.check_id,
            self.domain,
            self.cases,
            self.skipped,
            self.counterexamples.len()
        )
    }
}

/// Shorthand for building parameter lists.
#[macro_export]
macro_rules! params {
    ($($name:ident = $val:expr),* $(,)?) => {
        &[$((stringify!($name), ($val).to_string())),*]
    };
}
