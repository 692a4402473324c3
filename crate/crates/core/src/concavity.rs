//! Log-concavity, strong log-concavity and unimodality of finite sequences,
//! and the partial-sum-of-Hadamard-product closure check.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rat, serde_rat, BigRat};

/// The first failing comparison `lhs >= rhs` found by a scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// Index of the middle term (`k` in `x_k^2 >= x_{k-1} x_{k+1}`), or of
    /// the rising term after a descent for unimodality.
    pub index: usize,
    #[serde(with = "serde_rat")]
    pub lhs: BigRat,
    #[serde(with = "serde_rat")]
    pub rhs: BigRat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConcavityReport {
    pub holds: bool,
    pub first_violation: Option<Violation>,
}

impl ConcavityReport {
    fn ok() -> Self {
        ConcavityReport { holds: true, first_violation: None }
    }

    fn violated(index: usize, lhs: BigRat, rhs: BigRat) -> Self {
        ConcavityReport { holds: false, first_violation: Some(Violation { index, lhs, rhs }) }
    }
}

/// `x_k^2 >= x_{k-1} x_{k+1}` for every interior `k`.
pub fn is_log_concave(xs: &[BigRat]) -> ConcavityReport {
    for k in 1..xs.len().saturating_sub(1) {
        let lhs = &xs[k] * &xs[k];
        let rhs = &xs[k - 1] * &xs[k + 1];
        if lhs < rhs {
            return ConcavityReport::violated(k, lhs, rhs);
        }
    }
    ConcavityReport::ok()
}

/// `x_k x_l >= x_{k-1} x_{l+1}` for all `0 < k <= l`, by exhaustive pairs.
pub fn is_strongly_log_concave(xs: &[BigRat]) -> ConcavityReport {
    let n = xs.len();
    for k in 1..n {
        for l in k..n.saturating_sub(1) {
            let lhs = &xs[k] * &xs[l];
            let rhs = &xs[k - 1] * &xs[l + 1];
            if lhs < rhs {
                return ConcavityReport::violated(k, lhs, rhs);
            }
        }
    }
    ConcavityReport::ok()
}

/// Weakly unimodal: nondecreasing up to some index, then nonincreasing.
pub fn is_unimodal(xs: &[BigRat]) -> ConcavityReport {
    let mut descending = false;
    for k in 1..xs.len() {
        if xs[k] < xs[k - 1] {
            descending = true;
        } else if descending && xs[k] > xs[k - 1] {
            // a rise after a descent: report x_{k-1} >= x_k failing
            return ConcavityReport::violated(k, xs[k - 1].clone(), xs[k].clone());
        }
    }
    ConcavityReport::ok()
}

/// Partial sums `z_k = sum_{i<=k} x_i y_i` of the termwise product.
pub fn hadamard_partial_sums(xs: &[BigRat], ys: &[BigRat]) -> Vec<BigRat> {
    let mut acc = BigRat::zero();
    xs.iter()
        .zip(ys)
        .map(|(x, y)| {
            acc += x * y;
            acc.clone()
        })
        .collect()
}

/// Check that the partial sums of the termwise product of two nonnegative
/// log-concave sequences are log-concave.
///
/// Inputs that are negative, of unequal length or not log-concave give
/// [`Error::Precondition`]. A log-concavity failure of the partial sums
/// contradicts the closure property and is returned as [`Error::Invariant`].
pub fn hadamard_partial_sum_check(xs: &[BigRat], ys: &[BigRat]) -> Result<ConcavityReport> {
    if xs.len() != ys.len() {
        return Err(Error::Precondition(format!(
            "sequences have different lengths {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    for (name, seq) in [("xs", xs), ("ys", ys)] {
        if let Some(i) = seq.iter().position(|v| v.is_negative()) {
            return Err(Error::Precondition(format!("{name}[{i}] is negative")));
        }
        if let Some(v) = is_log_concave(seq).first_violation {
            return Err(Error::Precondition(format!(
                "{name} is not log-concave at k={}: {} < {}",
                v.index,
                format_rat(&v.lhs),
                format_rat(&v.rhs)
            )));
        }
    }
    let zs = hadamard_partial_sums(xs, ys);
    let report = is_log_concave(&zs);
    if let Some(v) = &report.first_violation {
        return Err(Error::Invariant(format!(
            "partial sums of a product of log-concave sequences failed log-concavity at k={}: {} < {}",
            v.index,
            format_rat(&v.lhs),
            format_rat(&v.rhs)
        )));
    }
    Ok(report)
}
