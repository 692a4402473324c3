//! Exact computation and verification for the weighted binomial sums
//!
//! ```text
//! f(m, a, r) = (1 + a)^(-r) * sum_{i=0}^{r} C(m, i) a^i
//! ```
//!
//! covering sequence values, log-concavity, the location of the peak, a
//! polynomial tower describing the critical inequality, bounds and
//! asymptotics of the peak value, the induced distribution on `{0..m}`, and
//! Reed–Muller code parameters.
//!
//! All comparisons are made on exact rationals ([`BigRat`]). Floating values
//! appear only in [`bigfloat`], with explicit precision and correct rounding.

pub mod asymptotics;
pub mod bigfloat;
pub mod binom;
pub mod concavity;
pub mod distribution;
pub mod error;
pub mod inequalities;
pub mod pq;
pub mod rational;
pub mod report;
pub mod rm;
pub mod suite;

pub use bigfloat::{BigFloat, DEFAULT_PRECISION};
pub use binom::{
    compare_peak, exceptional_m_set, f_sequence, f_value, predicted_peak, FSequence, PeakComparison, PeakReport,
    SeqSpec, MAX_EXACT_M,
};
pub use error::{Error, Result};
pub use rational::BigRat;
pub use report::{Counterexample, Relation, VerificationReport};
pub use suite::{run_check, Sweep, CHECK_IDS};
