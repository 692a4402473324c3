//! The probability distribution `p(r) = f(m, a, r) / S` on `{0, ..., m}`.
//!
//! Normalizer and mean are each computed two ways, by direct summation and
//! by closed form, and any disagreement is an [`Error::Invariant`].

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::binom::{check_m, check_weight, f_sequence, predicted_peak, SeqSpec};
use crate::error::{Error, Result};
use crate::rational::{format_rat, int, pow, serde_rat, serde_rat_vec, BigRat};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Distribution {
    pub spec: SeqSpec,
    #[serde(with = "serde_rat")]
    pub normalizer: BigRat,
    #[serde(with = "serde_rat_vec")]
    pub pmf: Vec<BigRat>,
}

impl Distribution {
    pub fn mean(&self) -> BigRat {
        self.pmf.iter().enumerate().map(|(r, p)| int(r as i64) * p).sum()
    }
}

fn ratio(a: &BigRat) -> BigRat {
    (int(2) * a + BigRat::one()) / (a + BigRat::one())
}

/// `((a+1)/a) ((2a+1)/(a+1))^m - 1/a`.
pub fn normalizer_closed_form(m: u32, a: &BigRat) -> Result<BigRat> {
    check_weight(a)?;
    check_m(m)?;
    let one = BigRat::one();
    Ok((a + &one) / a * pow(&ratio(a), m as u64) - one / a)
}

/// `sum_r f(m, a, r)`, checked against [`normalizer_closed_form`].
pub fn normalizer(m: u32, a: &BigRat) -> Result<BigRat> {
    let seq = f_sequence(&SeqSpec::new(m, a.clone())?);
    let direct: BigRat = seq.values().iter().sum();
    let closed = normalizer_closed_form(m, a)?;
    if direct != closed {
        return Err(Error::Invariant(format!(
            "normalizer mismatch at m={m}, a={}: direct {} vs closed form {}",
            format_rat(a),
            format_rat(&direct),
            format_rat(&closed)
        )));
    }
    Ok(direct)
}

pub fn pmf(m: u32, a: &BigRat) -> Result<Distribution> {
    let spec = SeqSpec::new(m, a.clone())?;
    let normalizer = normalizer(m, a)?;
    let pmf = f_sequence(&spec).into_values().into_iter().map(|f| f / &normalizer).collect();
    Ok(Distribution { spec, normalizer, pmf })
}

/// `sum_{r=i}^{m} r x^r`, by its closed form; also summed directly and
/// compared.
pub fn geometric_moment_sum(i: u32, m: u32, x: &BigRat) -> Result<BigRat> {
    if i > m {
        return Err(Error::InvalidParameter(format!("need i <= m, got i={i}, m={m}")));
    }
    if x.is_one() {
        return Err(Error::InvalidParameter("x = 1 is a pole of the closed form".into()));
    }
    let (ii, mm) = (int(i as i64), int(m as i64));
    let one = BigRat::one();
    let num = &ii * pow(x, i as u64) - (&ii - &one) * pow(x, i as u64 + 1) - (&mm + &one) * pow(x, m as u64 + 1)
        + &mm * pow(x, m as u64 + 2);
    let closed = num / pow(&(&one - x), 2);

    let mut direct = BigRat::zero();
    let mut xr = pow(x, i as u64);
    for r in i..=m {
        direct += int(r as i64) * &xr;
        xr *= x;
    }
    if direct != closed {
        return Err(Error::Invariant(format!(
            "geometric moment sum mismatch at i={i}, m={m}, x={}: {} vs {}",
            format_rat(x),
            format_rat(&direct),
            format_rat(&closed)
        )));
    }
    Ok(closed)
}

/// Exact mean from the closed form
///
/// ```text
/// ([ (a+1)/(2a+1) m + (a+1)/a^2 ] x^m - (m/a + (a+1)/a^2)) / S,   x = (2a+1)/(a+1)
/// ```
pub fn mean_closed_form(m: u32, a: &BigRat) -> Result<BigRat> {
    check_weight(a)?;
    check_m(m)?;
    let one = BigRat::one();
    let mm = int(m as i64);
    let c = (a + &one) / (a * a);
    let x = ratio(a);
    let num = ((&one / &x) * &mm + &c) * pow(&x, m as u64) - (&mm / a + &c);
    Ok(num / normalizer_closed_form(m, a)?)
}

/// `sum_r r p(r)`, checked against [`mean_closed_form`].
pub fn mean_direct(m: u32, a: &BigRat) -> Result<BigRat> {
    let direct = pmf(m, a)?.mean();
    let closed = mean_closed_form(m, a)?;
    if direct != closed {
        return Err(Error::Invariant(format!(
            "mean mismatch at m={m}, a={}: direct {} vs closed form {}",
            format_rat(a),
            format_rat(&direct),
            format_rat(&closed)
        )));
    }
    Ok(direct)
}

/// `a m / (2a+1) + 1/a`.
pub fn asymptotic_mean(m: u32, a: &BigRat) -> Result<BigRat> {
    check_weight(a)?;
    let one = BigRat::one();
    Ok(a * int(m as i64) / (int(2) * a + &one) + one / a)
}

/// `mean - r_a`, signed.
pub fn mode_vs_mean_gap(m: u32, a: u32) -> Result<BigRat> {
    let mode = predicted_peak(m, a)?;
    Ok(mean_closed_form(m, &int(a as i64))? - int(mode as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use num_traits::Signed;
    use proptest::prelude::*;

    #[test]
    fn normalizer_examples() {
        assert_eq!(normalizer(2, &int(1)).unwrap(), rat(7, 2));
        for a in [rat(1, 3), int(1), int(4), rat(9, 2)] {
            assert_eq!(normalizer(1, &a).unwrap(), int(2));
            assert_eq!(normalizer(0, &a).unwrap(), int(1));
        }
        // f(3, 2) = [1, 7/3, 19/9, 1]
        assert_eq!(normalizer(3, &int(2)).unwrap(), rat(58, 9));
        assert_eq!(normalizer(3, &int(1)).unwrap(), rat(23, 4));
    }

    #[test]
    fn pmf_examples() {
        assert_eq!(pmf(2, &int(1)).unwrap().pmf, vec![rat(2, 7), rat(3, 7), rat(2, 7)]);
        assert_eq!(pmf(0, &int(5)).unwrap().pmf, vec![int(1)]);
        assert_eq!(pmf(3, &int(1)).unwrap().pmf, vec![rat(4, 23), rat(8, 23), rat(7, 23), rat(4, 23)]);
    }

    #[test]
    fn geometric_examples() {
        assert_eq!(geometric_moment_sum(0, 2, &rat(1, 2)).unwrap(), int(1));
        assert_eq!(geometric_moment_sum(2, 2, &rat(1, 3)).unwrap(), rat(2, 9));
        assert_eq!(geometric_moment_sum(1, 3, &int(2)).unwrap(), int(34));
        assert!(geometric_moment_sum(0, 3, &int(1)).is_err());
        assert!(geometric_moment_sum(4, 3, &int(2)).is_err());
    }

    #[test]
    fn mean_examples() {
        assert_eq!(mean_closed_form(2, &int(1)).unwrap(), int(1));
        assert_eq!(mean_direct(2, &int(1)).unwrap(), int(1));
        assert_eq!(mean_closed_form(0, &int(7)).unwrap(), int(0));
        assert_eq!(mean_direct(1, &int(3)).unwrap(), rat(1, 2));
        assert_eq!(mean_direct(3, &int(1)).unwrap(), rat(34, 23));
        assert_eq!(mean_direct(5, &int(2)).unwrap(), rat(3643, 1522));
    }

    #[test]
    fn asymptotic_examples() {
        assert_eq!(asymptotic_mean(300, &int(1)).unwrap(), int(101));
        assert_eq!(asymptotic_mean(0, &int(2)).unwrap(), rat(1, 2));
        let gap = mean_closed_form(300, &int(1)).unwrap() - int(101);
        assert!(gap.abs() < rat(1, 100));
    }

    #[test]
    fn gap_examples() {
        assert_eq!(mode_vs_mean_gap(2, 1).unwrap(), int(0));
        assert!(mode_vs_mean_gap(300, 1).unwrap().abs() < rat(1, 100));
        assert!(mode_vs_mean_gap(5, 2).unwrap().abs() < int(1));
    }

    #[test]
    fn gap_shrinks_with_m() {
        for a in 1..=3 {
            let a = int(a);
            let gaps: Vec<BigRat> = [50u32, 100, 200]
                .iter()
                .map(|&m| (mean_closed_form(m, &a).unwrap() - asymptotic_mean(m, &a).unwrap()).abs())
                .collect();
            assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2]);
            assert!(gaps[2] < rat(1, 1000));
        }
    }

    proptest! {
        #[test]
        fn pmf_sums_to_one(m in 0u32..40, n in 1i64..12, d in 1i64..5) {
            let dist = pmf(m, &rat(n, d)).unwrap();
            prop_assert_eq!(dist.pmf.iter().sum::<BigRat>(), int(1));
            prop_assert!(dist.pmf.iter().all(|p| p.is_positive()));
        }

        #[test]
        fn geometric_routes_agree(m in 0u32..30, i_frac in 0u32..100, x in prop::sample::select(vec![(1, 3), (1, 2), (2, 1), (5, 2)])) {
            let i = i_frac * (m + 1) / 100;
            prop_assert!(geometric_moment_sum(i, m, &rat(x.0, x.1)).is_ok());
        }
    }
}
