//! Reed–Muller code parameters `[n, k, d]` for `RM(r, m)` and the product
//! `k d / n`, which equals `f(m, 1, r)`.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::binom::{binomial, f_sequence, f_value, observed_peak, PeakReport, SeqSpec};
use crate::error::{Error, Result};
use crate::rational::{format_rat, from_biguint, BigRat};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    pub r: u32,
    pub m: u32,
    #[serde(with = "biguint_str")]
    pub n: BigUint,
    #[serde(with = "biguint_str")]
    pub k: BigUint,
    #[serde(with = "biguint_str")]
    pub d: BigUint,
}

mod biguint_str {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

pub fn rm_params(r: u32, m: u32) -> Result<CodeParams> {
    if r > m {
        return Err(Error::InvalidParameter(format!("need 0 <= r <= m, got r={r}, m={m}")));
    }
    let n = BigUint::one() << m;
    let k = (0..=r as i64).map(|i| binomial(m as u64, i)).sum();
    let d = BigUint::one() << (m - r);
    Ok(CodeParams { r, m, n, k, d })
}

/// `k d / n`, checked against `f(m, 1, r)`.
pub fn rate_distance_product(r: u32, m: u32) -> Result<BigRat> {
    let p = rm_params(r, m)?;
    let product = from_biguint(&(&p.k * &p.d)) / from_biguint(&p.n);
    let f = f_value(m, &BigRat::one(), r)?;
    if product != f {
        return Err(Error::Invariant(format!(
            "kd/n = {} differs from f(m, 1, r) = {} at r={r}, m={m}",
            format_rat(&product),
            format_rat(&f)
        )));
    }
    Ok(product)
}

/// The `r` maximizing `k d / n` over `0..=m`.
pub fn best_r(m: u32) -> Result<PeakReport> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("need m >= 2, got {m}")));
    }
    let products = (0..=m).map(|r| rate_distance_product(r, m)).collect::<Result<Vec<_>>>()?;
    let report = crate::binom::peak_of(&products)?;
    let reference = observed_peak(&f_sequence(&SeqSpec::new(m, BigRat::one())?));
    if report != reference {
        return Err(Error::Invariant(format!("best r for m={m} disagrees with the sequence peak")));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binom::{is_exceptional, predicted_peak};
    use crate::rational::int;

    fn triple(p: &CodeParams) -> [u64; 3] {
        [&p.n, &p.k, &p.d].map(|v| v.to_string().parse().unwrap())
    }

    #[test]
    fn params_examples() {
        assert_eq!(triple(&rm_params(1, 3).unwrap()), [8, 4, 4]);
        assert_eq!(triple(&rm_params(0, 5).unwrap()), [32, 1, 32]);
        assert_eq!(triple(&rm_params(4, 4).unwrap()), [16, 16, 1]);
        assert!(rm_params(5, 4).is_err());
    }

    #[test]
    fn product_examples() {
        assert_eq!(rate_distance_product(1, 3).unwrap(), int(2));
        for m in 0..10 {
            assert_eq!(rate_distance_product(0, m).unwrap(), int(1));
        }
        // k = 1 + 7 + 21 + 35 = 64, d = 16, n = 128
        assert_eq!(rate_distance_product(3, 7).unwrap(), int(8));
    }

    #[test]
    fn best_r_examples() {
        assert_eq!(best_r(7).unwrap().argmax_min, 3);
        assert_eq!(best_r(2).unwrap().argmax_min, 1);
        assert_eq!(best_r(12).unwrap().argmax_min, 4);
        assert!(best_r(1).is_err());
    }

    #[test]
    fn best_r_matches_prediction() {
        for m in 2..=200 {
            if !is_exceptional(m, 1) {
                assert_eq!(best_r(m).unwrap().tie_indices, vec![predicted_peak(m, 1).unwrap() as usize], "m={m}");
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let p = rm_params(2, 70).unwrap();
        let back: CodeParams = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }
}
