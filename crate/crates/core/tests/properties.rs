use binsum::binom::{f_sequence, f_value, is_exceptional, predicted_peak, SeqSpec};
use binsum::concavity::{is_log_concave, is_unimodal};
use binsum::distribution::{mean_closed_form, mean_direct, normalizer, normalizer_closed_form};
use binsum::inequalities::{check_peak_fall, residue_decompose};
use binsum::rational::{int, rat, BigRat};
use binsum::rm::rate_distance_product;
use binsum::{compare_peak, run_check, Sweep};
use proptest::prelude::*;

fn weight() -> impl Strategy<Value = BigRat> {
    (1i64..40, 1i64..8).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn incremental_and_direct_values_agree(m in 0u32..60, a in weight()) {
        let seq = f_sequence(&SeqSpec::new(m, a.clone()).unwrap());
        for (r, v) in seq.values().iter().enumerate() {
            prop_assert_eq!(v, &f_value(m, &a, r as u32).unwrap());
        }
        prop_assert_eq!(&seq.values()[0], &int(1));
    }

    #[test]
    fn sequences_are_log_concave_and_unimodal(m in 0u32..80, a in weight()) {
        let seq = f_sequence(&SeqSpec::new(m, a).unwrap());
        prop_assert!(is_log_concave(seq.values()).holds);
        prop_assert!(is_unimodal(seq.values()).holds);
    }

    #[test]
    fn peak_prediction_off_exceptional_set(a in 1u32..8, m in 2u32..250) {
        let cmp = compare_peak(m, a).unwrap();
        if is_exceptional(m, a) {
            prop_assert!(cmp.shift() == 0 || cmp.shift() == 1);
        } else {
            prop_assert!(cmp.matches());
            prop_assert!(check_peak_fall(m, a).unwrap().passed());
        }
    }

    #[test]
    fn residue_decomposition_reconstructs_m(a in 1u32..8, m in 3u32..400) {
        let info = residue_decompose(m, a).unwrap();
        prop_assert_eq!(info.reconstruct(), m);
        prop_assert_eq!(info.peak, predicted_peak(m, a).unwrap());
    }

    #[test]
    fn distribution_routes_agree(m in 0u32..60, a in weight()) {
        prop_assert_eq!(normalizer(m, &a).unwrap(), normalizer_closed_form(m, &a).unwrap());
        prop_assert_eq!(mean_direct(m, &a).unwrap(), mean_closed_form(m, &a).unwrap());
    }

    #[test]
    fn code_identity(m in 0u32..80, frac in 0u32..=100) {
        let r = frac * m / 100;
        prop_assert_eq!(rate_distance_product(r, m).unwrap(), f_value(m, &int(1), r).unwrap());
    }
}

#[test]
fn suite_reports_serialize_exactly() {
    let sweep = Sweep { a: Some(vec![int(1), rat(5, 2)]), m: Some((0..=15).collect()), ..Sweep::default() };
    for id in ["log-concavity", "normalizer", "mean"] {
        for report in run_check(id, &sweep).unwrap() {
            let s = serde_json::to_string(&report).unwrap();
            let back: binsum::VerificationReport = serde_json::from_str(&s).unwrap();
            assert_eq!(back, report);
            assert!(report.passed());
        }
    }
}
