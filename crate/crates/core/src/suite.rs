//! Named checks swept over parameter grids.
//!
//! Each check id maps to one or more [`VerificationReport`]s. Cells outside a
//! statement's range (and singular cells) are counted as skipped; a sweep
//! with no in-scope cell at all is an [`Error::OutOfScope`].

use serde::{Deserialize, Serialize};

use crate::asymptotics::{check_peak_bounds, offset_range_check};
use crate::binom::{f_sequence, f_value, integer_weight, SeqSpec};
use crate::concavity::is_log_concave;
use crate::distribution::{mean_closed_form, normalizer_closed_form, pmf};
use crate::error::{Error, Result};
use crate::inequalities::{
    check_anchor_fall, check_chain_structure, check_congruent_rise, check_paired_terms, check_peak_fall,
    check_peak_rise, check_tail_window, probe_congruent_rise,
};
use crate::params;
use crate::pq::{build_pq, verify_coefficient_dominance, verify_remainder_identity, verify_subleading_bound};
use crate::rational::{format_rat, from_biguint, int, rat, BigRat};
use crate::report::{Relation, VerificationReport};
use crate::rm::rm_params;

/// Every accepted check id, in display order.
pub const CHECK_IDS: &[&str] = &[
    "log-concavity",
    "prop31",
    "prop32",
    "lemma33",
    "lemma35",
    "lemma38",
    "prop41",
    "prop42",
    "prop43",
    "prop51",
    "prop71",
    "chain",
    "normalizer",
    "mean",
    "rm-identity",
];

/// Cells of `(a, k)` where the unguarded congruent-class rise is known to fail.
pub const CONGRUENT_RISE_FAILURES: &[(u32, u32)] = &[(1, 3)];

/// Parameter grid for a sweep. `None` means the check's default range.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sweep {
    #[serde(default, with = "opt_rat_vec")]
    pub a: Option<Vec<BigRat>>,
    pub m: Option<Vec<u32>>,
    pub l: Option<Vec<u32>>,
    pub n: Option<Vec<u32>>,
    pub k: Option<Vec<u32>>,
}

mod opt_rat_vec {
    use crate::rational::{format_rat, parse_rat, BigRat};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<BigRat>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(qs) => s.collect_seq(qs.iter().map(format_rat)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<BigRat>>, D::Error> {
        let raw: Option<Vec<String>> = Option::deserialize(d)?;
        raw.map(|v| v.iter().map(|s| parse_rat(s).map_err(D::Error::custom)).collect())
            .transpose()
    }
}

fn ints(lo: u32, hi: u32) -> Vec<u32> {
    (lo..=hi).collect()
}

fn int_weights(lo: i64, hi: i64) -> Vec<BigRat> {
    (lo..=hi).map(int).collect()
}

fn or_default<T: Clone>(v: &Option<Vec<T>>, default: impl FnOnce() -> Vec<T>) -> Vec<T> {
    v.clone().unwrap_or_else(default)
}

fn describe(parts: &[(&str, String)]) -> String {
    parts.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(", ")
}

fn span_u32(xs: &[u32]) -> String {
    match (xs.first(), xs.last()) {
        (Some(lo), Some(hi)) if xs.len() > 1 && xs.windows(2).all(|w| w[1] == w[0] + 1) => format!("{lo}:{hi}"),
        _ => xs.iter().map(u32::to_string).collect::<Vec<_>>().join(","),
    }
}

fn span_rat(xs: &[BigRat]) -> String {
    xs.iter().map(format_rat).collect::<Vec<_>>().join(",")
}

/// Fold a cell into `report`, skipping scope and singularity errors.
fn fold(report: &mut VerificationReport, cell: Result<VerificationReport>) -> Result<()> {
    match cell {
        Ok(r) => report.absorb(r),
        Err(Error::OutOfScope(_)) | Err(Error::Singular(_)) => report.skip(),
        Err(e) => return Err(e),
    }
    Ok(())
}

fn require_cases(report: VerificationReport) -> Result<VerificationReport> {
    if report.cases() == 0 {
        return Err(Error::OutOfScope(format!(
            "{} has no in-scope cell over {}",
            report.check_id(),
            report.domain()
        )));
    }
    Ok(report)
}

/// Integer weights from the grid; non-integers count as skipped cells.
fn integer_grid(report: &mut VerificationReport, a_list: &[BigRat]) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for a in a_list {
        match integer_weight(a) {
            Ok(a) => out.push(a),
            Err(Error::OutOfScope(_)) => report.skip(),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn sweep_am(
    id: &str,
    sweep: &Sweep,
    a_default: (i64, i64),
    m_default: (u32, u32),
    cell: impl Fn(u32, u32) -> Result<VerificationReport>,
) -> Result<VerificationReport> {
    let a_list = or_default(&sweep.a, || int_weights(a_default.0, a_default.1));
    let m_list = or_default(&sweep.m, || ints(m_default.0, m_default.1));
    let mut report =
        VerificationReport::new(id, describe(params!(a = span_rat(&a_list), m = span_u32(&m_list))));
    for a in integer_grid(&mut report, &a_list)? {
        for &m in &m_list {
            fold(&mut report, cell(m, a))?;
        }
    }
    require_cases(report)
}

fn log_concavity(sweep: &Sweep) -> Result<VerificationReport> {
    let a_list = or_default(&sweep.a, || vec![rat(1, 2), int(1), int(2), rat(7, 3), int(5)]);
    let m_list = or_default(&sweep.m, || ints(0, 100));
    let mut report = VerificationReport::new(
        "log-concavity",
        describe(params!(a = span_rat(&a_list), m = span_u32(&m_list))),
    );
    for a in &a_list {
        for &m in &m_list {
            let seq = f_sequence(&SeqSpec::new(m, a.clone())?);
            match is_log_concave(seq.values()).first_violation {
                None => report.record_fact(params!(a = format_rat(a), m = m), true),
                Some(v) => report.record(params!(a = format_rat(a), m = m, k = v.index), v.lhs, Relation::Ge, v.rhs),
            };
        }
    }
    require_cases(report)
}

fn congruent_rise(sweep: &Sweep) -> Result<Vec<VerificationReport>> {
    let a_list = or_default(&sweep.a, || int_weights(1, 4));
    let k_list = or_default(&sweep.k, || ints(3, 12));
    let domain = describe(params!(a = span_rat(&a_list), k = span_u32(&k_list)));
    let mut scoped = VerificationReport::new("lemma35", domain.clone());
    let mut probe = VerificationReport::new("lemma35-probe", domain);
    let weights = integer_grid(&mut scoped, &a_list)?;
    for _ in weights.len()..a_list.len() {
        probe.skip();
    }
    for &a in &weights {
        for &k in &k_list {
            fold(&mut scoped, check_congruent_rise(a, k))?;
            let fails = !probe_congruent_rise(a, k)?.passed();
            let expected = CONGRUENT_RISE_FAILURES.contains(&(a, k));
            probe.record_fact(params!(a = a, k = k, fails = fails), fails == expected);
        }
    }
    Ok(vec![require_cases(scoped)?, require_cases(probe)?])
}

fn anchor_fall(sweep: &Sweep) -> Result<VerificationReport> {
    let a_list = or_default(&sweep.a, || int_weights(1, 4));
    let l_list = or_default(&sweep.l, || ints(0, 20));
    let mut report =
        VerificationReport::new("lemma38", describe(params!(a = span_rat(&a_list), l = span_u32(&l_list))));
    for a in integer_grid(&mut report, &a_list)? {
        for &l in &l_list {
            fold(&mut report, check_anchor_fall(a, l))?;
        }
    }
    require_cases(report)
}

fn remainder_identity(sweep: &Sweep) -> Result<VerificationReport> {
    let a_list = or_default(&sweep.a, || int_weights(1, 4));
    let l_list = or_default(&sweep.l, || ints(0, 12));
    let n_desc = sweep.n.as_deref().map(span_u32).unwrap_or_else(|| "0:al+2".into());
    let mut report = VerificationReport::new(
        "prop41",
        describe(params!(a = span_rat(&a_list), l = span_u32(&l_list), n = n_desc)),
    );
    let weights = integer_grid(&mut report, &a_list)?;
    let n_cap = weights.iter().max().copied().unwrap_or(0) as usize * l_list.iter().max().copied().unwrap_or(0) as usize + 2;
    let n_cap = sweep.n.as_ref().and_then(|ns| ns.iter().max().map(|&n| n as usize)).unwrap_or(n_cap);
    let pairs = build_pq(n_cap);
    for a in weights {
        for &l in &l_list {
            let n_list = or_default(&sweep.n, || ints(0, a * l + 2));
            for n in n_list {
                fold(&mut report, verify_remainder_identity(&pairs, a, l, n))?;
            }
        }
    }
    require_cases(report)
}

fn coefficient_sweep(
    id: &str,
    sweep: &Sweep,
    cell: fn(&[crate::pq::PQPair], usize, &[BigRat]) -> Result<VerificationReport>,
) -> Result<VerificationReport> {
    let a_list = or_default(&sweep.a, || vec![int(1), rat(3, 2), int(2), int(5), int(10)]);
    let n_list = or_default(&sweep.n, || ints(3, 25));
    let mut report =
        VerificationReport::new(id, describe(params!(n = span_u32(&n_list), a = span_rat(&a_list))));
    let pairs = build_pq(n_list.iter().max().copied().unwrap_or(0) as usize);
    for &n in &n_list {
        fold(&mut report, cell(&pairs, n as usize, &a_list))?;
    }
    require_cases(report)
}

fn sandwich(sweep: &Sweep) -> Result<VerificationReport> {
    sweep_am("prop51", sweep, (1, 4), (2, 300), |m, a| {
        let mut cell = offset_range_check(m, a)?;
        match check_peak_bounds(m, a) {
            Ok(bounds) => cell.absorb(bounds),
            Err(Error::OutOfScope(_)) => {}
            Err(e) => return Err(e),
        }
        Ok(cell)
    })
}

fn tail_window(sweep: &Sweep) -> Result<VerificationReport> {
    let a_list = or_default(&sweep.a, || int_weights(1, 4));
    let l_list = or_default(&sweep.l, || ints(0, 30));
    let n_list = or_default(&sweep.n, || ints(3, 12));
    let mut report = VerificationReport::new(
        "prop71",
        describe(params!(a = span_rat(&a_list), l = span_u32(&l_list), n = span_u32(&n_list))),
    );
    for a in integer_grid(&mut report, &a_list)? {
        for &l in &l_list {
            for &n in &n_list {
                fold(&mut report, check_tail_window(a, l, n))?;
            }
        }
    }
    require_cases(report)
}

fn chain(sweep: &Sweep) -> Result<VerificationReport> {
    let a_list = or_default(&sweep.a, || int_weights(1, 4));
    let k_list = or_default(&sweep.k, || ints(1, 10));
    let mut report =
        VerificationReport::new("chain", describe(params!(a = span_rat(&a_list), k = span_u32(&k_list))));
    for a in integer_grid(&mut report, &a_list)? {
        for &k in &k_list {
            fold(&mut report, check_chain_structure(a, k))?;
        }
    }
    require_cases(report)
}

fn distribution_grid(sweep: &Sweep) -> (Vec<BigRat>, Vec<u32>) {
    (
        or_default(&sweep.a, || vec![int(1), int(2), int(3), rat(5, 2)]),
        or_default(&sweep.m, || ints(0, 120)),
    )
}

fn normalizer_routes(sweep: &Sweep) -> Result<VerificationReport> {
    let (a_list, m_list) = distribution_grid(sweep);
    let mut report =
        VerificationReport::new("normalizer", describe(params!(a = span_rat(&a_list), m = span_u32(&m_list))));
    for a in &a_list {
        for &m in &m_list {
            let direct: BigRat = f_sequence(&SeqSpec::new(m, a.clone())?).values().iter().sum();
            report.record(params!(a = format_rat(a), m = m), direct, Relation::Eq, normalizer_closed_form(m, a)?);
        }
    }
    require_cases(report)
}

fn mean_routes(sweep: &Sweep) -> Result<VerificationReport> {
    let (a_list, m_list) = distribution_grid(sweep);
    let mut report =
        VerificationReport::new("mean", describe(params!(a = span_rat(&a_list), m = span_u32(&m_list))));
    for a in &a_list {
        for &m in &m_list {
            let direct = pmf(m, a)?.mean();
            report.record(params!(a = format_rat(a), m = m), direct, Relation::Eq, mean_closed_form(m, a)?);
        }
    }
    require_cases(report)
}

fn rm_identity(sweep: &Sweep) -> Result<VerificationReport> {
    let m_list = or_default(&sweep.m, || ints(0, 64));
    let mut report = VerificationReport::new("rm-identity", describe(params!(m = span_u32(&m_list), r = "0:m")));
    for &m in &m_list {
        for r in 0..=m {
            let p = rm_params(r, m)?;
            let product = from_biguint(&(&p.k * &p.d)) / from_biguint(&p.n);
            report.record(params!(r = r, m = m), product, Relation::Eq, f_value(m, &int(1), r)?);
        }
    }
    require_cases(report)
}

/// Run one check id over `sweep`.
pub fn run_check(id: &str, sweep: &Sweep) -> Result<Vec<VerificationReport>> {
    let one = |r: Result<VerificationReport>| r.map(|r| vec![r]);
    match id {
        "log-concavity" => one(log_concavity(sweep)),
        "prop31" => one(sweep_am("prop31", sweep, (1, 5), (2, 300), check_peak_rise)),
        "prop32" => one(sweep_am("prop32", sweep, (1, 5), (2, 300), check_peak_fall)),
        "lemma33" => one(sweep_am("lemma33", sweep, (1, 5), (4, 300), check_paired_terms)),
        "lemma35" => congruent_rise(sweep),
        "lemma38" => one(anchor_fall(sweep)),
        "prop41" => one(remainder_identity(sweep)),
        "prop42" => one(coefficient_sweep("prop42", sweep, verify_subleading_bound)),
        "prop43" => one(coefficient_sweep("prop43", sweep, verify_coefficient_dominance)),
        "prop51" => one(sandwich(sweep)),
        "prop71" => one(tail_window(sweep)),
        "chain" => one(chain(sweep)),
        "normalizer" => one(normalizer_routes(sweep)),
        "mean" => one(mean_routes(sweep)),
        "rm-identity" => one(rm_identity(sweep)),
        other => Err(Error::InvalidParameter(format!(
            "unknown check id '{other}'; expected one of {}",
            CHECK_IDS.join(", ")
        ))),
    }
}
