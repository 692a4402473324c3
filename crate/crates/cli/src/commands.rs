use binsum::asymptotics::{convergence_table, residue_class};
use binsum::binom::{integer_weight, observed_peak};
use binsum::distribution::{asymptotic_mean, mean_direct, pmf};
use binsum::pq::{build_pq, closed_form_checks};
use binsum::rational::int;
use binsum::rm::{best_r, rm_params};
use binsum::{compare_peak, f_sequence, params, run_check, BigRat, Error, SeqSpec, Sweep, VerificationReport};
use binsum::{CHECK_IDS, MAX_EXACT_M};

use crate::output::{Cell, Output, Table};
use crate::range::{describe_rats, parse_rat_list, parse_u32_list};
use crate::Ranges;

type Result<T> = std::result::Result<T, Error>;

fn required<'a>(v: &'a Option<String>, name: &str) -> Result<&'a str> {
    v.as_deref().ok_or_else(|| Error::InvalidParameter(format!("--{name} is required")))
}

fn m_list(spec: &str) -> Result<Vec<u32>> {
    parse_u32_list(spec, "m", Some(MAX_EXACT_M))
}

fn a_list(ranges: &Ranges, default: &str) -> Result<Vec<BigRat>> {
    parse_rat_list(ranges.a.as_deref().unwrap_or(default), "a")
}

fn sweep_from(ranges: &Ranges) -> Result<Sweep> {
    let ints = |v: &Option<String>, name| v.as_deref().map(|s| parse_u32_list(s, name, None)).transpose();
    Ok(Sweep {
        a: ranges.a.as_deref().map(|s| parse_rat_list(s, "a")).transpose()?,
        m: ranges.m.as_deref().map(m_list).transpose()?,
        l: ints(&ranges.l, "l")?,
        n: ints(&ranges.n, "n")?,
        k: ints(&ranges.k, "k")?,
    })
}

pub fn seq(ranges: &Ranges) -> Result<Output> {
    let ms = m_list(required(&ranges.m, "m")?)?;
    let mut rows = Table::new(&["m", "a", "r", "value"]);
    for a in a_list(ranges, "1")? {
        for &m in &ms {
            let seq = f_sequence(&SeqSpec::new(m, a.clone())?);
            for (r, v) in seq.values().iter().enumerate() {
                rows.push(vec![m.into(), a.clone().into(), r.into(), v.clone().into()]);
            }
        }
    }
    Ok(Output { rows: Some(rows), ..Output::default() })
}

pub fn peak(ranges: &Ranges) -> Result<Output> {
    let ms = m_list(required(&ranges.m, "m")?)?;
    let weights = a_list(ranges, "1")?;
    let mut rows =
        Table::new(&["m", "a", "predicted", "argmax", "ties", "peak_value", "exceptional", "matches", "shift"]);
    let mut report = VerificationReport::new(
        "peak",
        format!("a={}, m={}", describe_rats(&weights), ranges.m.as_deref().unwrap_or_default()),
    );
    for a in &weights {
        let integral = match integer_weight(a) {
            Ok(a) => Some(a),
            Err(Error::OutOfScope(_)) => None,
            Err(e) => return Err(e),
        };
        for &m in &ms {
            match integral.filter(|_| m >= 2) {
                Some(ai) => {
                    let cmp = compare_peak(m, ai)?;
                    let shift = cmp.shift();
                    if cmp.exceptional {
                        report.record_fact(params!(a = ai, m = m, shift = shift), shift == 0 || shift == 1);
                    } else {
                        report.record_fact(params!(a = ai, m = m, argmax = cmp.observed.argmax_min), cmp.matches());
                    }
                    rows.push(vec![
                        m.into(),
                        a.clone().into(),
                        cmp.predicted.into(),
                        cmp.observed.argmax_min.into(),
                        ties(&cmp.observed.tie_indices).into(),
                        cmp.observed.peak_value.clone().into(),
                        cmp.exceptional.into(),
                        cmp.matches().into(),
                        shift.into(),
                    ]);
                }
                None => {
                    report.skip();
                    let obs = observed_peak(&f_sequence(&SeqSpec::new(m, a.clone())?));
                    rows.push(vec![
                        m.into(),
                        a.clone().into(),
                        Cell::Null,
                        obs.argmax_min.into(),
                        ties(&obs.tie_indices).into(),
                        obs.peak_value.into(),
                        Cell::Null,
                        Cell::Null,
                        Cell::Null,
                    ]);
                }
            }
        }
    }
    Ok(Output { rows: Some(rows), reports: vec![report], ..Output::default() })
}

fn ties(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

pub fn verify(ids: &[String], ranges: &Ranges) -> Result<Output> {
    let sweep = sweep_from(ranges)?;
    let ids: Vec<&str> = if ids.iter().any(|i| i == "all") {
        CHECK_IDS.to_vec()
    } else {
        ids.iter().map(String::as_str).collect()
    };
    let mut reports = Vec::new();
    for id in ids {
        reports.extend(run_check(id, &sweep)?);
    }
    Ok(Output { reports, ..Output::default() })
}

pub fn pq(ranges: &Ranges) -> Result<Output> {
    let ns = parse_u32_list(ranges.n.as_deref().unwrap_or("0:6"), "n", Some(200))?;
    let n_max = ns.iter().copied().max().unwrap_or(0) as usize;
    let pairs = build_pq(n_max);
    let mut rows = Table::new(&["n", "poly", "l_power", "coefficient"]);
    for &n in &ns {
        let pair = &pairs[n as usize];
        for (name, poly) in [("P", &pair.p), ("Q", &pair.q)] {
            for (j, c) in poly.coeffs().iter().enumerate().rev() {
                rows.push(vec![n.into(), name.into(), j.into(), c.to_string().into()]);
            }
        }
    }
    Ok(Output { rows: Some(rows), reports: vec![closed_form_checks(n_max.max(3))?], ..Output::default() })
}

pub fn dist(ranges: &Ranges) -> Result<Output> {
    let ms = m_list(required(&ranges.m, "m")?)?;
    let mut rows = Table::new(&["m", "a", "r", "pmf"]);
    let mut summary =
        Table::new(&["m", "a", "normalizer", "mean", "asymptotic_mean", "mode", "mean_minus_mode"]);
    for a in a_list(ranges, "1")? {
        for &m in &ms {
            let d = pmf(m, &a)?;
            for (r, p) in d.pmf.iter().enumerate() {
                rows.push(vec![m.into(), a.clone().into(), r.into(), p.clone().into()]);
            }
            let mean = mean_direct(m, &a)?;
            let mode = match integer_weight(&a) {
                Ok(ai) if m >= 2 => Some(binsum::predicted_peak(m, ai)?),
                _ => None,
            };
            summary.push(vec![
                m.into(),
                a.clone().into(),
                d.normalizer.clone().into(),
                mean.clone().into(),
                asymptotic_mean(m, &a)?.into(),
                mode.into(),
                mode.map(|r| mean.clone() - int(r as i64)).into(),
            ]);
        }
    }
    Ok(Output { rows: Some(rows), summary: Some(summary), ..Output::default() })
}

pub fn asym(ranges: &Ranges, precision: u32) -> Result<Output> {
    let mut rows = Table::new(&["a", "m", "residue", "scaled", "limit", "rel_err"]);
    for a in a_list(ranges, "1")? {
        let a = integer_weight(&a)?;
        let schedule = match &ranges.m {
            Some(s) => m_list(s)?,
            None => default_schedule(a),
        };
        for row in convergence_table(a, &schedule, precision)? {
            rows.push(vec![
                a.into(),
                row.m.into(),
                residue_class(row.m, a).into(),
                row.scaled.into(),
                row.limit.into(),
                row.rel_err.into(),
            ]);
        }
    }
    Ok(Output { rows: Some(rows), ..Output::default() })
}

/// Roughly doubling `m`, all in the residue class 2 mod `2a+1`.
fn default_schedule(a: u32) -> Vec<u32> {
    let q = 2 * a + 1;
    [250, 500, 1000, 2000].iter().map(|&m| m - m % q + 2).collect()
}

pub fn rm(ranges: &Ranges, r_spec: Option<&str>) -> Result<Output> {
    let ms = m_list(required(&ranges.m, "m")?)?;
    let rs = r_spec.map(|s| parse_u32_list(s, "r", None)).transpose()?;
    let mut rows = Table::new(&["r", "m", "n", "k", "d", "kd_over_n"]);
    let mut summary = Table::new(&["m", "best_r", "ties", "kd_over_n"]);
    for &m in &ms {
        let orders: Vec<u32> = rs.clone().unwrap_or_else(|| (0..=m).collect());
        for r in orders.into_iter().filter(|&r| r <= m) {
            let p = rm_params(r, m)?;
            let product = binsum::rm::rate_distance_product(r, m)?;
            rows.push(vec![
                r.into(),
                m.into(),
                p.n.to_string().into(),
                p.k.to_string().into(),
                p.d.to_string().into(),
                product.into(),
            ]);
        }
        if m >= 2 {
            let best = best_r(m)?;
            summary.push(vec![
                m.into(),
                best.argmax_min.into(),
                ties(&best.tie_indices).into(),
                best.peak_value.into(),
            ]);
        }
    }
    Ok(Output { rows: Some(rows), summary: Some(summary), ..Output::default() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ranges(m: &str, a: &str) -> Ranges {
        Ranges { m: Some(m.into()), a: Some(a.into()), ..Ranges::default() }
    }

    #[test]
    fn default_schedule_keeps_residue() {
        for a in 1..6 {
            let s = default_schedule(a);
            assert!(s.windows(2).all(|w| w[0] < w[1]));
            assert!(s.iter().all(|&m| residue_class(m, a) == 2));
        }
    }

    #[test]
    fn peak_flags_exceptional_cells() {
        let out = peak(&ranges("2:20", "1")).unwrap();
        assert!(out.passed());
        let rows = out.rows.unwrap().rows;
        let flagged: Vec<i64> = rows
            .iter()
            .filter(|r| matches!(r[6], Cell::Bool(true)))
            .map(|r| match r[0] {
                Cell::Int(m) => m,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(flagged, vec![3, 6, 9, 12]);
    }

    #[test]
    fn peak_accepts_rational_weights() {
        let out = peak(&ranges("4:8", "5/2")).unwrap();
        assert_eq!(out.reports[0].skipped(), 5);
        assert_eq!(out.rows.unwrap().rows.len(), 5);
    }

    #[test]
    fn guard_and_missing_flags() {
        assert!(matches!(seq(&ranges("60000", "1")), Err(Error::InvalidParameter(_))));
        assert!(matches!(seq(&Ranges::default()), Err(Error::InvalidParameter(_))));
        assert!(matches!(verify(&["nope".into()], &Ranges::default()), Err(Error::InvalidParameter(_))));
    }
}
