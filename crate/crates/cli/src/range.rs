//! Parameter lists from the command line: `lo:hi` (inclusive), single values,
//! and comma-separated combinations of both, e.g. `2:5,9,12:13`.

use binsum::rational::{format_rat, parse_rat};
use binsum::{BigRat, Error};
use num_traits::One;

/// Longest list a single range may expand to.
pub const MAX_RANGE_LEN: u64 = 1_000_000;

fn usage(msg: String) -> Error {
    Error::InvalidParameter(msg)
}

pub fn parse_u32_list(spec: &str, name: &str, max: Option<u32>) -> Result<Vec<u32>, Error> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim) {
        let parse = |s: &str| {
            s.trim().parse::<u32>().map_err(|_| usage(format!("--{name}: {s:?} is not a nonnegative integer")))
        };
        let (lo, hi) = match part.split_once(':') {
            Some((lo, hi)) => (parse(lo)?, parse(hi)?),
            None => {
                let v = parse(part)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(usage(format!("--{name}: empty range {part:?}")));
        }
        if let Some(max) = max {
            if hi > max {
                return Err(usage(format!("--{name}: {hi} exceeds the guard {max}")));
            }
        }
        if (hi - lo) as u64 + 1 > MAX_RANGE_LEN {
            return Err(usage(format!("--{name}: range {part:?} has more than {MAX_RANGE_LEN} values")));
        }
        out.extend(lo..=hi);
    }
    Ok(out)
}

/// Rational list; `lo:hi` steps by 1 from `lo`.
pub fn parse_rat_list(spec: &str, name: &str) -> Result<Vec<BigRat>, Error> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim) {
        let parse = |s: &str| parse_rat(s).map_err(|e| usage(format!("--{name}: {e}")));
        match part.split_once(':') {
            Some((lo, hi)) => {
                let (lo, hi) = (parse(lo)?, parse(hi)?);
                if lo > hi {
                    return Err(usage(format!("--{name}: empty range {part:?}")));
                }
                let steps = (&hi - &lo).floor().to_integer();
                if steps >= MAX_RANGE_LEN.into() {
                    return Err(usage(format!("--{name}: range {part:?} has more than {MAX_RANGE_LEN} values")));
                }
                let mut x = lo;
                while x <= hi {
                    out.push(x.clone());
                    x += BigRat::one();
                }
            }
            None => out.push(parse(part)?),
        }
    }
    Ok(out)
}

pub fn describe_rats(xs: &[BigRat]) -> String {
    xs.iter().map(format_rat).collect::<Vec<_>>().join(",")
}
