//! Explorer for patterns `1 2^t1 3^t2 ... (s+1)^ts 1`, for which
//! `Ex_r = rn` is conjectured once `r` is large enough in terms of the `t_i`.
//!
//! Every cell is computed by exhaustive search. A cell only gets a PASS/FAIL
//! verdict where something proven covers it (the abba family at `r >= 5`,
//! the abba counterexample at `r = 2, n >= 2k`, and `n < k`); everything
//! else is DATA.

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use super::Verdict;
use crate::closedform::ExtremalQuery;
use crate::error::{Error, Result};
use crate::pattern::Pattern;
use crate::search::{compute_extremal, SearchConfig, Status};
use crate::seq::{Letter, Sequence};

const MAX_PATTERN_LEN: usize = 8;

/// Builds `1 2^t1 3^t2 ... (s+1)^ts 1`.
pub fn conjecture_pattern(t: &[usize]) -> Result<Pattern> {
    if t.is_empty() {
        return Err(Error::TooSmall { name: "t", value: 0, min: 1 });
    }
    if let Some(&bad) = t.iter().find(|&&ti| ti == 0) {
        return Err(Error::TooSmall { name: "t_i", value: bad, min: 1 });
    }
    let len = 2 + t.iter().sum::<usize>();
    if len > MAX_PATTERN_LEN {
        return Err(Error::TooLarge { name: "pattern length", value: len, max: MAX_PATTERN_LEN });
    }
    let mut letters = vec![Letter::new_unchecked(1)];
    for (i, &ti) in t.iter().enumerate() {
        letters.extend(std::iter::repeat_n(Letter::new_unchecked(i as u8 + 2), ti));
    }
    letters.push(Letter::new_unchecked(1));
    Pattern::new(&Sequence::new(letters))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeCell {
    pub n: usize,
    pub value: usize,
    pub status: Status,
    pub rn: usize,
    /// Exact value equal to `rn`.
    pub matches: bool,
    pub verdict: Verdict,
    pub detail: String,
    pub witness: Sequence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureRow {
    pub r: usize,
    pub all_match: bool,
    pub first_mismatch_n: Option<usize>,
    pub verdict: Verdict,
    pub cells: Vec<ProbeCell>,
}

/// Smallest tested `r` from which every tested row matched, together with
/// the ranges it was observed on. Not a proof of anything.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmpiricalMin {
    pub r: Option<usize>,
    pub k: usize,
    pub r_range: (usize, usize),
    pub n_range: (usize, usize),
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureProbe {
    pub t_vector: Vec<usize>,
    pub pattern: String,
    pub k: usize,
    pub r_range: (usize, usize),
    pub n_range: (usize, usize),
    pub rows: Vec<ConjectureRow>,
    pub empirical_min_r: Option<EmpiricalMin>,
}

impl ConjectureProbe {
    pub fn new(t: Vec<usize>, k: usize, r: RangeInclusive<usize>, n: RangeInclusive<usize>) -> Result<Self> {
        let v = conjecture_pattern(&t)?;
        if r.is_empty() || n.is_empty() {
            return Err(Error::Precondition("empty r or n range".into()));
        }
        // validates k against ||v|| and the ranges against their limits
        ExtremalQuery::new(v.clone(), k, *r.start(), *n.start())?;
        ExtremalQuery::new(v.clone(), k, *r.end(), *n.end())?;
        Ok(ConjectureProbe {
            t_vector: t,
            pattern: v.to_string(),
            k,
            r_range: (*r.start(), *r.end()),
            n_range: (*n.start(), *n.end()),
            rows: Vec::new(),
            empirical_min_r: None,
        })
    }
}

fn judge(q: &ExtremalQuery, value: usize, exact: bool) -> (Verdict, String) {
    let (k, r, n) = (q.k(), q.r(), q.n());
    let rn = r * n;
    let claim = if q.pattern().is_shape("abba") && r >= 5 {
        Some(("abba at r >= 5", rn, true))
    } else if q.pattern().is_shape("abba") && r == 2 && n >= 2 * k {
        Some(("abba counterexample at r = 2", 2 * n + 1, false))
    } else if n < k {
        Some(("n < k", rn, true))
    } else {
        None
    };
    let Some((what, bound, equality)) = claim else {
        let tag = if exact { "" } else { " (inconclusive: search capped)" };
        return (Verdict::Data, format!("no proven value{tag}"));
    };
    if equality {
        match (exact, value == bound, value > bound) {
            (true, true, _) => (Verdict::Pass, format!("{what}: {value} = {bound}")),
            (_, false, true) | (true, false, _) => (Verdict::Fail, format!("{what}: {value} != {bound}")),
            (false, _, _) => (Verdict::Data, format!("{what}: inconclusive, capped at {value}")),
        }
    } else if value >= bound {
        (Verdict::Pass, format!("{what}: {value} >= {bound} > {rn}"))
    } else if exact {
        (Verdict::Fail, format!("{what}: {value} < {bound}"))
    } else {
        (Verdict::Data, format!("{what}: inconclusive, capped at {value}"))
    }
}

/// FAIL if any cell fails, PASS only if every cell is covered and passes.
fn row_verdict(cells: &[ProbeCell]) -> Verdict {
    if cells.iter().any(|c| c.verdict == Verdict::Fail) {
        Verdict::Fail
    } else if cells.iter().all(|c| c.verdict == Verdict::Pass) {
        Verdict::Pass
    } else {
        Verdict::Data
    }
}

/// Fills in the rows of `probe`.
pub fn explore_conjecture(probe: &ConjectureProbe, cfg: &SearchConfig) -> Result<ConjectureProbe> {
    cfg.validate()?;
    let v = conjecture_pattern(&probe.t_vector)?;
    let (r_lo, r_hi) = probe.r_range;
    let (n_lo, n_hi) = probe.n_range;
    let queries: Vec<ExtremalQuery> = (r_lo..=r_hi)
        .flat_map(|r| (n_lo..=n_hi).map(move |n| (r, n)))
        .map(|(r, n)| ExtremalQuery::new(v.clone(), probe.k, r, n))
        .collect::<Result<_>>()?;
    let cells = queries
        .par_iter()
        .map(|q| {
            let res = compute_extremal(q, cfg)?;
            let exact = res.status == Status::Exact;
            let rn = q.r() * q.n();
            let (verdict, detail) = judge(q, res.value, exact);
            Ok(ProbeCell {
                n: q.n(),
                value: res.value,
                status: res.status,
                rn,
                matches: exact && res.value == rn,
                verdict,
                detail,
                witness: res.witness,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let width = n_hi - n_lo + 1;
    let rows: Vec<ConjectureRow> = cells
        .chunks(width)
        .zip(r_lo..=r_hi)
        .map(|(cells, r)| ConjectureRow {
            r,
            all_match: cells.iter().all(|c| c.matches),
            first_mismatch_n: cells.iter().find(|c| !c.matches).map(|c| c.n),
            verdict: row_verdict(cells),
            cells: cells.to_vec(),
        })
        .collect();

    let min_r = rows
        .iter()
        .rev()
        .take_while(|row| row.all_match)
        .last()
        .map(|row| row.r);
    Ok(ConjectureProbe {
        rows,
        empirical_min_r: Some(EmpiricalMin {
            r: min_r,
            k: probe.k,
            r_range: probe.r_range,
            n_range: probe.n_range,
            note: format!(
                "every tested r from this value up gave Ex_r = rn for n in {n_lo}..{n_hi}, k = {}; observed, not proved",
                probe.k
            ),
        }),
        ..probe.clone()
    })
}
