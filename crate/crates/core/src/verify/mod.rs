//! Verification suites: every grid cell is computed by exhaustive search and then
//! compared against whatever the formulas and bounds claim about it.
//!
//! Cell verdicts are `PASS`/`FAIL` when some proven statement covers the cell
//! and `DATA` when none does, so exploratory values never read as checks.

mod conjecture;
mod enumeration;
mod manifest;
mod report;

use std::collections::HashMap;
use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

pub use conjecture::{conjecture_pattern, explore_conjecture, ConjectureProbe, ConjectureRow, EmpiricalMin, ProbeCell};
pub use enumeration::{
    classification_discrepancy, classification_families, verify_enumeration_classification, ClassificationReport,
    FamilyRule,
};
pub use manifest::{builtin_suite, parse_manifest, read_manifest, BUILTIN_SUITES};
pub use report::{Report, Summary};

use crate::closedform::{self, ExtremalQuery, LowerBound, Prediction, PredictionKind};
use crate::error::Result;
use crate::search::{self, compute_extremal, SearchConfig, Status};
use crate::seq::Sequence;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "DATA")]
    Data,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Data => "DATA",
        })
    }
}

impl Verdict {
    /// FAIL dominates PASS, PASS dominates DATA.
    pub fn combine(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Pass, _) | (_, Pass) => Pass,
            _ => Data,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CheckId {
    /// Search value against the exact formula (or upper bound) covering the cell.
    #[serde(rename = "predict")]
    Predict,
    #[serde(rename = "lower-bound")]
    LowerBound,
    /// `Ex_1(v,(k-1)r+1,n) <= value <= r Ex_1(v,k,n)`.
    #[serde(rename = "sandwich")]
    Sandwich,
    /// `value = rn` forces the awa shape (and the r = 1 iff).
    #[serde(rename = "shape")]
    Shape,
    /// `value = rn` whenever `n < k`.
    #[serde(rename = "lemma-n-lt-k")]
    SmallAlphabet,
    /// The witness re-validates and has length `value`.
    #[serde(rename = "witness")]
    Witness,
}

impl CheckId {
    pub const ALL: [CheckId; 6] = [
        CheckId::Predict,
        CheckId::LowerBound,
        CheckId::Sandwich,
        CheckId::Shape,
        CheckId::SmallAlphabet,
        CheckId::Witness,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::Predict => "predict",
            CheckId::LowerBound => "lower-bound",
            CheckId::Sandwich => "sandwich",
            CheckId::Shape => "shape",
            CheckId::SmallAlphabet => "lemma-n-lt-k",
            CheckId::Witness => "witness",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteSpec {
    pub suite_id: String,
    pub grid: Vec<ExtremalQuery>,
    pub checks: Vec<CheckId>,
}

impl SuiteSpec {
    pub fn new(suite_id: impl Into<String>, grid: Vec<ExtremalQuery>) -> Self {
        SuiteSpec {
            suite_id: suite_id.into(),
            grid,
            checks: CheckId::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub check: CheckId,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Sandwich {
    pub lo: usize,
    pub hi: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub pattern: String,
    pub k: usize,
    pub r: usize,
    pub n: usize,
    pub value: usize,
    pub status: Status,
    pub predicted: Prediction,
    pub lower_bound: Option<LowerBound>,
    pub sandwich: Option<Sandwich>,
    pub verdict: Verdict,
    pub checks: Vec<CheckOutcome>,
    pub witness: Sequence,
    pub nodes_visited: u64,
    pub duration_ms: u64,
}

struct CellContext {
    value: usize,
    exact: bool,
}

impl CellContext {
    /// Outcome of asserting `value == expected` for an exact claim.
    fn equals(&self, expected: usize, what: &str) -> CheckOutcome {
        let (verdict, detail) = if self.exact {
            if self.value == expected {
                (Verdict::Pass, format!("search {} = {what} {expected}", self.value))
            } else {
                (Verdict::Fail, format!("search {} != {what} {expected}", self.value))
            }
        } else if self.value > expected {
            (Verdict::Fail, format!("search lower bound {} > {what} {expected}", self.value))
        } else {
            (Verdict::Data, format!("inconclusive: search capped at {}, {what} {expected}", self.value))
        };
        CheckOutcome {
            check: CheckId::Predict,
            verdict,
            detail,
        }
    }
}

fn predict_check(cx: &CellContext, p: &Prediction) -> Option<CheckOutcome> {
    let expected = p.value?;
    let id = p.formula_id.map(|f| f.as_str()).unwrap_or("?");
    match p.kind {
        PredictionKind::Exact => Some(cx.equals(expected, &format!("predicted ({id})"))),
        PredictionKind::UpperBoundOnly => {
            let (verdict, detail) = if cx.value > expected {
                (Verdict::Fail, format!("search {} > upper bound {expected} ({id})", cx.value))
            } else if cx.exact {
                (Verdict::Pass, format!("search {} <= upper bound {expected} ({id})", cx.value))
            } else {
                (Verdict::Data, format!("inconclusive: capped at {}", cx.value))
            };
            Some(CheckOutcome {
                check: CheckId::Predict,
                verdict,
                detail,
            })
        }
        PredictionKind::None => None,
    }
}

fn lower_bound_check(cx: &CellContext, lb: &LowerBound) -> CheckOutcome {
    let (verdict, detail) = if cx.value >= lb.value {
        (Verdict::Pass, format!("search {} >= {} ({})", cx.value, lb.value, lb.source))
    } else if cx.exact {
        (Verdict::Fail, format!("search {} < lower bound {} ({})", cx.value, lb.value, lb.source))
    } else {
        (Verdict::Data, format!("inconclusive: capped at {} below {}", cx.value, lb.value))
    };
    CheckOutcome {
        check: CheckId::LowerBound,
        verdict,
        detail,
    }
}

fn sandwich_check(cx: &CellContext, s: &Sandwich) -> CheckOutcome {
    let (verdict, detail) = if cx.value > s.hi {
        (Verdict::Fail, format!("search {} > hi {}", cx.value, s.hi))
    } else if cx.value < s.lo {
        if cx.exact {
            (Verdict::Fail, format!("search {} < lo {}", cx.value, s.lo))
        } else {
            (Verdict::Data, format!("inconclusive: capped at {} below lo {}", cx.value, s.lo))
        }
    } else {
        (Verdict::Pass, format!("{} <= {} <= {}", s.lo, cx.value, s.hi))
    };
    CheckOutcome {
        check: CheckId::Sandwich,
        verdict,
        detail,
    }
}

/// Exact `Ex_1` values needed by the sandwich check, shared across cells.
type Ex1Table = HashMap<ExtremalQuery, Option<usize>>;

fn aux_config(cfg: &SearchConfig) -> SearchConfig {
    SearchConfig {
        collect_all_maximum: false,
        ..cfg.clone()
    }
}

fn evaluate_cell(q: &ExtremalQuery, checks: &[CheckId], cfg: &SearchConfig, ex1: &Ex1Table) -> Result<Cell> {
    let started = Instant::now();
    let res = compute_extremal(q, cfg)?;
    let cx = CellContext {
        value: res.value,
        exact: res.status == Status::Exact,
    };
    let predicted = closedform::predict_exact(q);
    let lower_bound = closedform::lower_bound(q);
    let sandwich = match (ex1.get(&q.fine_query()), ex1.get(&q.coarse_query())) {
        (Some(Some(fine)), Some(Some(coarse))) => {
            let (lo, hi) = closedform::sandwich_bounds(q, *fine, *coarse)?;
            Some(Sandwich { lo, hi })
        }
        _ => None,
    };
    let not_blowup = !q.pattern().is_blowup_of_chain();

    let mut outcomes = Vec::new();
    for &check in checks {
        let outcome = match check {
            CheckId::Predict => predict_check(&cx, &predicted),
            CheckId::LowerBound => lower_bound.as_ref().map(|lb| lower_bound_check(&cx, lb)),
            CheckId::Sandwich => sandwich.as_ref().map(|s| sandwich_check(&cx, s)),
            CheckId::Shape if q.n() >= q.k() && not_blowup => Some(if cx.exact {
                let v = closedform::shape_necessary_condition(q, cx.value)?;
                CheckOutcome {
                    check,
                    verdict: if v.pass { Verdict::Pass } else { Verdict::Fail },
                    detail: v.detail,
                }
            } else {
                CheckOutcome {
                    check,
                    verdict: Verdict::Data,
                    detail: "inconclusive: search capped".into(),
                }
            }),
            CheckId::SmallAlphabet if q.n() < q.k() && not_blowup => Some(CheckOutcome {
                check,
                ..cx.equals(q.r() * q.n(), "rn")
            }),
            CheckId::Witness => {
                let ok = res.witness.len() == res.value && search::is_valid_witness(q, &res.witness);
                Some(CheckOutcome {
                    check,
                    verdict: if ok { Verdict::Pass } else { Verdict::Fail },
                    detail: format!("witness {} of length {}", res.witness, res.witness.len()),
                })
            }
            CheckId::Shape | CheckId::SmallAlphabet => None,
        };
        outcomes.extend(outcome);
    }

    // Only a cell whose value some formula pins down can PASS; elsewhere the
    // bounds can still expose a FAIL but the value itself stays DATA.
    let verdict = outcomes.iter().fold(Verdict::Data, |acc, o| match (o.check, o.verdict) {
        (CheckId::Witness, Verdict::Pass) => acc,
        (_, Verdict::Pass) if predicted.kind == PredictionKind::None => acc,
        (_, v) => acc.combine(v),
    });

    Ok(Cell {
        pattern: q.pattern().to_string(),
        k: q.k(),
        r: q.r(),
        n: q.n(),
        value: res.value,
        status: res.status,
        predicted,
        lower_bound,
        sandwich,
        verdict,
        checks: outcomes,
        witness: res.witness,
        nodes_visited: res.stats.nodes_visited,
        duration_ms: started.elapsed().as_millis() as u64,
    })
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if threads == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| crate::error::Error::Precondition(format!("cannot start thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Runs every cell of the suite. Cells are evaluated concurrently and
/// assembled in grid order.
pub fn run_suite(spec: &SuiteSpec, cfg: &SearchConfig) -> Result<Report> {
    cfg.validate()?;
    in_pool(cfg.threads, || {
        let ex1 = if spec.checks.contains(&CheckId::Sandwich) {
            let mut aux: Vec<ExtremalQuery> = spec
                .grid
                .iter()
                .flat_map(|q| [q.fine_query(), q.coarse_query()])
                .collect();
            aux.sort_by_key(|q| (q.pattern().to_string(), q.k(), q.r(), q.n()));
            aux.dedup();
            let aux_cfg = aux_config(cfg);
            aux.into_par_iter()
                .map(|q| {
                    let res = compute_extremal(&q, &aux_cfg)?;
                    let value = (res.status == Status::Exact).then_some(res.value);
                    Ok((q, value))
                })
                .collect::<Result<Ex1Table>>()?
        } else {
            Ex1Table::new()
        };
        let cells = spec
            .grid
            .par_iter()
            .map(|q| evaluate_cell(q, &spec.checks, cfg, &ex1))
            .collect::<Result<Vec<_>>>()?;
        Ok(Report::new(spec.suite_id.clone(), cells))
    })?
}
