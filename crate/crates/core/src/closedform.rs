//! Exact formulas and bounds for `Ex_r(v,k,n)`, with the applicability rules
//! that decide which one covers a query.
//!
//! Every clause is matched on the normal form of `v`, so any pattern
//! isomorphic to `abab`, `abba`, `a^s` or a chain is recognized. Queries no
//! clause covers get no prediction.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pattern::Pattern;
use crate::seq::{SparsityParams, L_MAX};

/// The argument tuple of `Ex_r(v,k,n)`: the maximum length of a v-free,
/// (k,r)-sparse sequence using at most `n` letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtremalQuery {
    v: Pattern,
    k: usize,
    r: usize,
    n: usize,
}

impl ExtremalQuery {
    pub fn new(v: Pattern, k: usize, r: usize, n: usize) -> Result<Self> {
        if k < v.distinct_count() {
            return Err(Error::InfiniteExtremal {
                k,
                distinct: v.distinct_count(),
            });
        }
        if r == 0 {
            return Err(Error::TooSmall { name: "r", value: r, min: 1 });
        }
        if n == 0 {
            return Err(Error::TooSmall { name: "n", value: n, min: 1 });
        }
        if n > L_MAX {
            return Err(Error::TooLarge { name: "n", value: n, max: L_MAX });
        }
        Ok(ExtremalQuery { v, k, r, n })
    }

    pub fn pattern(&self) -> &Pattern {
        &self.v
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sparsity(&self) -> SparsityParams {
        SparsityParams::new(self.k, self.r).expect("validated on construction")
    }

    /// Same pattern and alphabet with other sparsity parameters.
    pub fn with_params(&self, k: usize, r: usize) -> Result<Self> {
        ExtremalQuery::new(self.v.clone(), k, r, self.n)
    }

    /// `Ex_1(v, (k-1)r+1, n)`, the lower side of the sandwich.
    pub fn fine_query(&self) -> Self {
        self.with_params((self.k - 1) * self.r + 1, 1)
            .expect("(k-1)r+1 >= k")
    }

    /// `Ex_1(v, k, n)`, the upper side of the sandwich before scaling by `r`.
    pub fn coarse_query(&self) -> Self {
        self.with_params(self.k, 1).expect("k unchanged")
    }
}

impl fmt::Display for ExtremalQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} k={} r={} n={}", self.v, self.k, self.r, self.n)
    }
}

/// Stable identifiers of the formulas, used in reports and cache records.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FormulaId {
    #[serde(rename = "cor-abab")]
    CorAbab,
    #[serde(rename = "eq2-abba-r1")]
    Eq2AbbaR1,
    #[serde(rename = "thm-abba-r5")]
    ThmAbbaR5,
    #[serde(rename = "cor-chain")]
    CorChain,
    #[serde(rename = "thm-power")]
    ThmPower,
    #[serde(rename = "lemma-n-lt-k")]
    LemmaNLtK,
    #[serde(rename = "lemma-awa-chain")]
    LemmaAwaChain,
    #[serde(rename = "transfer-2sparse")]
    Transfer2Sparse,
    /// `sigma_i <= s-1` for `a^s`-free sequences; an upper bound only.
    #[serde(rename = "bound-power-multiplicity")]
    PowerMultiplicity,
}

impl FormulaId {
    pub fn as_str(self) -> &'static str {
        match self {
            FormulaId::CorAbab => "cor-abab",
            FormulaId::Eq2AbbaR1 => "eq2-abba-r1",
            FormulaId::ThmAbbaR5 => "thm-abba-r5",
            FormulaId::CorChain => "cor-chain",
            FormulaId::ThmPower => "thm-power",
            FormulaId::LemmaNLtK => "lemma-n-lt-k",
            FormulaId::LemmaAwaChain => "lemma-awa-chain",
            FormulaId::Transfer2Sparse => "transfer-2sparse",
            FormulaId::PowerMultiplicity => "bound-power-multiplicity",
        }
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PredictionKind {
    Exact,
    UpperBoundOnly,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Prediction {
    pub value: Option<usize>,
    pub kind: PredictionKind,
    pub formula_id: Option<FormulaId>,
}

impl Prediction {
    pub const NONE: Prediction = Prediction {
        value: None,
        kind: PredictionKind::None,
        formula_id: None,
    };

    fn exact(id: FormulaId, value: usize) -> Self {
        Prediction {
            value: Some(value),
            kind: PredictionKind::Exact,
            formula_id: Some(id),
        }
    }

    pub fn exact_value(&self) -> Option<usize> {
        match self.kind {
            PredictionKind::Exact => self.value,
            _ => None,
        }
    }
}

/// `Ex_r(abab,k,n)`: `rn` below `k`, `r(2n-k+1)` from `k` on.
pub fn abab_formula(k: usize, r: usize, n: usize) -> usize {
    if n < k {
        r * n
    } else {
        r * (2 * n + 1 - k)
    }
}

/// `Ex_1(abba,k,n)`: `n` below `k`, `2n + floor((n-1)/(k-1)) - 1` from `k` on.
/// Requires `k >= 2`.
pub fn abba_r1_formula(k: usize, n: usize) -> usize {
    assert!(k >= 2, "abba needs k >= 2");
    if n < k {
        n
    } else {
        2 * n + (n - 1) / (k - 1) - 1
    }
}

/// `Ex_r(v,k,n) = r * min(|v| - 1, n)` for a chain `v`.
pub fn chain_formula(len: usize, r: usize, n: usize) -> usize {
    r * (len - 1).min(n)
}

/// `Ex_r(a^s,k,n) = (s-1)n` once `n >= rk`.
pub fn power_formula(s: usize, n: usize) -> usize {
    (s - 1) * n
}

fn abab_clause(q: &ExtremalQuery) -> Option<usize> {
    q.v.is_shape("abab").then(|| abab_formula(q.k, q.r, q.n))
}

fn abba_r1_clause(q: &ExtremalQuery) -> Option<usize> {
    (q.r == 1 && q.v.is_shape("abba")).then(|| abba_r1_formula(q.k, q.n))
}

fn abba_r5_clause(q: &ExtremalQuery) -> Option<usize> {
    (q.r >= 5 && q.v.is_shape("abba")).then_some(q.r * q.n)
}

fn chain_clause(q: &ExtremalQuery) -> Option<usize> {
    q.v.is_chain().then(|| chain_formula(q.v.len(), q.r, q.n))
}

fn power_clause(q: &ExtremalQuery) -> Option<usize> {
    let s = q.v.power_exponent().filter(|&s| s >= 2)?;
    (q.n >= q.r * q.k).then(|| power_formula(s, q.n))
}

fn small_alphabet_clause(q: &ExtremalQuery) -> Option<usize> {
    (q.n < q.k && !q.v.is_blowup_of_chain()).then_some(q.r * q.n)
}

fn awa_chain_clause(q: &ExtremalQuery) -> Option<usize> {
    if q.r != 1 || q.n < q.k || q.v.is_blowup_of_chain() {
        return None;
    }
    q.v.awa()
        .filter(|shape| shape.is_chain_shape())
        .map(|_| q.n)
}

/// Clauses that do not go through the 2-sparse transfer.
type Clause = fn(&ExtremalQuery) -> Option<usize>;

const DIRECT_CLAUSES: [(FormulaId, Clause); 7] = [
    (FormulaId::CorAbab, abab_clause),
    (FormulaId::Eq2AbbaR1, abba_r1_clause),
    (FormulaId::ThmAbbaR5, abba_r5_clause),
    (FormulaId::CorChain, chain_clause),
    (FormulaId::ThmPower, power_clause),
    (FormulaId::LemmaNLtK, small_alphabet_clause),
    (FormulaId::LemmaAwaChain, awa_chain_clause),
];

/// `r * Ex_1(v,k,n)` for a 2-sparse `v` with at least two letters, when
/// `Ex_1` itself is covered by a direct clause.
pub fn transfer_value(q: &ExtremalQuery) -> Option<usize> {
    if q.r < 2 || !q.v.is_two_sparse() || q.v.distinct_count() < 2 {
        return None;
    }
    let base = q.coarse_query();
    DIRECT_CLAUSES
        .iter()
        .find_map(|(_, clause)| clause(&base))
        .map(|ex1| q.r * ex1)
}

/// Every exact clause covering `q`, in dispatch priority order.
pub fn exact_clauses(q: &ExtremalQuery) -> Vec<(FormulaId, usize)> {
    let mut out: Vec<_> = DIRECT_CLAUSES
        .iter()
        .filter_map(|(id, clause)| clause(q).map(|v| (*id, v)))
        .collect();
    if let Some(v) = transfer_value(q) {
        out.push((FormulaId::Transfer2Sparse, v));
    }
    out
}

pub fn predict_exact(q: &ExtremalQuery) -> Prediction {
    if let Some(&(id, value)) = exact_clauses(q).first() {
        return Prediction::exact(id, value);
    }
    if let Some(s) = q.v.power_exponent().filter(|&s| s >= 2) {
        return Prediction {
            value: Some(power_formula(s, q.n)),
            kind: PredictionKind::UpperBoundOnly,
            formula_id: Some(FormulaId::PowerMultiplicity),
        };
    }
    Prediction::NONE
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LowerBound {
    pub value: usize,
    pub source: &'static str,
}

/// Best proven lower bound: `rn` from `1^r 2^r ... n^r` when `v` is not a
/// blow-up of a chain, and `2n+1` for `abba` at `r = 2`, `n >= 2k`.
pub fn lower_bound(q: &ExtremalQuery) -> Option<LowerBound> {
    let mut best: Option<LowerBound> = None;
    let mut offer = |value: usize, source: &'static str| {
        if best.is_none_or(|b| value > b.value) {
            best = Some(LowerBound { value, source });
        }
    };
    if !q.v.is_blowup_of_chain() {
        offer(q.r * q.n, "uniform-blowup");
    }
    if q.r == 2 && q.n >= 2 * q.k && q.v.is_shape("abba") {
        offer(2 * q.n + 1, "abba-r2-construction");
    }
    best
}

/// `(Ex_1(v,(k-1)r+1,n), r * Ex_1(v,k,n))`, which bracket `Ex_r(v,k,n)`.
pub fn sandwich_bounds(q: &ExtremalQuery, ex1_fine: usize, ex1_coarse: usize) -> Result<(usize, usize)> {
    if q.r == 1 && ex1_fine != ex1_coarse {
        return Err(Error::InconsistentBounds(format!(
            "at r = 1 both inputs are Ex_1(v,k,n), got {ex1_fine} and {ex1_coarse}"
        )));
    }
    let hi = q.r * ex1_coarse;
    if ex1_fine > hi {
        return Err(Error::InconsistentBounds(format!(
            "lower side {ex1_fine} exceeds upper side {hi}"
        )));
    }
    Ok((ex1_fine, hi))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShapeVerdict {
    pub pass: bool,
    pub detail: String,
}

/// For `n >= k` and `v` not a blow-up of a chain: `value = rn` forces
/// `v = awa` with `w` a blow-up of a chain avoiding `a`; at `r = 1`,
/// `value = n` holds exactly when `w` is a chain avoiding `a`.
pub fn shape_necessary_condition(q: &ExtremalQuery, value: usize) -> Result<ShapeVerdict> {
    if q.n < q.k {
        return Err(Error::Precondition(format!(
            "shape condition needs n >= k (n = {}, k = {})",
            q.n, q.k
        )));
    }
    if q.v.is_blowup_of_chain() {
        return Err(Error::Precondition(format!(
            "{} is a blow-up of a chain",
            q.v
        )));
    }
    let shape = q.v.awa();
    let rn = q.r * q.n;
    let blowup_shape = shape.as_ref().is_some_and(|s| s.is_blowup_shape());
    if value == rn && !blowup_shape {
        return Ok(ShapeVerdict {
            pass: false,
            detail: format!("value = rn = {rn} but {} is not awa with w a blow-up of a chain avoiding a", q.v),
        });
    }
    if q.r == 1 {
        let chain_shape = shape.as_ref().is_some_and(|s| s.is_chain_shape());
        if (value == q.n) != chain_shape {
            return Ok(ShapeVerdict {
                pass: false,
                detail: format!(
                    "Ex_1 = {value}, n = {}, but awa-with-chain shape is {chain_shape}",
                    q.n
                ),
            });
        }
    }
    let detail = match (&shape, value == rn) {
        (_, false) => format!("value {value} != rn = {rn}; implication vacuous"),
        (Some(s), true) => format!("value = rn and {s}"),
        (None, true) => unreachable!("checked above"),
    };
    Ok(ShapeVerdict { pass: true, detail })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &str, k: usize, r: usize, n: usize) -> ExtremalQuery {
        ExtremalQuery::new(v.parse().unwrap(), k, r, n).unwrap()
    }

    fn exact(v: &str, k: usize, r: usize, n: usize) -> Option<usize> {
        predict_exact(&q(v, k, r, n)).exact_value()
    }

    #[test]
    fn query_validation() {
        let abba: Pattern = "abba".parse().unwrap();
        assert!(matches!(
            ExtremalQuery::new(abba.clone(), 1, 1, 3),
            Err(Error::InfiniteExtremal { k: 1, distinct: 2 })
        ));
        assert!(ExtremalQuery::new(abba.clone(), 2, 0, 3).is_err());
        assert!(ExtremalQuery::new(abba.clone(), 2, 1, 0).is_err());
        assert!(ExtremalQuery::new(abba, 2, 1, L_MAX + 1).is_err());
    }

    #[test]
    fn dispatch_examples() {
        assert_eq!(exact("abab", 2, 1, 3), Some(5));
        assert_eq!(exact("abba", 2, 1, 5), Some(13));
        assert_eq!(exact("abc", 3, 2, 5), Some(4));
        assert_eq!(exact("aaa", 2, 1, 4), Some(8));
        assert_eq!(exact("abba", 2, 5, 3), Some(15));
        assert_eq!(predict_exact(&q("abba", 2, 3, 4)), Prediction::NONE);
        assert_eq!(
            predict_exact(&q("abba", 2, 5, 3)).formula_id,
            Some(FormulaId::ThmAbbaR5)
        );
    }

    #[test]
    fn power_clause_is_gated() {
        // n < rk: only the multiplicity bound remains
        let p = predict_exact(&q("aaa", 2, 2, 3));
        assert_eq!(p.kind, PredictionKind::UpperBoundOnly);
        assert_eq!(p.value, Some(6));
        assert_eq!(exact("aaa", 2, 2, 4), Some(8));
    }

    #[test]
    fn lemma_clauses() {
        assert_eq!(exact("abca", 3, 4, 2), Some(8));
        assert_eq!(
            predict_exact(&q("abca", 3, 4, 2)).formula_id,
            Some(FormulaId::LemmaNLtK)
        );
        assert_eq!(exact("aba", 2, 1, 4), Some(4));
        assert_eq!(exact("aba", 2, 3, 4), Some(12));
        assert_eq!(
            predict_exact(&q("aba", 2, 3, 4)).formula_id,
            Some(FormulaId::Transfer2Sparse)
        );
        // abba is not 2-sparse, so no transfer
        assert_eq!(transfer_value(&q("abba", 2, 2, 4)), None);
    }

    #[test]
    fn transfer_agrees_with_abab_formula() {
        for k in 2..=10 {
            for r in 2..=10 {
                for n in 1..=12 {
                    let query = q("abab", k, r, n);
                    assert_eq!(transfer_value(&query), Some(abab_formula(k, r, n)));
                }
            }
        }
    }

    #[test]
    fn overlapping_clauses_agree() {
        for v in ["abab", "abba", "aba", "abc", "ab", "aa", "aaa", "abca", "abcb"] {
            let p: Pattern = v.parse().unwrap();
            for k in p.distinct_count().max(1)..=4 {
                for r in 1..=7 {
                    for n in 1..=8 {
                        let clauses = exact_clauses(&q(v, k, r, n));
                        if let Some(&(_, first)) = clauses.first() {
                            assert!(
                                clauses.iter().all(|&(_, value)| value == first),
                                "{v} k={k} r={r} n={n}: {clauses:?}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn abab_boundary() {
        for k in 2..=10 {
            for r in 1..=10 {
                assert_eq!(abab_formula(k, r, k - 1), r * (k - 1));
                assert_eq!(abab_formula(k, r, k), r * (k + 1));
            }
        }
    }

    #[test]
    fn abba_r1_with_k2_is_3n_minus_2() {
        for n in 2..=100 {
            assert_eq!(abba_r1_formula(2, n), 3 * n - 2);
        }
    }

    #[test]
    fn abba_r5_meets_lower_bound() {
        for r in 5..=9 {
            for n in 1..=8 {
                let query = q("abba", 2, r, n);
                assert_eq!(
                    predict_exact(&query).exact_value(),
                    lower_bound(&query).map(|b| b.value)
                );
            }
        }
    }

    #[test]
    fn lower_bounds() {
        assert_eq!(lower_bound(&q("abba", 2, 2, 4)).unwrap().value, 9);
        assert_eq!(lower_bound(&q("abba", 2, 2, 3)).unwrap().value, 6);
        assert_eq!(lower_bound(&q("abab", 2, 3, 5)).unwrap().value, 15);
        assert_eq!(lower_bound(&q("aa", 2, 1, 3)), None);
    }

    #[test]
    fn sandwich() {
        let query = q("abab", 2, 2, 3);
        let fine = abab_formula(3, 1, 3);
        let coarse = abab_formula(2, 1, 3);
        assert_eq!((fine, coarse), (4, 5));
        assert_eq!(sandwich_bounds(&query, fine, coarse).unwrap(), (4, 10));
        assert_eq!(sandwich_bounds(&q("abab", 2, 1, 3), 5, 5).unwrap(), (5, 5));
        assert!(sandwich_bounds(&q("abab", 2, 1, 3), 4, 5).is_err());
        assert!(sandwich_bounds(&query, 11, 5).is_err());
        assert_eq!(query.fine_query().k(), 3);
        assert_eq!(query.fine_query().r(), 1);
    }

    #[test]
    fn shape_condition() {
        assert!(shape_necessary_condition(&q("abba", 2, 5, 2), 10).unwrap().pass);
        assert!(shape_necessary_condition(&q("abab", 2, 2, 3), 10).unwrap().pass);
        assert!(!shape_necessary_condition(&q("abab", 2, 2, 3), 6).unwrap().pass);
        assert!(shape_necessary_condition(&q("aba", 2, 1, 3), 3).unwrap().pass);
        assert!(!shape_necessary_condition(&q("aba", 2, 1, 3), 4).unwrap().pass);
        assert!(shape_necessary_condition(&q("abab", 2, 1, 1), 1).is_err());
        assert!(shape_necessary_condition(&q("aab", 2, 1, 3), 3).is_err());
    }
}
