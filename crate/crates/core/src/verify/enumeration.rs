//! Classification of the abba-free (2,r)-sparse normal sequences over at
//! most two letters into four explicit families:
//!
//! 1. `1^j`, `1 <= j <= r`;
//! 2. `1^i 2^j`, `1 <= i, j <= r`;
//! 3. `1^i 2 1^j`, `i + j + 1 <= r`;
//! 4. `1^i 2 1 2^j`, `i, j >= 1` under a side condition.
//!
//! For family 4 the side condition `i + j + 2 <= 2r - 2` only bounds the
//! length. The sequence is (2,r)-sparse exactly when `i <= r - 2` and
//! `j <= r - 2`; the two differ from `r = 4` on (e.g. `121222` at `r = 4`
//! repeats `2` at distance 4). [`FamilyRule`] selects between them.

use std::collections::BTreeSet;

use serde::Serialize;

use super::Verdict;
use crate::closedform::ExtremalQuery;
use crate::error::{Error, Result};
use crate::pattern::Pattern;
use crate::search::{enumerate_all, SearchConfig};
use crate::seq::{Letter, Sequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyRule {
    /// Family 4 bounded by `i + j + 2 <= 2r - 2`.
    LengthBound,
    /// Family 4 bounded by `i, j <= r - 2`, which is (2,r)-sparsity.
    Sparse,
}

fn word(parts: &[(u8, usize)]) -> Sequence {
    Sequence::new(
        parts
            .iter()
            .flat_map(|&(c, len)| std::iter::repeat_n(Letter::new_unchecked(c), len))
            .collect(),
    )
}

/// The four families for stride `r`, as sets of normal sequences.
pub fn classification_families(r: usize, rule: FamilyRule) -> [BTreeSet<Sequence>; 4] {
    let mut fams: [BTreeSet<Sequence>; 4] = Default::default();
    for j in 1..=r {
        fams[0].insert(word(&[(1, j)]));
    }
    for i in 1..=r {
        for j in 1..=r {
            fams[1].insert(word(&[(1, i), (2, j)]));
            if i + j < r {
                fams[2].insert(word(&[(1, i), (2, 1), (1, j)]));
            }
            let tail_ok = match rule {
                FamilyRule::LengthBound => i + j + 2 + 2 <= 2 * r,
                FamilyRule::Sparse => i + 2 <= r && j + 2 <= r,
            };
            if tail_ok {
                fams[3].insert(word(&[(1, i), (2, 1), (1, 1), (2, j)]));
            }
        }
    }
    fams
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub r: usize,
    pub verdict: Verdict,
    pub enumerated: usize,
    pub family_sizes: [usize; 4],
    /// Enumerated but in no family.
    pub unexpected: Vec<Sequence>,
    /// In some family but not enumerated.
    pub missing: Vec<Sequence>,
}

fn enumerate_abba_two_letters(r: usize) -> Result<BTreeSet<Sequence>> {
    let abba: Pattern = "abba".parse()?;
    let q = ExtremalQuery::new(abba, 2, r, 2)?;
    Ok(enumerate_all(&q, &SearchConfig::default())?.collect())
}

fn check_r(r: usize) -> Result<()> {
    if !(2..=6).contains(&r) {
        return Err(Error::Precondition(format!("classification needs 2 <= r <= 6, got {r}")));
    }
    Ok(())
}

/// PASS iff the enumerated abba-free (2,r)-sparse normal sequences with at
/// most two letters are exactly the union of the four families.
pub fn verify_enumeration_classification(r: usize, rule: FamilyRule) -> Result<ClassificationReport> {
    check_r(r)?;
    let found = enumerate_abba_two_letters(r)?;
    let fams = classification_families(r, rule);
    let union: BTreeSet<Sequence> = fams.iter().flatten().cloned().collect();
    let unexpected: Vec<_> = found.difference(&union).cloned().collect();
    let missing: Vec<_> = union.difference(&found).cloned().collect();
    Ok(ClassificationReport {
        r,
        verdict: if unexpected.is_empty() && missing.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        enumerated: found.len(),
        family_sizes: fams.each_ref().map(|f| f.len()),
        unexpected,
        missing,
    })
}

/// Members of the length-bounded family 4 that are not (2,r)-sparse.
pub fn classification_discrepancy(r: usize) -> Result<Vec<Sequence>> {
    check_r(r)?;
    let loose = &classification_families(r, FamilyRule::LengthBound)[3];
    let tight = &classification_families(r, FamilyRule::Sparse)[3];
    Ok(loose.difference(tight).cloned().collect())
}
