//! Finite words over the letters `1..=L_MAX`, their statistics, normal form,
//! isomorphism, and (k,r)-sparsity.
//!
//! Text syntax, shared by every module and the CLI:
//!
//! * alphabetic: `abba` is `1 2 2 1` (`a`..`z` are `1`..`26`);
//! * digits: `121331`, each digit `1`..`9` one letter;
//! * comma-separated numbers: `1,2,2,1`, for any letter up to `L_MAX`.
//!
//! The empty string is the empty sequence.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest letter value. Supports are stored as one `u64` bitset.
pub const L_MAX: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[repr(transparent)]
#[serde(transparent)]
pub struct Letter(u8);

impl Letter {
    pub fn new(value: u64) -> Result<Letter> {
        if (1..=L_MAX as u64).contains(&value) {
            Ok(Letter(value as u8))
        } else {
            Err(Error::LetterOutOfRange(value))
        }
    }

    /// Callers guarantee `1 <= value <= L_MAX`.
    pub(crate) const fn new_unchecked(value: u8) -> Letter {
        Letter(value)
    }

    #[inline]
    pub fn get(self) -> u8 {
        self.0
    }

    #[inline]
    pub(crate) fn index(self) -> usize {
        self.0 as usize - 1
    }

    #[inline]
    pub(crate) fn bit(self) -> u64 {
        1u64 << (self.0 - 1)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Window size `k` and stride `r` of the (k,r)-sparsity condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SparsityParams {
    k: usize,
    r: usize,
}

impl SparsityParams {
    pub fn new(k: usize, r: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::TooSmall { name: "k", value: k, min: 1 });
        }
        if r == 0 {
            return Err(Error::TooSmall { name: "r", value: r, min: 1 });
        }
        Ok(SparsityParams { k, r })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.r
    }
}

/// An immutable sequence with cached length, support and letter counts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Sequence {
    letters: Vec<Letter>,
    counts: [u32; L_MAX],
    support: u64,
}

impl Sequence {
    pub fn new(letters: Vec<Letter>) -> Sequence {
        let mut counts = [0u32; L_MAX];
        let mut support = 0u64;
        for &c in &letters {
            counts[c.index()] += 1;
            support |= c.bit();
        }
        Sequence {
            letters,
            counts,
            support,
        }
    }

    pub fn empty() -> Sequence {
        Sequence::new(Vec::new())
    }

    pub fn from_values<I>(values: I) -> Result<Sequence>
    where
        I: IntoIterator,
        I::Item: Into<u64>,
    {
        let letters = values
            .into_iter()
            .map(|v| Letter::new(v.into()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Sequence::new(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn values(&self) -> Vec<u8> {
        self.letters.iter().map(|c| c.get()).collect()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of occurrences of `i`.
    pub fn sigma(&self, i: Letter) -> usize {
        self.counts[i.index()] as usize
    }

    /// Number of distinct letters, `||u||`.
    pub fn distinct_count(&self) -> usize {
        self.support.count_ones() as usize
    }

    /// Bitset of letters present; bit `i - 1` stands for letter `i`.
    pub fn support(&self) -> u64 {
        self.support
    }

    pub fn max_letter(&self) -> Option<Letter> {
        self.letters.iter().copied().max()
    }

    pub fn appended(&self, c: Letter) -> Sequence {
        let mut letters = self.letters.clone();
        letters.push(c);
        Sequence::new(letters)
    }

    /// The unique normal sequence isomorphic to `self`: letters are
    /// relabeled `1, 2, 3, ...` in order of first occurrence.
    pub fn normalize(&self) -> Sequence {
        Sequence::new(normalize_letters(&self.letters))
    }

    pub fn is_normal(&self) -> bool {
        is_normal_letters(&self.letters)
    }

    pub fn is_isomorphic(&self, other: &Sequence) -> bool {
        self.len() == other.len()
            && normalize_letters(&self.letters) == normalize_letters(&other.letters)
    }

    pub fn is_sparse(&self, p: SparsityParams) -> bool {
        is_sparse(&self.letters, p)
    }

    /// Gap form of k-sparsity: equal letters sit at distance at least `k`.
    pub fn is_k_sparse_by_gap(&self, k: usize) -> bool {
        is_k_sparse_by_gap(&self.letters, k)
    }

    /// Renders with the alphabetic syntax when every letter is at most 26.
    pub fn to_alphabetic(&self) -> String {
        if self.max_letter().is_some_and(|m| m.get() > 26) {
            return self.to_comma_list();
        }
        self.letters
            .iter()
            .map(|c| (b'a' + c.get() - 1) as char)
            .collect()
    }

    /// Renders with digits when every letter is at most 9.
    pub fn to_numeric(&self) -> String {
        if self.max_letter().is_some_and(|m| m.get() > 9) {
            return self.to_comma_list();
        }
        self.letters
            .iter()
            .map(|c| (b'0' + c.get()) as char)
            .collect()
    }

    /// A one-letter list keeps a trailing comma so `10,` is not read as `1 0`.
    fn to_comma_list(&self) -> String {
        let mut out = self
            .letters
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",");
        if self.letters.len() == 1 {
            out.push(',');
        }
        out
    }
}

impl fmt::Debug for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sequence({})", self.to_numeric())
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_numeric())
    }
}

impl PartialOrd for Sequence {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Sequence {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.letters.cmp(&other.letters)
    }
}

impl FromStr for Sequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Sequence> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Sequence::empty());
        }
        if s.contains(',') {
            let values = s
                .strip_suffix(',')
                .unwrap_or(s)
                .split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::parse(s, format!("bad number {:?}", tok.trim())))
                })
                .collect::<Result<Vec<_>>>()?;
            return Sequence::from_values(values);
        }
        if s.bytes().all(|b| b.is_ascii_lowercase()) {
            return Sequence::from_values(s.bytes().map(|b| b - b'a' + 1));
        }
        if s.bytes().all(|b| (b'1'..=b'9').contains(&b)) {
            return Sequence::from_values(s.bytes().map(|b| b - b'0'));
        }
        Err(Error::parse(
            s,
            "expected lowercase letters, digits 1-9, or a comma-separated list",
        ))
    }
}

impl Serialize for Sequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_numeric())
    }
}

impl<'de> Deserialize<'de> for Sequence {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub(crate) fn normalize_letters(letters: &[Letter]) -> Vec<Letter> {
    let mut relabel = [0u8; L_MAX];
    let mut next = 0u8;
    letters
        .iter()
        .map(|c| {
            let slot = &mut relabel[c.index()];
            if *slot == 0 {
                next += 1;
                *slot = next;
            }
            Letter(*slot)
        })
        .collect()
}

pub(crate) fn is_normal_letters(letters: &[Letter]) -> bool {
    let mut seen = 0u8;
    for c in letters {
        if c.get() > seen + 1 {
            return false;
        }
        if c.get() == seen + 1 {
            seen += 1;
        }
    }
    true
}

/// Every window `j, j+r, ..., j+(k-1)r`, truncated at the right edge, holds
/// pairwise-distinct letters.
pub fn is_sparse(letters: &[Letter], p: SparsityParams) -> bool {
    let l = letters.len();
    (0..l).all(|j| {
        let mut seen = 0u64;
        (0..p.k)
            .map(|t| j + t * p.r)
            .take_while(|&pos| pos < l)
            .all(|pos| {
                let bit = letters[pos].bit();
                let fresh = seen & bit == 0;
                seen |= bit;
                fresh
            })
    })
}

pub fn is_k_sparse_by_gap(letters: &[Letter], k: usize) -> bool {
    let mut last = [usize::MAX; L_MAX];
    for (i, c) in letters.iter().enumerate() {
        let prev = last[c.index()];
        if prev != usize::MAX && i - prev < k {
            return false;
        }
        last[c.index()] = i;
    }
    true
}

/// Whether `letters` followed by `c` is still (k,r)-sparse, assuming
/// `letters` already is. Only windows ending at the new position can break.
#[inline]
pub(crate) fn can_append_sparse(letters: &[Letter], c: Letter, p: SparsityParams) -> bool {
    let l = letters.len();
    (1..p.k)
        .map(|t| t * p.r)
        .take_while(|&back| back <= l)
        .all(|back| letters[l - back] != c)
}
