//! Subsequence-isomorphism containment and structural pattern classifiers.
//!
//! `u` contains `v` when some subsequence of `u` is isomorphic to `v`. The
//! matcher walks the pattern left to right, extending an injective map from
//! pattern letters to host letters. Once a pattern letter is mapped only its
//! earliest next occurrence needs trying, and for an unmapped letter only the
//! earliest next occurrence of each unused host letter: any embedding can be
//! shifted onto those positions without disturbing the rest.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::seq::{self, Letter, Sequence, SparsityParams, L_MAX};

/// Witness of containment: host positions and the letter map that spell the
/// pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Occurrence {
    /// Strictly increasing indices into the host.
    pub positions: Vec<usize>,
    /// `letter_map[i]` is the host letter assigned to pattern letter `i + 1`.
    pub letter_map: Vec<Letter>,
}

impl Occurrence {
    /// Re-checks the occurrence against its host and pattern.
    pub fn validates(&self, host: &[Letter], pattern: &Pattern) -> bool {
        let pat = pattern.base.letters();
        if self.positions.len() != pat.len() || self.letter_map.len() != pattern.distinct_count() {
            return false;
        }
        if self.positions.windows(2).any(|w| w[0] >= w[1]) {
            return false;
        }
        if self.positions.last().is_some_and(|&p| p >= host.len()) {
            return false;
        }
        let mut images = 0u64;
        for c in &self.letter_map {
            if images & c.bit() != 0 {
                return false;
            }
            images |= c.bit();
        }
        self.positions
            .iter()
            .zip(pat)
            .all(|(&pos, pl)| self.letter_map[pl.index()] == host[pos])
    }
}

/// `a w a` decomposition of a pattern whose first and last letters agree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AwaShape {
    pub head: Letter,
    /// The pattern with its first and last letters removed, original labels.
    pub inner: Sequence,
    pub inner_is_chain: bool,
    pub inner_is_blowup_of_chain: bool,
    pub head_absent_from_inner: bool,
}

impl AwaShape {
    /// The shape `Ex_r = rn` forces: inner word a blow-up of a chain avoiding the head.
    pub fn is_blowup_shape(&self) -> bool {
        self.inner_is_blowup_of_chain && self.head_absent_from_inner
    }

    /// The shape for which `Ex_1 = n`: inner word a chain avoiding the head.
    pub fn is_chain_shape(&self) -> bool {
        self.inner_is_chain && self.head_absent_from_inner
    }
}

impl fmt::Display for AwaShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "a={} w={} chain={} blowup_of_chain={} a_absent={}",
            Sequence::new(vec![self.head]).to_alphabetic(),
            self.inner.to_alphabetic(),
            self.inner_is_chain,
            self.inner_is_blowup_of_chain,
            self.head_absent_from_inner
        )
    }
}

/// A forbidden pattern, stored in normal form with its classification.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    base: Sequence,
    is_chain: bool,
    is_blowup_of_chain: bool,
    is_two_sparse: bool,
}

impl Pattern {
    pub fn new(v: &Sequence) -> Result<Pattern> {
        if v.is_empty() {
            return Err(Error::EmptyPattern);
        }
        let base = v.normalize();
        Ok(Pattern {
            is_chain: is_chain(&base),
            is_blowup_of_chain: is_blowup_of_chain(&base),
            is_two_sparse: base.is_sparse(SparsityParams::new(2, 1)?),
            base,
        })
    }

    /// `a^s`.
    pub fn power(s: usize) -> Result<Pattern> {
        Pattern::new(&Sequence::from_values(std::iter::repeat_n(1u8, s))?)
    }

    /// `12...len`.
    pub fn chain(len: usize) -> Result<Pattern> {
        if len > L_MAX {
            return Err(Error::TooLarge { name: "chain length", value: len, max: L_MAX });
        }
        Pattern::new(&Sequence::from_values(1..=len as u8)?)
    }

    pub fn base(&self) -> &Sequence {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn distinct_count(&self) -> usize {
        self.base.distinct_count()
    }

    pub fn is_chain(&self) -> bool {
        self.is_chain
    }

    pub fn is_blowup_of_chain(&self) -> bool {
        self.is_blowup_of_chain
    }

    pub fn is_two_sparse(&self) -> bool {
        self.is_two_sparse
    }

    /// Isomorphism test against a pattern written in text syntax.
    pub fn is_shape(&self, text: &str) -> bool {
        text.parse::<Sequence>()
            .is_ok_and(|s| s.normalize() == self.base)
    }

    /// `Some(s)` when the pattern is `a^s`.
    pub fn power_exponent(&self) -> Option<usize> {
        (self.distinct_count() == 1).then_some(self.len())
    }

    pub fn runs(&self) -> Vec<(Letter, usize)> {
        run_length_encode(&self.base)
    }

    pub fn awa(&self) -> Option<AwaShape> {
        decompose_awa(&self.base)
    }

    pub fn contains_in(&self, host: &Sequence) -> Option<Occurrence> {
        contains(host.letters(), self)
    }

    /// Whether `host` followed by `c` contains the pattern, given that `host`
    /// itself does not. Only occurrences ending at the new position are
    /// searched, with the last pattern letter pinned to `c`.
    pub fn creates_copy_at_end(&self, host: &[Letter], c: Letter) -> bool {
        let pat = self.base.letters();
        let (&last, prefix) = pat.split_last().expect("patterns are nonempty");
        let mut m = Matcher::new(host, prefix);
        m.map[last.index()] = c.get();
        m.used = c.bit();
        m.run(0, 0)
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pattern({})", self.base.to_alphabetic())
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.base.to_alphabetic())
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Pattern> {
        Pattern::new(&s.parse()?)
    }
}

impl Serialize for Pattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Pattern {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

struct Matcher<'a> {
    host: &'a [Letter],
    pat: &'a [Letter],
    /// Host letter per pattern letter, 0 when unassigned.
    map: [u8; L_MAX],
    used: u64,
    /// Filled only when the caller wants the occurrence back.
    record: bool,
    positions: Vec<usize>,
}

impl<'a> Matcher<'a> {
    fn new(host: &'a [Letter], pat: &'a [Letter]) -> Self {
        Matcher {
            host,
            pat,
            map: [0; L_MAX],
            used: 0,
            record: false,
            positions: Vec::new(),
        }
    }

    fn recording(mut self) -> Self {
        self.record = true;
        self.positions.reserve(self.pat.len());
        self
    }

    #[inline]
    fn push(&mut self, j: usize) {
        if self.record {
            self.positions.push(j);
        }
    }

    #[inline]
    fn pop(&mut self) {
        if self.record {
            self.positions.pop();
        }
    }

    fn run(&mut self, pi: usize, from: usize) -> bool {
        if pi == self.pat.len() {
            return true;
        }
        let remaining = self.pat.len() - pi;
        if self.host.len() < from + remaining {
            return false;
        }
        let last_start = self.host.len() - remaining;
        let pl = self.pat[pi];
        let mapped = self.map[pl.index()];
        if mapped != 0 {
            let Some(j) = (from..=last_start).find(|&j| self.host[j].get() == mapped) else {
                return false;
            };
            self.push(j);
            if self.run(pi + 1, j + 1) {
                return true;
            }
            self.pop();
            return false;
        }
        let mut tried = 0u64;
        for j in from..=last_start {
            let h = self.host[j];
            let bit = h.bit();
            if (self.used | tried) & bit != 0 {
                continue;
            }
            tried |= bit;
            self.map[pl.index()] = h.get();
            self.used |= bit;
            self.push(j);
            if self.run(pi + 1, j + 1) {
                return true;
            }
            self.pop();
            self.used &= !bit;
            self.map[pl.index()] = 0;
        }
        false
    }
}

/// Lexicographically first occurrence (by position vector) of `v` in `host`.
pub fn contains(host: &[Letter], v: &Pattern) -> Option<Occurrence> {
    let mut m = Matcher::new(host, v.base.letters()).recording();
    if !m.run(0, 0) {
        return None;
    }
    let letter_map = m.map[..v.distinct_count()]
        .iter()
        .map(|&h| Letter::new_unchecked(h))
        .collect();
    Some(Occurrence {
        positions: m.positions,
        letter_map,
    })
}

pub fn is_free(host: &[Letter], v: &Pattern) -> bool {
    !Matcher::new(host, v.base.letters()).run(0, 0)
}

/// Maximal runs of equal letters, in order.
pub fn run_length_encode(v: &Sequence) -> Vec<(Letter, usize)> {
    let mut runs: Vec<(Letter, usize)> = Vec::new();
    for &c in v.letters() {
        match runs.last_mut() {
            Some((prev, len)) if *prev == c => *len += 1,
            _ => runs.push((c, 1)),
        }
    }
    runs
}

pub fn expand_runs(runs: &[(Letter, usize)]) -> Sequence {
    Sequence::new(
        runs.iter()
            .flat_map(|&(c, len)| std::iter::repeat_n(c, len))
            .collect(),
    )
}

/// Every letter occurs at most once.
pub fn is_chain(v: &Sequence) -> bool {
    v.distinct_count() == v.len()
}

/// Run letters pairwise distinct, i.e. `v` blows up the chain of its runs.
pub fn is_blowup_of_chain(v: &Sequence) -> bool {
    let mut seen = 0u64;
    run_length_encode(v).iter().all(|(c, _)| {
        let fresh = seen & c.bit() == 0;
        seen |= c.bit();
        fresh
    })
}

pub fn decompose_awa(v: &Sequence) -> Option<AwaShape> {
    let letters = v.letters();
    let (&first, &last) = (letters.first()?, letters.last()?);
    if letters.len() < 2 || first != last {
        return None;
    }
    let inner = Sequence::new(letters[1..letters.len() - 1].to_vec());
    Some(AwaShape {
        head: first,
        inner_is_chain: is_chain(&inner),
        inner_is_blowup_of_chain: is_blowup_of_chain(&inner),
        head_absent_from_inner: inner.sigma(first) == 0,
        inner,
    })
}

pub fn is_two_sparse(v: &Pattern) -> bool {
    seq::is_sparse(v.base.letters(), SparsityParams::new(2, 1).expect("valid"))
}
