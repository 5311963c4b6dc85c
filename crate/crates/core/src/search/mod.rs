//! Exhaustive computation of `Ex_r(v,k,n)`.
//!
//! The search walks the tree of normal sequences: a node using `m` distinct
//! letters may be extended by any of `1..=min(m+1, n)`, which reaches every
//! normal sequence exactly once. Freeness and sparsity are closed under
//! prefixes and invariant under relabeling, so pruning an infeasible child
//! loses nothing and restricting to normal sequences loses nothing. Each
//! extension is checked locally: the `k-1` positions `r, 2r, ...` back for
//! sparsity and the occurrences of `v` ending at the new letter for freeness.
//!
//! Children are tried in ascending letter order, so the first longest node in
//! preorder is the lexicographically least longest witness. With a nonzero
//! `parallel_split_depth` the subtrees rooted at that depth run as independent
//! rayon tasks and their results merge by (length desc, witness asc), which
//! reproduces the serial answer under any schedule.

mod cache;
mod witness;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use cache::{CacheRecord, ResultCache};
pub use witness::{build_abba_r2_counterexample, build_power_witness, build_uniform_witness};

use crate::closedform::ExtremalQuery;
use crate::error::{Error, Result};
use crate::pattern::{self, Pattern};
use crate::seq::{self, Letter, Sequence, SparsityParams};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const MAX_SPLIT_DEPTH: usize = 16;

/// How often (in nodes) the wall-clock limit is polled.
const DEADLINE_POLL: u64 = 1 << 14;

#[derive(Clone, Debug, Default)]
pub struct SearchConfig {
    /// Nodes at this length are not extended; hitting it degrades the result
    /// to a lower bound.
    pub max_len_cap: Option<usize>,
    pub parallel_split_depth: usize,
    /// Worker threads for split searches; 0 uses rayon's global pool.
    pub threads: usize,
    pub collect_all_maximum: bool,
    pub cache_path: Option<PathBuf>,
    /// Wall-clock budget; exceeding it degrades the result to a lower bound.
    pub time_limit: Option<Duration>,
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.parallel_split_depth > MAX_SPLIT_DEPTH {
            return Err(Error::TooLarge {
                name: "parallel_split_depth",
                value: self.parallel_split_depth,
                max: MAX_SPLIT_DEPTH,
            });
        }
        Ok(())
    }

    /// Split policy used by front ends: serial for one thread, otherwise a
    /// frontier deep enough to keep `threads` workers busy.
    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self.parallel_split_depth = if threads <= 1 { 0 } else { 6 };
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// The tree was exhausted.
    Exact,
    /// The length cap or time limit cut the tree.
    LowerBound,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Exact => "exact",
            Status::LowerBound => "lower_bound",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes_visited: u64,
    pub max_depth: usize,
    #[serde(rename = "duration_ms", serialize_with = "serialize_ms")]
    pub duration: Duration,
    pub from_cache: bool,
}

pub(crate) fn serialize_ms<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(d.as_millis() as u64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremalResult {
    pub value: usize,
    pub status: Status,
    /// Lexicographically least longest normal witness.
    pub witness: Sequence,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub all_maximum_witnesses: Option<Vec<Sequence>>,
    pub stats: SearchStats,
}

/// Outcome of one (sub)tree walk.
#[derive(Debug, Default)]
struct Partial {
    best: Vec<Letter>,
    all: Vec<Vec<Letter>>,
    nodes: u64,
    max_depth: usize,
    /// The length cap cut some branch.
    truncated: bool,
    timed_out: bool,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        use std::cmp::Ordering;
        match other.best.len().cmp(&self.best.len()) {
            Ordering::Greater => {
                self.best = other.best;
                self.all = other.all;
            }
            Ordering::Equal => {
                if other.best < self.best {
                    self.best = other.best;
                }
                self.all.extend(other.all);
            }
            Ordering::Less => {}
        }
        self.nodes += other.nodes;
        self.max_depth = self.max_depth.max(other.max_depth);
        self.truncated |= other.truncated;
        self.timed_out |= other.timed_out;
        self
    }
}

struct Explorer<'a> {
    pattern: &'a Pattern,
    sparsity: SparsityParams,
    n: usize,
    cap: Option<usize>,
    collect_all: bool,
    deadline: Option<Instant>,
    buf: Vec<Letter>,
    /// Distinct letters in `buf`, which equals its largest letter.
    distinct: usize,
    out: Partial,
}

impl<'a> Explorer<'a> {
    fn new(q: &'a ExtremalQuery, cfg: &SearchConfig, deadline: Option<Instant>, prefix: Vec<Letter>) -> Self {
        let distinct = prefix.iter().map(|c| c.get() as usize).max().unwrap_or(0);
        Explorer {
            pattern: q.pattern(),
            sparsity: q.sparsity(),
            n: q.n(),
            cap: cfg.max_len_cap,
            collect_all: cfg.collect_all_maximum,
            deadline,
            buf: prefix,
            distinct,
            out: Partial::default(),
        }
    }

    #[inline]
    fn feasible(&self, c: Letter) -> bool {
        seq::can_append_sparse(&self.buf, c, self.sparsity) && !self.pattern.creates_copy_at_end(&self.buf, c)
    }

    fn record(&mut self) {
        let len = self.buf.len();
        self.out.nodes += 1;
        self.out.max_depth = self.out.max_depth.max(len);
        if len > self.out.best.len() || self.out.nodes == 1 {
            self.out.best.clone_from(&self.buf);
            if self.collect_all {
                self.out.all.clear();
                self.out.all.push(self.buf.clone());
            }
        } else if len == self.out.best.len() && self.collect_all {
            self.out.all.push(self.buf.clone());
        }
    }

    fn out_of_time(&mut self) -> bool {
        if self.out.timed_out {
            return true;
        }
        if let Some(deadline) = self.deadline {
            if self.out.nodes.is_multiple_of(DEADLINE_POLL) && Instant::now() >= deadline {
                self.out.timed_out = true;
                return true;
            }
        }
        false
    }

    /// Visits the node spelled by `buf`. With `frontier`, nodes at the split
    /// depth are handed back unvisited instead of explored.
    fn visit(&mut self, mut frontier: Option<&mut (usize, Vec<Vec<Letter>>)>) {
        if let Some((depth, prefixes)) = frontier.as_deref_mut() {
            if self.buf.len() == *depth {
                prefixes.push(self.buf.clone());
                return;
            }
        }
        self.record();
        if self.out_of_time() {
            return;
        }
        let limit = (self.distinct + 1).min(self.n);
        for value in 1..=limit {
            let c = Letter::new_unchecked(value as u8);
            if !self.feasible(c) {
                continue;
            }
            if self.cap.is_some_and(|cap| self.buf.len() >= cap) {
                self.out.truncated = true;
                break;
            }
            let prev = self.distinct;
            self.distinct = self.distinct.max(value);
            self.buf.push(c);
            self.visit(frontier.as_deref_mut());
            self.buf.pop();
            self.distinct = prev;
        }
    }
}

fn run_search(q: &ExtremalQuery, cfg: &SearchConfig) -> Partial {
    let deadline = cfg.time_limit.map(|d| Instant::now() + d);
    let mut root = Explorer::new(q, cfg, deadline, Vec::new());
    if cfg.parallel_split_depth == 0 {
        root.visit(None);
        return root.out;
    }
    let mut frontier = (cfg.parallel_split_depth, Vec::new());
    root.visit(Some(&mut frontier));
    let shallow = root.out;
    let subtrees: Vec<Partial> = frontier
        .1
        .into_par_iter()
        .map(|prefix| {
            let mut ex = Explorer::new(q, cfg, deadline, prefix);
            ex.visit(None);
            ex.out
        })
        .collect();
    let mut merged = subtrees.into_iter().fold(shallow, Partial::merge);
    merged.all.sort();
    merged
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if threads == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Precondition(format!("cannot start thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Re-checks a witness with the full (non-incremental) predicates.
pub fn is_valid_witness(q: &ExtremalQuery, u: &Sequence) -> bool {
    u.is_normal()
        && u.distinct_count() <= q.n()
        && u.is_sparse(q.sparsity())
        && pattern::is_free(u.letters(), q.pattern())
}

/// Computes `Ex_r(v,k,n)` together with its canonical witness.
pub fn compute_extremal(q: &ExtremalQuery, cfg: &SearchConfig) -> Result<ExtremalResult> {
    cfg.validate()?;
    let started = Instant::now();
    let cache = cfg.cache_path.as_ref().map(ResultCache::new);
    if let Some(cache) = cache.as_ref().filter(|_| !cfg.collect_all_maximum) {
        if let Some(rec) = cache.lookup(q)?.filter(|r| r.status == Status::Exact) {
            return Ok(ExtremalResult {
                value: rec.value,
                status: rec.status,
                witness: rec.witness,
                all_maximum_witnesses: None,
                stats: SearchStats {
                    nodes_visited: rec.nodes_visited,
                    max_depth: rec.max_depth,
                    duration: started.elapsed(),
                    from_cache: true,
                },
            });
        }
    }

    let partial = in_pool(cfg.threads, || run_search(q, cfg))?;
    let witness = Sequence::new(partial.best);
    assert!(
        is_valid_witness(q, &witness),
        "search produced an invalid witness {witness} for {q}"
    );
    let result = ExtremalResult {
        value: witness.len(),
        status: if partial.truncated || partial.timed_out { Status::LowerBound } else { Status::Exact },
        all_maximum_witnesses: cfg
            .collect_all_maximum
            .then(|| partial.all.into_iter().map(Sequence::new).collect()),
        witness,
        stats: SearchStats {
            nodes_visited: partial.nodes,
            max_depth: partial.max_depth,
            duration: started.elapsed(),
            from_cache: false,
        },
    };
    if let Some(cache) = cache {
        cache.append(&CacheRecord {
            pattern: q.pattern().to_string(),
            k: q.k(),
            r: q.r(),
            n: q.n(),
            value: result.value,
            status: result.status,
            witness: result.witness.clone(),
            tool_version: TOOL_VERSION.to_owned(),
            nodes_visited: result.stats.nodes_visited,
            max_depth: result.stats.max_depth,
        })?;
    }
    Ok(result)
}

/// Every nonempty v-free, (k,r)-sparse normal sequence over at most `n`
/// letters, in lexicographic order.
pub struct Enumeration<'a> {
    pattern: &'a Pattern,
    sparsity: SparsityParams,
    n: usize,
    cap: Option<usize>,
    buf: Vec<Letter>,
    /// `maxes[i]` is the largest letter among the first `i` letters.
    maxes: Vec<u8>,
    /// Next candidate letter per depth.
    next: Vec<u8>,
    truncated: bool,
}

impl Enumeration<'_> {
    /// True once the length cap has cut off some sequence.
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }
}

impl Iterator for Enumeration<'_> {
    type Item = Sequence;

    fn next(&mut self) -> Option<Sequence> {
        loop {
            let depth = self.buf.len();
            let distinct = self.maxes[depth];
            let limit = (distinct as usize + 1).min(self.n) as u8;
            while self.next[depth] <= limit {
                let c = Letter::new_unchecked(self.next[depth]);
                self.next[depth] += 1;
                if !seq::can_append_sparse(&self.buf, c, self.sparsity)
                    || self.pattern.creates_copy_at_end(&self.buf, c)
                {
                    continue;
                }
                if self.cap.is_some_and(|cap| depth >= cap) {
                    self.truncated = true;
                    break;
                }
                self.buf.push(c);
                self.maxes.push(distinct.max(c.get()));
                self.next.push(1);
                return Some(Sequence::new(self.buf.clone()));
            }
            self.buf.pop()?;
            self.maxes.pop();
            self.next.pop();
        }
    }
}

pub fn enumerate_all<'a>(q: &'a ExtremalQuery, cfg: &SearchConfig) -> Result<Enumeration<'a>> {
    cfg.validate()?;
    Ok(Enumeration {
        pattern: q.pattern(),
        sparsity: q.sparsity(),
        n: q.n(),
        cap: cfg.max_len_cap,
        buf: Vec::new(),
        maxes: vec![0],
        next: vec![1],
        truncated: false,
    })
}
