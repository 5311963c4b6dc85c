//! Append-only JSONL store of computed extremal values.
//!
//! One record per line. Reads de-duplicate by `(pattern, k, r, n)`, keeping
//! exact records over lower bounds, then the highest value.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, ErrorKind, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::Status;
use crate::closedform::ExtremalQuery;
use crate::error::{Error, Result};
use crate::seq::Sequence;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub pattern: String,
    pub k: usize,
    pub r: usize,
    pub n: usize,
    pub value: usize,
    pub status: Status,
    pub witness: Sequence,
    pub tool_version: String,
    #[serde(default)]
    pub nodes_visited: u64,
    #[serde(default)]
    pub max_depth: usize,
}

type Key = (String, usize, usize, usize);

impl CacheRecord {
    fn key(&self) -> Key {
        (self.pattern.clone(), self.k, self.r, self.n)
    }

    fn better_than(&self, other: &CacheRecord) -> bool {
        let rank = |rec: &CacheRecord| (rec.status == Status::Exact, rec.value);
        rank(self) > rank(other)
    }
}

fn query_key(q: &ExtremalQuery) -> Key {
    (q.pattern().to_string(), q.k(), q.r(), q.n())
}

#[derive(Clone, Debug)]
pub struct ResultCache {
    path: PathBuf,
}

impl ResultCache {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        ResultCache { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Best record per key. A missing file is an empty cache.
    pub fn load(&self) -> Result<HashMap<Key, CacheRecord>> {
        let file = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == ErrorKind::NotFound => return Ok(HashMap::new()),
            Err(e) => return Err(e.into()),
        };
        let mut best: HashMap<Key, CacheRecord> = HashMap::new();
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: CacheRecord = serde_json::from_str(&line).map_err(|e| Error::Parse {
                input: format!("{}:{}", self.path.display(), i + 1),
                reason: e.to_string(),
            })?;
            match best.get(&rec.key()) {
                Some(cur) if !rec.better_than(cur) => {}
                _ => {
                    best.insert(rec.key(), rec);
                }
            }
        }
        Ok(best)
    }

    pub fn lookup(&self, q: &ExtremalQuery) -> Result<Option<CacheRecord>> {
        Ok(self.load()?.remove(&query_key(q)))
    }

    pub fn append(&self, record: &CacheRecord) -> Result<()> {
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        writeln!(f, "{}", serde_json::to_string(record)?)?;
        Ok(())
    }
}
