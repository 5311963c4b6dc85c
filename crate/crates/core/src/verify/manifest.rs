//! Suite manifests: one query per line as `pattern k r n`, `#` starts a
//! comment. Any of `k`, `r`, `n` may be an inclusive range `a..b`, which
//! expands to every value in it.

use std::path::Path;

use super::SuiteSpec;
use crate::closedform::ExtremalQuery;
use crate::error::{Error, Result};
use crate::pattern::Pattern;

/// Manifests shipped with the crate, by suite id.
pub const BUILTIN_SUITES: &[(&str, &str)] = &[
    ("default", include_str!("../../suites/default.txt")),
    ("shape", include_str!("../../suites/shape.txt")),
    ("thm-abba-r5", include_str!("../../suites/thm-abba-r5.txt")),
];

pub fn builtin_suite(id: &str) -> Option<Result<SuiteSpec>> {
    BUILTIN_SUITES
        .iter()
        .find(|(name, _)| *name == id)
        .map(|(name, text)| parse_manifest(name, text))
}

fn parse_range(tok: &str, what: &str, line: usize) -> Result<std::ops::RangeInclusive<usize>> {
    let bad = |reason: String| Error::Manifest { line, reason };
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| bad(format!("{what}: expected a number, got {s:?}")))
    };
    match tok.split_once("..") {
        Some((lo, hi)) => {
            let (lo, hi) = (num(lo)?, num(hi.trim_start_matches('='))?);
            if lo > hi {
                return Err(bad(format!("{what}: empty range {tok}")));
            }
            Ok(lo..=hi)
        }
        None => {
            let v = num(tok)?;
            Ok(v..=v)
        }
    }
}

pub fn parse_manifest(suite_id: &str, text: &str) -> Result<SuiteSpec> {
    let mut grid = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let [pattern, k, r, n] = fields[..] else {
            return Err(Error::Manifest {
                line,
                reason: format!("expected `pattern k r n`, got {content:?}"),
            });
        };
        let v: Pattern = pattern.parse().map_err(|e: Error| Error::Manifest {
            line,
            reason: e.to_string(),
        })?;
        let (ks, rs, ns) = (parse_range(k, "k", line)?, parse_range(r, "r", line)?, parse_range(n, "n", line)?);
        for k in ks {
            for r in rs.clone() {
                for n in ns.clone() {
                    let q = ExtremalQuery::new(v.clone(), k, r, n).map_err(|e| Error::Manifest {
                        line,
                        reason: e.to_string(),
                    })?;
                    grid.push(q);
                }
            }
        }
    }
    Ok(SuiteSpec::new(suite_id, grid))
}

pub fn read_manifest(path: &Path) -> Result<SuiteSpec> {
    let text = std::fs::read_to_string(path)?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "manifest".into());
    parse_manifest(&id, &text)
}

impl SuiteSpec {
    pub fn from_manifest_file(path: &Path) -> Result<SuiteSpec> {
        read_manifest(path)
    }
}
