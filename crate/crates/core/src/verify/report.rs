//! Report assembly and serialization (JSON, CSV, plain table).

use serde::Serialize;

use super::{Cell, Verdict};
use crate::error::Result;
use crate::search::TOOL_VERSION;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub cells: usize,
    pub pass: usize,
    pub fail: usize,
    pub data: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub suite_id: String,
    pub tool_version: String,
    pub summary: Summary,
    pub cells: Vec<Cell>,
}

impl Report {
    pub fn new(suite_id: String, cells: Vec<Cell>) -> Report {
        let mut summary = Summary {
            cells: cells.len(),
            ..Summary::default()
        };
        for c in &cells {
            match c.verdict {
                Verdict::Pass => summary.pass += 1,
                Verdict::Fail => summary.fail += 1,
                Verdict::Data => summary.data += 1,
            }
        }
        Report {
            schema_version: REPORT_SCHEMA_VERSION,
            suite_id,
            tool_version: TOOL_VERSION.to_owned(),
            summary,
            cells,
        }
    }

    pub fn has_failures(&self) -> bool {
        self.summary.fail > 0
    }

    /// Copy with every wall-clock field zeroed, for determinism comparisons.
    pub fn without_durations(&self) -> Report {
        let mut out = self.clone();
        for c in &mut out.cells {
            c.duration_ms = 0;
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// One row per cell:
    /// `pattern,k,r,n,value,status,predicted,formula_id,verdict,witness,duration_ms`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "pattern",
            "k",
            "r",
            "n",
            "value",
            "status",
            "predicted",
            "formula_id",
            "verdict",
            "witness",
            "duration_ms",
        ])?;
        for c in &self.cells {
            w.write_record([
                c.pattern.clone(),
                c.k.to_string(),
                c.r.to_string(),
                c.n.to_string(),
                c.value.to_string(),
                c.status.to_string(),
                c.predicted.value.map(|v| v.to_string()).unwrap_or_default(),
                c.predicted
                    .formula_id
                    .map(|f| f.as_str().to_owned())
                    .unwrap_or_default(),
                c.verdict.to_string(),
                c.witness.to_string(),
                c.duration_ms.to_string(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_table(&self) -> String {
        let mut out = format!(
            "suite {}  cells={} pass={} fail={} data={}\n",
            self.suite_id, self.summary.cells, self.summary.pass, self.summary.fail, self.summary.data
        );
        out.push_str(&format!(
            "{:<8} {:>2} {:>2} {:>2} {:>6} {:<11} {:>6} {:<18} {:<7} {}\n",
            "pattern", "k", "r", "n", "value", "status", "pred", "formula", "verdict", "witness"
        ));
        for c in &self.cells {
            out.push_str(&format!(
                "{:<8} {:>2} {:>2} {:>2} {:>6} {:<11} {:>6} {:<18} {:<7} {}\n",
                c.pattern,
                c.k,
                c.r,
                c.n,
                c.value,
                c.status,
                c.predicted.value.map(|v| v.to_string()).unwrap_or_else(|| "-".into()),
                c.predicted.formula_id.map(|f| f.as_str()).unwrap_or("-"),
                c.verdict,
                c.witness
            ));
            for o in c.checks.iter().filter(|o| o.verdict == Verdict::Fail) {
                out.push_str(&format!("    FAIL {}: {}\n", o.check.as_str(), o.detail));
            }
        }
        out
    }
}
