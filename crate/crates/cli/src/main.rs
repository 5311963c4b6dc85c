//! `dsex`: compute, check and verify values of the extremal function
//! `Ex_r(v,k,n)` from the command line.
//!
//! Exit codes: 0 success, 1 a verification cell failed, 2 usage or parse
//! error, 3 an exact value was required but the search was cut short,
//! 4 I/O error.

use std::fmt::Write as _;
use std::io::Write as _;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use dsex::closedform::{self, ExtremalQuery};
use dsex::search::{build_abba_r2_counterexample, build_power_witness, build_uniform_witness};
use dsex::verify::{self, ConjectureProbe, SuiteSpec};
use dsex::{Pattern, SearchConfig, Sequence, SparsityParams, Status};

#[derive(Parser)]
#[command(name = "dsex", version, about = "Extremal functions of sparse pattern-free sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

#[derive(Args)]
struct QueryArgs {
    /// Forbidden pattern, e.g. `abba` or `1,2,2,1`.
    #[arg(short = 'v', long = "pattern")]
    pattern: Pattern,
    #[arg(short)]
    k: usize,
    #[arg(short, default_value_t = 1)]
    r: usize,
    #[arg(short)]
    n: usize,
}

impl QueryArgs {
    fn query(&self) -> dsex::Result<ExtremalQuery> {
        ExtremalQuery::new(self.pattern.clone(), self.k, self.r, self.n)
    }
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// JSONL result cache to consult and extend.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Worker threads (0 = one per core for suites, serial search per query).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Do not extend sequences beyond this length.
    #[arg(long)]
    cap: Option<usize>,
    /// Wall-clock budget per search, in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Exit with status 3 unless every value is exact.
    #[arg(long)]
    require_exact: bool,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            max_len_cap: self.cap,
            cache_path: self.cache.clone(),
            time_limit: self.time_limit.map(Duration::from_secs_f64),
            ..SearchConfig::default()
        }
        .with_threads(self.threads)
    }
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Compute Ex_r(v,k,n) by exhaustive search.
    Compute {
        #[command(flatten)]
        query: QueryArgs,
        #[command(flatten)]
        search: SearchArgs,
        /// Also list every maximum-length witness.
        #[arg(long)]
        all_max: bool,
    },
    /// Report predicates of a sequence and classifiers of a pattern.
    Check {
        #[arg(short)]
        u: Option<Sequence>,
        #[arg(short = 'v', long = "pattern")]
        pattern: Option<Pattern>,
        #[arg(short)]
        k: Option<usize>,
        #[arg(short, default_value_t = 1)]
        r: usize,
        /// Report normality (the default when nothing else is asked).
        #[arg(long)]
        normal: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// List every v-free (k,r)-sparse normal sequence over at most n letters.
    Enumerate {
        #[command(flatten)]
        query: QueryArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Print one of the explicit constructions.
    Witness {
        #[command(flatten)]
        kind: WitnessKind,
        #[arg(short)]
        n: usize,
        #[arg(short, default_value_t = 1)]
        r: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Run a verification suite.
    Verify {
        /// Built-in suite id.
        #[arg(long, conflicts_with = "manifest", required_unless_present = "manifest")]
        suite: Option<String>,
        /// Manifest file with one `pattern k r n` query per line.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Probe Ex_r(1 2^t1 ... (s+1)^ts 1, k, n) against rn.
    Explore {
        /// Run lengths t1,...,ts.
        #[arg(long = "t", value_delimiter = ',', required = true)]
        t: Vec<usize>,
        #[arg(short)]
        k: usize,
        /// Stride range, `a..b` or a single value.
        #[arg(short = 'r', long = "r", value_parser = parse_range)]
        r: RangeInclusive<usize>,
        /// Alphabet range, `a..b` or a single value.
        #[arg(short = 'n', long = "n", value_parser = parse_range)]
        n: RangeInclusive<usize>,
        #[command(flatten)]
        search: SearchArgs,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct WitnessKind {
    /// 1^r 2^r ... n^r.
    #[arg(long)]
    uniform: bool,
    /// (1 2 ... n)^(s-1), free of a^s.
    #[arg(long, value_name = "S")]
    power: Option<usize>,
    /// 1 2 ... n 1 2 ... n n.
    #[arg(long)]
    abba_r2: bool,
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("expected a number, got {t:?}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
            if a > b {
                return Err(format!("empty range {s}"));
            }
            Ok(a..=b)
        }
        None => num(s).map(|v| v..=v),
    }
}

enum Failure {
    Lib(dsex::Error),
    Reading(PathBuf, dsex::Error),
    Inexact(String),
}

impl From<dsex::Error> for Failure {
    fn from(e: dsex::Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Lib(e.into())
    }
}

type Outcome = Result<ExitCode, Failure>;

fn emit(text: &str) -> Outcome {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        out.write_all(b"\n")?;
    }
    Ok(ExitCode::SUCCESS)
}

fn csv_rows(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    for row in rows {
        w.write_record(&row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is utf-8")
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn inexact(require: bool, what: String) -> Outcome {
    if require {
        Err(Failure::Inexact(what))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn cmd_compute(query: &QueryArgs, search: &SearchArgs, all_max: bool) -> Outcome {
    let q = query.query()?;
    let cfg = SearchConfig {
        collect_all_maximum: all_max,
        ..search.config()
    };
    let res = dsex::compute_extremal(&q, &cfg)?;
    let pred = closedform::predict_exact(&q);
    let pred_value = pred.value.map(|v| v.to_string()).unwrap_or_default();
    let formula = pred.formula_id.map(|f| f.as_str()).unwrap_or("");
    let text = match search.format {
        Format::Json => json_text(&json!({
            "pattern": q.pattern().to_string(),
            "k": q.k(),
            "r": q.r(),
            "n": q.n(),
            "value": res.value,
            "status": res.status,
            "witness": res.witness,
            "all_maximum_witnesses": res.all_maximum_witnesses,
            "predicted": pred.value,
            "formula_id": pred.formula_id,
            "nodes_visited": res.stats.nodes_visited,
            "max_depth": res.stats.max_depth,
            "duration_ms": res.stats.duration.as_millis() as u64,
        })),
        Format::Csv => csv_rows(
            &["pattern", "k", "r", "n", "value", "status", "predicted", "formula_id", "witness", "nodes_visited", "duration_ms"],
            [vec![
                q.pattern().to_string(),
                q.k().to_string(),
                q.r().to_string(),
                q.n().to_string(),
                res.value.to_string(),
                res.status.to_string(),
                pred_value,
                formula.to_owned(),
                res.witness.to_string(),
                res.stats.nodes_visited.to_string(),
                res.stats.duration.as_millis().to_string(),
            ]],
        ),
        Format::Table => {
            let mut s = String::new();
            let _ = writeln!(s, "query        {q}");
            let _ = writeln!(s, "value        {}", res.value);
            let _ = writeln!(s, "status       {}", res.status);
            let _ = writeln!(s, "witness      {}", res.witness);
            if pred.value.is_some() {
                let _ = writeln!(s, "predicted    {pred_value} ({formula}, {:?})", pred.kind);
            }
            if let Some(all) = &res.all_maximum_witnesses {
                let _ = writeln!(s, "maximum      {} witness(es)", all.len());
                for w in all {
                    let _ = writeln!(s, "  {w}");
                }
            }
            let _ = writeln!(s, "nodes        {}", res.stats.nodes_visited);
            let _ = writeln!(s, "max_depth    {}", res.stats.max_depth);
            let _ = writeln!(s, "duration_ms  {}", res.stats.duration.as_millis());
            s
        }
    };
    emit(&text)?;
    match res.status {
        Status::Exact => Ok(ExitCode::SUCCESS),
        Status::LowerBound => inexact(search.require_exact, format!("{q}: only a lower bound {}", res.value)),
    }
}

fn cmd_check(
    u: Option<Sequence>,
    v: Option<Pattern>,
    k: Option<usize>,
    r: usize,
    normal: bool,
    format: Format,
) -> Outcome {
    if u.is_none() && v.is_none() {
        return Err(dsex::Error::Precondition("check needs -u, -v or both".into()).into());
    }
    let mut kv: Vec<(&str, String)> = Vec::new();
    if let Some(u) = &u {
        if normal || (k.is_none() && v.is_none()) {
            kv.push(("normal", u.is_normal().to_string()));
        }
        if let Some(k) = k {
            kv.push(("sparse", u.is_sparse(SparsityParams::new(k, r)?).to_string()));
        }
        if let Some(v) = &v {
            kv.push(("vfree", v.contains_in(u).is_none().to_string()));
        }
    }
    if let Some(v) = &v {
        kv.push(("pattern", v.to_string()));
        kv.push(("chain", v.is_chain().to_string()));
        kv.push(("blowup_of_chain", v.is_blowup_of_chain().to_string()));
        kv.push(("two_sparse", v.is_two_sparse().to_string()));
        kv.push((
            "awa_shape",
            v.awa().map(|a| a.to_string()).unwrap_or_else(|| "none".into()),
        ));
    }
    let text = match format {
        Format::Json => json_text(&serde_json::Value::Object(
            kv.iter()
                .map(|(key, val)| {
                    let val = match val.as_str() {
                        "true" => json!(true),
                        "false" => json!(false),
                        _ => json!(val),
                    };
                    (key.to_string(), val)
                })
                .collect(),
        )),
        Format::Csv => csv_rows(&["key", "value"], kv.iter().map(|(a, b)| vec![a.to_string(), b.clone()])),
        Format::Table => kv.iter().map(|(a, b)| format!("{a}={b}\n")).collect(),
    };
    emit(&text)
}

fn cmd_enumerate(query: &QueryArgs, search: &SearchArgs) -> Outcome {
    let q = query.query()?;
    let mut it = dsex::enumerate_all(&q, &search.config())?;
    let all: Vec<Sequence> = it.by_ref().collect();
    let truncated = it.is_truncated();
    let text = match search.format {
        Format::Json => json_text(&json!({
            "pattern": q.pattern().to_string(),
            "k": q.k(),
            "r": q.r(),
            "n": q.n(),
            "complete": !truncated,
            "count": all.len(),
            "sequences": all,
        })),
        Format::Csv => csv_rows(&["sequence"], all.iter().map(|s| vec![s.to_string()])),
        Format::Table => all.iter().map(|s| format!("{s}\n")).collect(),
    };
    emit(&text)?;
    if truncated {
        eprintln!("note: enumeration cut off by --cap");
        return inexact(search.require_exact, format!("{q}: enumeration truncated"));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_witness(kind: &WitnessKind, n: usize, r: usize, format: Format) -> Outcome {
    let (name, w) = if kind.uniform {
        ("uniform", build_uniform_witness(n, r)?)
    } else if let Some(s) = kind.power {
        ("power", build_power_witness(n, s)?)
    } else {
        ("abba-r2", build_abba_r2_counterexample(n)?)
    };
    let text = match format {
        Format::Json => json_text(&json!({ "kind": name, "n": n, "witness": w, "length": w.len() })),
        Format::Csv => csv_rows(&["kind", "n", "witness", "length"], [vec![
            name.to_owned(),
            n.to_string(),
            w.to_string(),
            w.len().to_string(),
        ]]),
        Format::Table => format!("{w}\n"),
    };
    emit(&text)
}

fn cmd_verify(suite: Option<&str>, manifest: Option<&PathBuf>, search: &SearchArgs) -> Outcome {
    let spec: SuiteSpec = match (suite, manifest) {
        (Some(id), _) => verify::builtin_suite(id).unwrap_or_else(|| {
            let known: Vec<&str> = verify::BUILTIN_SUITES.iter().map(|(id, _)| *id).collect();
            Err(dsex::Error::Precondition(format!(
                "unknown suite {id:?} (known: {})",
                known.join(", ")
            )))
        })?,
        (None, Some(path)) => verify::read_manifest(path).map_err(|e| Failure::Reading(path.clone(), e))?,
        (None, None) => unreachable!("clap requires one of --suite/--manifest"),
    };
    let report = verify::run_suite(&spec, &search.config())?;
    let text = match search.format {
        Format::Json => report.to_json()?,
        Format::Csv => report.to_csv()?,
        Format::Table => report.to_table(),
    };
    emit(&text)?;
    if report.has_failures() {
        return Ok(ExitCode::from(1));
    }
    let capped = report.cells.iter().filter(|c| c.status != Status::Exact).count();
    if capped > 0 {
        return inexact(search.require_exact, format!("{capped} cell(s) are lower bounds only"));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_explore(
    t: Vec<usize>,
    k: usize,
    r: RangeInclusive<usize>,
    n: RangeInclusive<usize>,
    search: &SearchArgs,
) -> Outcome {
    let probe = ConjectureProbe::new(t, k, r, n)?;
    let done = verify::explore_conjecture(&probe, &search.config())?;
    let text = match search.format {
        Format::Json => json_text(&serde_json::to_value(&done).map_err(dsex::Error::from)?),
        Format::Csv => csv_rows(
            &["pattern", "k", "r", "n", "value", "status", "rn", "matches", "verdict", "witness"],
            done.rows.iter().flat_map(|row| {
                let (pattern, k) = (done.pattern.clone(), done.k);
                row.cells.iter().map(move |c| {
                    vec![
                        pattern.clone(),
                        k.to_string(),
                        row.r.to_string(),
                        c.n.to_string(),
                        c.value.to_string(),
                        c.status.to_string(),
                        c.rn.to_string(),
                        c.matches.to_string(),
                        c.verdict.to_string(),
                        c.witness.to_string(),
                    ]
                })
            }),
        ),
        Format::Table => {
            let mut s = format!("pattern {} k={}\n", done.pattern, done.k);
            let _ = write!(s, "{:>3}", "r");
            for c in &done.rows[0].cells {
                let _ = write!(s, " {:>9}", format!("n={}", c.n));
            }
            let _ = writeln!(s, "  {:<9} {:<14} verdict", "all_match", "first_mismatch");
            for row in &done.rows {
                let _ = write!(s, "{:>3}", row.r);
                for c in &row.cells {
                    let mark = if c.status == Status::Exact { "" } else { "+" };
                    let _ = write!(s, " {:>9}", format!("{}{mark}/{}", c.value, c.rn));
                }
                let first = row.first_mismatch_n.map(|n| n.to_string()).unwrap_or_else(|| "-".into());
                let _ = writeln!(s, "  {:<9} {:<14} {}", row.all_match, first, row.verdict);
            }
            if let Some(m) = &done.empirical_min_r {
                let r = m.r.map(|r| r.to_string()).unwrap_or_else(|| "none".into());
                let _ = writeln!(s, "empirical min r: {r} ({})", m.note);
            }
            s.push_str("cells show value/rn; + marks a capped lower bound\n");
            s
        }
    };
    emit(&text)?;
    let capped = done
        .rows
        .iter()
        .flat_map(|r| &r.cells)
        .filter(|c| c.status != Status::Exact)
        .count();
    if done.rows.iter().any(|r| r.verdict == verify::Verdict::Fail) {
        return Ok(ExitCode::from(1));
    }
    if capped > 0 {
        return inexact(search.require_exact, format!("{capped} cell(s) are lower bounds only"));
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Compute { query, search, all_max } => cmd_compute(&query, &search, all_max),
        Command::Check {
            u,
            pattern,
            k,
            r,
            normal,
            format,
        } => cmd_check(u, pattern, k, r, normal, format),
        Command::Enumerate { query, search } => cmd_enumerate(&query, &search),
        Command::Witness { kind, n, r, format } => cmd_witness(&kind, n, r, format),
        Command::Verify { suite, manifest, search } => cmd_verify(suite.as_deref(), manifest.as_ref(), &search),
        Command::Explore { t, k, r, n, search } => cmd_explore(t, k, r, n, &search),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_io() { 4 } else { 2 })
        }
        Err(Failure::Reading(path, e)) => {
            eprintln!("error: {}: {e}", path.display());
            ExitCode::from(if e.is_io() { 4 } else { 2 })
        }
        Err(Failure::Inexact(what)) => {
            eprintln!("error: exact value required: {what}");
            ExitCode::from(3)
        }
    }
}

