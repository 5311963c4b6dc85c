use std::process::{Command, Output};

fn dsex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dsex"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

/// Drops every `duration_ms` field, wherever it is nested.
fn strip_durations(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Object(m) => {
            m.remove("duration_ms");
            m.values_mut().for_each(strip_durations);
        }
        serde_json::Value::Array(a) => a.iter_mut().for_each(strip_durations),
        _ => {}
    }
}

#[test]
fn compute_reports_values() {
    let out = dsex(&["compute", "-v", "abba", "-k", "2", "-r", "1", "-n", "3", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["value"], 7);
    assert_eq!(v["status"], "exact");
    assert_eq!(v["formula_id"], "eq2-abba-r1");

    let out = dsex(&["compute", "-v", "ab", "-k", "2", "-r", "4", "-n", "9"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).lines().any(|l| l.split_whitespace().eq(["value", "4"])));
}

#[test]
fn compute_rejects_infinite_queries() {
    let out = dsex(&["compute", "-v", "abba", "-k", "1", "-n", "3"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("k < ||v|| makes Ex infinite"));
    assert_eq!(code(&dsex(&["compute", "-v", "ab0", "-k", "2", "-n", "3"])), 2);
    assert_eq!(code(&dsex(&["compute", "-k", "2", "-n", "3"])), 2);
}

#[test]
fn require_exact_turns_caps_into_exit_3() {
    let args = ["compute", "-v", "abba", "-k", "2", "-n", "6", "--cap", "5"];
    assert_eq!(code(&dsex(&args)), 0);
    let mut strict = args.to_vec();
    strict.push("--require-exact");
    let out = dsex(&strict);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("lower_bound"));
}

#[test]
fn check_prints_key_value_lines() {
    let out = dsex(&["check", "-u", "123412344", "-v", "abba", "-k", "2", "-r", "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("vfree=true\n") && text.contains("sparse=true\n"), "{text}");
    assert!(text.contains("chain=false\n") && text.contains("blowup_of_chain=false\n"));
    assert!(text.contains("two_sparse=false\n") && text.contains("awa_shape=a=a w=bb"));

    assert_eq!(stdout(&dsex(&["check", "-u", "242112", "--normal"])), "normal=false\n");
    assert_eq!(stdout(&dsex(&["check", "-u", "11", "-k", "2", "-r", "1"])), "sparse=false\n");
    assert_eq!(code(&dsex(&["check", "-u", "1x"])), 2);
    assert_eq!(code(&dsex(&["check"])), 2);
}

#[test]
fn witnesses_and_enumeration() {
    assert_eq!(stdout(&dsex(&["witness", "--uniform", "-n", "3", "-r", "2"])), "112233\n");
    assert_eq!(stdout(&dsex(&["witness", "--power", "3", "-n", "3"])), "123123\n");
    assert_eq!(stdout(&dsex(&["witness", "--abba-r2", "-n", "4"])), "123412344\n");
    assert_eq!(code(&dsex(&["witness", "--abba-r2", "-n", "1"])), 2);
    assert_eq!(code(&dsex(&["witness", "-n", "3"])), 2);
    assert_eq!(
        stdout(&dsex(&["enumerate", "-v", "abba", "-k", "2", "-r", "3", "-n", "1"])),
        "1\n11\n111\n"
    );
}

#[test]
fn printed_witnesses_re_parse() {
    for (v, k, r, n) in [("abab", "2", "2", "3"), ("abba", "3", "1", "5"), ("aa", "2", "1", "11")] {
        let out = json(&dsex(&["compute", "-v", v, "-k", k, "-r", r, "-n", n, "--format", "json"]));
        let w = out["witness"].as_str().unwrap().to_owned();
        let check = stdout(&dsex(&["check", "-u", &w, "-v", v, "-k", k, "-r", r]));
        assert!(check.contains("vfree=true") && check.contains("sparse=true"), "{w}: {check}");
        let p = stdout(&dsex(&["check", "-v", out["pattern"].as_str().unwrap()]));
        assert!(p.contains(&format!("pattern={v}\n")));
    }
}

#[test]
fn verify_default_suite_passes() {
    let out = dsex(&["verify", "--suite", "default", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "pattern,k,r,n,value,status,predicted,formula_id,verdict,witness,duration_ms"
    );
    assert!(lines.all(|l| l.contains(",PASS,") || l.contains(",DATA,")));

    let out = dsex(&["verify", "--suite", "default", "--format", "json"]);
    let report = json(&out);
    let fails = report["summary"]["fail"].as_u64().unwrap();
    assert_eq!(fails == 0, code(&out) == 0);
    assert_eq!(report["schema_version"], 1);
}

#[test]
fn verify_manifest_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&dsex(&["verify", "--manifest", dir.path().join("none.txt").to_str().unwrap()])), 4);
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "abab 2 1 3\nabba 2 1\n").unwrap();
    let out = dsex(&["verify", "--manifest", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    let good = dir.path().join("good.txt");
    std::fs::write(&good, "# two cells\nabab 2 1..2 3\n").unwrap();
    let out = dsex(&["verify", "--manifest", good.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["summary"]["pass"], 2);
    assert_eq!(code(&dsex(&["verify", "--suite", "nope"])), 2);
}

#[test]
fn cache_hit_matches_cold_output() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    let args = [
        "compute", "-v", "abba", "-k", "2", "-r", "2", "-n", "4", "--format", "json", "--cache",
        cache.to_str().unwrap(),
    ];
    let mut cold = json(&dsex(&args));
    assert_eq!(std::fs::read_to_string(&cache).unwrap().lines().count(), 1);
    let mut warm = json(&dsex(&args));
    assert_eq!(std::fs::read_to_string(&cache).unwrap().lines().count(), 1);
    strip_durations(&mut cold);
    strip_durations(&mut warm);
    assert_eq!(cold, warm);
}

#[test]
fn verify_is_deterministic_across_threads() {
    let run = |threads: &str| {
        let mut v = json(&dsex(&["verify", "--suite", "thm-abba-r5", "--format", "json", "--threads", threads]));
        strip_durations(&mut v);
        v
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn explore_marks_rows() {
    let out = dsex(&["explore", "--t", "2", "-k", "2", "--r", "2..5", "--n", "2..4", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[3]["r"], 5);
    assert_eq!(rows[3]["all_match"], true);
    assert_eq!(rows[3]["verdict"], "PASS");
    assert_eq!(rows[0]["cells"][2]["matches"], false);
    assert_eq!(rows[1]["verdict"], "DATA");
    assert_eq!(rows[2]["verdict"], "DATA");
    assert!(v["empirical_min_r"]["note"].as_str().unwrap().contains("not proved"));

    let table = stdout(&dsex(&["explore", "--t", "2", "-k", "2", "--r", "2..5", "--n", "2..4"]));
    assert!(table.lines().any(|l| l.trim_start().starts_with("5 ") && l.contains("true")));
    assert_eq!(code(&dsex(&["explore", "--t", "2", "-k", "2", "--r", "5..2", "--n", "2"])), 2);
    assert_eq!(code(&dsex(&["explore", "--t", "1,1", "-k", "2", "--r", "2", "--n", "2"])), 2);
}
