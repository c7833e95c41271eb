use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use heisenberg_core::instance::Instance;
use serde_json::Value;
use tempfile::TempDir;

const QUAD: &str = r#"{"n":3,"generators":[
  {"a":["1"],"b":["0"],"c":"0"},{"a":["-1"],"b":["0"],"c":"0"},
  {"a":["0"],"b":["1"],"c":"0"},{"a":["0"],"b":["-1"],"c":"0"}]}"#;

const QUAD_PLUS_CENTRAL: &str = r#"{"n":3,"generators":[
  {"a":["1"],"b":["0"],"c":"0"},{"a":["-1"],"b":["0"],"c":"0"},
  {"a":["0"],"b":["1"],"c":"0"},{"a":["0"],"b":["-1"],"c":"0"},
  {"a":["0"],"b":["0"],"c":"i"}]}"#;

const OFF_LINE_PAIR: &str = r#"{"n":3,"generators":[
  {"a":["1"],"b":["0"],"c":"i"},{"a":["-1"],"b":["0"],"c":"i"}]}"#;

fn heisid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heisid"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

/// Top-level keys in the order they were written.
fn key_order(line: &str) -> Vec<String> {
    let v: serde_json::Map<String, Value> = serde_json::from_str(line).unwrap();
    let mut keys: Vec<String> = v.keys().cloned().collect();
    keys.sort_by_key(|k| line.find(&format!("\"{k}\":")).unwrap());
    keys
}

#[test]
fn decide_reports_answer_and_branch() {
    let dir = TempDir::new().unwrap();
    let quad = write(&dir, "quad.json", QUAD);
    let out = heisid(&["decide", arg(&quad)]);
    assert_eq!(out.status.code(), Some(0));
    let line = stdout(&out);
    assert_eq!(
        key_order(line.trim()),
        ["problem", "answer", "branch", "timing_ms"]
    );
    let v = &json_lines(&out)[0];
    assert_eq!(v["problem"], "identity");
    assert_eq!(v["answer"], true);
    assert_eq!(v["branch"], "COMMON_LINE/T-system");
}

#[test]
fn trace_has_every_field_with_one_based_indices() {
    let dir = TempDir::new().unwrap();
    let quad = write(&dir, "quad.json", QUAD);
    let out = heisid(&["--trace", "decide", arg(&quad)]);
    let v = &json_lines(&out)[0];
    let trace = v["trace"].as_object().unwrap();
    let expected = [
        "removed_redundant",
        "commutators",
        "angle_class",
        "gamma_line_rep",
        "feasible_tij_pair",
        "half_plane_occupancy",
        "gamma_usable_set",
        "final_system_verdict",
        "witness",
        "systems",
    ];
    assert_eq!(trace.len(), expected.len());
    let text = stdout(&out);
    let positions: Vec<usize> = expected
        .iter()
        .map(|k| text.find(&format!("\"{k}\":")).unwrap())
        .collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(trace["angle_class"]["tag"], "COMMON_LINE");
    assert_eq!(trace["gamma_usable_set"], serde_json::json!([1, 2, 3, 4]));
    assert_eq!(trace["commutators"][0][2], "1");
    assert!(trace["systems"]
        .as_array()
        .unwrap()
        .iter()
        .any(|s| s["id"] == "T[1,3]"));
}

#[test]
fn group_problem_separates_from_identity() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "qc.json", QUAD_PLUS_CENTRAL);
    let identity = &json_lines(&heisid(&["decide", arg(&p)]))[0];
    let group = &json_lines(&heisid(&["group", arg(&p)]))[0];
    assert_eq!(identity["answer"], true);
    assert_eq!(group["problem"], "group");
    assert_eq!(group["answer"], false);
}

#[test]
fn batch_keeps_input_order_across_workers() {
    let dir = TempDir::new().unwrap();
    let yes = write(&dir, "yes.json", QUAD);
    let no = write(&dir, "no.json", OFF_LINE_PAIR);
    let out = heisid(&["--jobs", "2", "decide", arg(&no), arg(&yes), arg(&no)]);
    let answers: Vec<Value> = json_lines(&out)
        .iter()
        .map(|v| v["answer"].clone())
        .collect();
    assert_eq!(answers, [false, true, false]);

    let text = stdout(&heisid(&[
        "--format",
        "text",
        "decide",
        arg(&yes),
        arg(&no),
    ]));
    let headers: Vec<&str> = text.lines().filter(|l| l.starts_with("== ")).collect();
    assert_eq!(headers.len(), 2);
    assert!(headers[0].ends_with("yes.json") && headers[1].ends_with("no.json"));
}

#[test]
fn oracle_finds_a_replayable_identity_word() {
    let dir = TempDir::new().unwrap();
    let quad = write(&dir, "quad.json", QUAD);
    let out = heisid(&["--max-len", "4", "oracle", arg(&quad)]);
    assert_eq!(out.status.code(), Some(0));
    let v = &json_lines(&out)[0];
    assert_eq!(v["search"], "found");
    assert_eq!(v["audit"], "PASS-CONFIRMED");
    let inst = Instance::parse(QUAD).unwrap();
    let word: Vec<usize> = v["witness"]
        .as_array()
        .unwrap()
        .iter()
        .map(|k| k.as_u64().unwrap() as usize - 1)
        .collect();
    assert!(!word.is_empty());
    assert!(inst.generators.product(&word).is_identity());
}

#[test]
fn audit_confirms_negative_answers_exhaustively() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "pair.json", OFF_LINE_PAIR);
    let out = heisid(&["--max-len", "6", "audit", arg(&p)]);
    assert_eq!(out.status.code(), Some(0));
    let v = &json_lines(&out)[0];
    assert_eq!(v["answer"], false);
    assert_eq!(v["search"], "absent");
    assert_eq!(v["audit"], "PASS");

    let group = &json_lines(&heisid(&[
        "--max-len",
        "4",
        "audit",
        "--problem",
        "group",
        arg(&p),
    ]))[0];
    assert_eq!(group["problem"], "group");
    assert!(group["inverse_words"].is_array());
}

#[test]
fn tiny_budget_is_inconclusive_not_a_failure() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "pair.json", OFF_LINE_PAIR);
    let out = heisid(&["--budget", "3", "--max-len", "8", "audit", arg(&p)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_lines(&out)[0]["audit"], "INCONCLUSIVE");
}

#[test]
fn gen_is_deterministic_and_round_trips() {
    let dir = TempDir::new().unwrap();
    let args = [
        "--seed",
        "17",
        "gen",
        "--family",
        "forced-common-line",
        "--n",
        "4",
        "--t",
        "5",
    ];
    let first = stdout(&heisid(&args));
    assert_eq!(first, stdout(&heisid(&args)));
    let other = stdout(&heisid(&[
        "--seed",
        "18",
        "gen",
        "--family",
        "forced-common-line",
        "--n",
        "4",
        "--t",
        "5",
    ]));
    assert_ne!(first, other);
    assert_eq!(Instance::parse(&first).unwrap().to_json(), first);

    let out = dir.path().join("g.json");
    let status = heisid(&[
        "--seed",
        "17",
        "gen",
        "--family",
        "forced-common-line",
        "--n",
        "4",
        "--t",
        "5",
        "--out",
        arg(&out),
    ]);
    assert_eq!(status.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&out).unwrap(), first);
    let decided = &json_lines(&heisid(&["decide", arg(&out)]))[0];
    assert!(decided["branch"]
        .as_str()
        .unwrap()
        .starts_with("COMMON_LINE"));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        &dir,
        "bad.json",
        r#"{"n":3,"generators":[{"a":["1//2"],"b":["0"],"c":"0"}]}"#,
    );
    let out = heisid(&["decide", arg(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("generators[1].a[1]"));

    let missing = dir.path().join("absent.json");
    assert_eq!(heisid(&["decide", arg(&missing)]).status.code(), Some(2));
    assert_eq!(heisid(&["gen", "--family", "nope"]).status.code(), Some(2));
    assert_eq!(
        heisid(&["gen", "--family", "forced-two-lines", "--t", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        heisid(&["decide", "--format", "xml", arg(&bad)])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(heisid(&["decide"]).status.code(), Some(2));
}

#[test]
fn one_bad_file_does_not_hide_the_others() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "good.json", QUAD);
    let bad = write(&dir, "bad.json", "{");
    let out = heisid(&["decide", arg(&good), arg(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_lines(&out).len(), 1);
}
