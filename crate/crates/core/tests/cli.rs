// Copyright 2026 The Compadv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


use std::path::{Path, PathBuf};

use compadv::cli::run_cli_with;
use serde_json::Value;

fn fixture(p: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(p)
        .to_string_lossy()
        .into_owned()
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("compadv").chain(args.iter().copied());
    let code = run_cli_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn records(out: &str) -> Vec<Value> {
    out.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn of_kind<'a>(rs: &'a [Value], kind: &str) -> Vec<&'a Value> {
    rs.iter().filter(|r| r["record"] == kind).collect()
}

fn tune_example1(dir: &Path, extra: &[&str]) -> (i32, String, String) {
    let save: PathBuf = dir.join("rec.json");
    let (w, c) = (fixture("example1/workload.json"), fixture("example1/config.json"));
    let mut args = vec!["tune", "--workload", &w, "--config", &c, "--budget", "100MB"];
    let s = save.to_string_lossy().into_owned();
    args.extend(["--save", &s]);
    args.extend(extra);
    cli(&args)
}

#[test]
fn example1_tune_prefers_the_compressed_covering_index() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, err) = tune_example1(dir.path(), &[]);
    assert_eq!(code, 0, "{err}");
    let rs = records(&out);
    let idx = of_kind(&rs, "index");
    assert_eq!(idx.len(), 1);
    assert_eq!(idx[0]["method"], "PAGE");
    assert!(idx[0]["index"].as_str().unwrap().contains("price"));
    let rec = of_kind(&rs, "recommendation")[0];
    assert!(rec["total_pages"].as_f64().unwrap() <= rec["budget_pages"].as_f64().unwrap());

    let (code, staged, _) = tune_example1(dir.path(), &["--staged"]);
    assert_eq!(code, 0);
    let srs = records(&staged);
    assert!(of_kind(&srs, "index").iter().all(|i| i["method"] == "NONE"));
    let cost = |r: &[Value]| of_kind(r, "recommendation")[0]["cost_after"].as_f64().unwrap();
    assert!(cost(&rs) < cost(&srs));
}

#[test]
fn report_replays_the_saved_recommendation() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = tune_example1(dir.path(), &[]);
    assert_eq!(code, 0);
    let saved = dir.path().join("rec.json");
    let (code, again, _) = cli(&["report", "--input", saved.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out, again);
}

#[test]
fn identical_seeds_give_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let w = fixture("workload.json");
    let run = || cli(&["--seed", "9", "tune", "--workload", &w, "--budget", "300", "--accuracy", "0.3,0.9", "--save", dir.path().join("r.json").to_str().unwrap()]);
    let (c1, a, e1) = run();
    let (c2, b, _) = run();
    assert_eq!((c1, c2), (0, 0), "{e1}");
    assert_eq!(a, b);
    let rec = &of_kind(&records(&a), "recommendation")[0].clone();
    assert!(rec["total_pages"].as_f64().unwrap() <= 300.0);
}

#[test]
fn table_and_jsonl_print_the_same_numbers() {
    let idx = fixture("indexes.json");
    let (c1, jsonl, _) = cli(&["estimate-size", "--indexes", &idx, "--error-tolerance", "0.3", "--confidence", "0.9"]);
    let (c2, table, _) = cli(&["--format", "table", "estimate-size", "--indexes", &idx, "--error-tolerance", "0.3", "--confidence", "0.9"]);
    assert_eq!((c1, c2), (0, 0));
    for r in records(&jsonl) {
        if let Some(p) = r.get("pages") {
            let shown = p.to_string();
            assert!(table.contains(&shown), "{shown} missing from table output");
        }
    }
    assert!(table.contains("[estimate]"));
}

#[test]
fn estimate_size_reports_every_target() {
    let idx = fixture("indexes.json");
    let (code, out, err) = cli(&["estimate-size", "--indexes", &idx, "--error-tolerance", "0.5", "--confidence", "0.9", "--exact-plan"]);
    assert_eq!(code, 0, "{err}");
    let rs = records(&out);
    assert_eq!(of_kind(&rs, "plan").len(), 1);
    let spec: Value = serde_json::from_str(&std::fs::read_to_string(&idx).unwrap()).unwrap();
    let wanted = spec["indexes"].as_array().unwrap().len();
    assert!(of_kind(&rs, "estimate").len() >= wanted);
}

#[test]
fn unreachable_accuracy_exits_with_three() {
    let idx = fixture("indexes.json");
    let (code, _, err) = cli(&["estimate-size", "--indexes", &idx, "--error-tolerance", "0.000001", "--confidence", "0.99"]);
    assert_eq!(code, 3);
    assert!(!err.is_empty());
}

#[test]
fn malformed_input_exits_with_two() {
    let (code, _, err) = cli(&["ingest", &fixture("bad.csv"), &fixture("bad.schema")]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");
    let (code, _, _) = cli(&["tune", "--workload", &fixture("workload.json"), "--budget", "lots"]);
    assert_eq!(code, 2);
    let (code, _, _) = cli(&["frobnicate"]);
    assert_eq!(code, 2);
    let (code, _, _) = cli(&["report", "--input", "/nonexistent/rec.json"]);
    assert_eq!(code, 2);
}

#[test]
fn ingest_and_generate_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("o.csv");
    let (code, _, err) = cli(&["generate", &fixture("small.spec.json"), "--out", csv.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let schema = csv.with_extension("schema");
    let (code, out, err) = cli(&["ingest", csv.to_str().unwrap(), schema.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let rs = records(&out);
    assert!(rs.iter().any(|r| r.get("rows").and_then(Value::as_u64) == Some(5_000)), "{out}");
}
