use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn fixture(name: &str) -> String {
    corpus().join(name).to_string_lossy().into_owned()
}

fn hstarkit(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hstarkit")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, stdout, stderr) = hstarkit(args);
    let value = serde_json::from_str(stdout.trim()).unwrap_or_else(|e| panic!("{e}: {stdout} {stderr}"));
    (code, value)
}

fn lines(stdout: &str) -> Vec<Value> {
    stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn hstar_of_the_explicit_five_dimensional_simplex() {
    let (code, v) = json(&["--json", "hstar", &fixture("prop43.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["hstar"], serde_json::json!([1, 0, 2, 4, 2]));
    assert_eq!(v["degree"], 4);
    assert_eq!(v["volume"], "9");
    assert_eq!(v["box_group_order"], "9");
    assert_eq!(v["expected_hstar_match"], true);
}

#[test]
fn text_output_is_the_default() {
    let (code, stdout, _) = hstarkit(&["hstar", &fixture("prop43.json")]);
    assert_eq!(code, 0);
    assert!(stdout.contains("coefficients: [1, 0, 2, 4, 2]"), "{stdout}");
}

#[test]
fn ehrhart_counts_of_the_unit_triangle() {
    for n in 0..6u64 {
        let (code, v) = json(&["--json", "ehrhart", &fixture("unit-triangle.json"), "--n", &n.to_string()]);
        assert_eq!(code, 0);
        assert_eq!(v["ehrhart"]["count"], binomial(n + 2, 2));
        assert_eq!(v["ehrhart"]["oracle_count"], binomial(n + 2, 2));
    }
}

#[test]
fn oracle_verify_matches() {
    let (code, v) = json(&["--json", "oracle-verify", &fixture("prop43.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["oracle"]["match"], true);
}

#[test]
fn box_group_lists_every_element() {
    let (code, v) = json(&["--json", "box-group", &fixture("prop43.json")]);
    assert_eq!(code, 0);
    let elements = v["box_group"]["elements"].as_array().expect("elements");
    let mut heights: Vec<u64> = elements.iter().map(|e| e["height"].as_u64().unwrap()).collect();
    heights.sort_unstable();
    assert_eq!(heights, vec![0, 2, 2, 3, 3, 3, 3, 4, 4]);
}

#[test]
fn extract_face_from_a_join() {
    let (code, v) = json(&["--json", "extract-face", &fixture("delta23-join.json"), "--k", "3"]);
    assert_eq!(code, 0);
    let cert = &v["certificates"]["extraction"];
    assert_eq!(cert["theorem_applies"], true);
    assert_eq!(cert["face_hstar"], serde_json::json!([1, 0, 0, 2]));
    assert_eq!(cert["hstar_match"], true);
    assert_eq!(cert["lemma32"]["closed_under_add"], true);
}

#[test]
fn extract_face_without_the_window() {
    let (code, v) = json(&["--json", "extract-face", &fixture("remark44-k2.json"), "--k", "2"]);
    assert_eq!(code, 0);
    let cert = &v["certificates"]["extraction"];
    assert_eq!(cert["theorem_applies"], false);
    assert_eq!(cert["hstar_match"], false);

    let (code, _, stderr) = hstarkit(&["--strict", "extract-face", &fixture("remark44-k2.json"), "--k", "2"]);
    assert_eq!(code, 5, "{stderr}");
    let (code, _, _) = hstarkit(&["--strict", "extract-face", &fixture("remark44-k2.json"), "--k", "3"]);
    assert_eq!(code, 5);
}

#[test]
fn extract_face_of_a_unimodular_simplex() {
    let (code, v) = json(&["--json", "--strict", "extract-face", &fixture("unit-simplex.json"), "--k", "3"]);
    assert_eq!(code, 0);
    let cert = &v["certificates"]["extraction"];
    assert_eq!(cert["face"], serde_json::json!([0]));
    assert_eq!(cert["face_hstar"], serde_json::json!([1]));
    assert_eq!(cert["hstar_match"], true);
}

#[test]
fn gen_families() {
    let (code, v) = json(&["gen", "remark44", "--k", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["name"], "remark44_k2");
    assert_eq!(v["vertices"][5], serde_json::json!([2, 2, 2, 2, 3]));

    let (_, v) = json(&["gen", "prop43", "--k", "3", "--j", "4"]);
    assert_eq!(v["vertices"][5], serde_json::json!([1, 4, 7, 8, 9]));

    let (_, v) = json(&["gen", "unit", "--dim", "4"]);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 5);

    let (_, v) = json(&["gen", "delta_cm", "--c", "2", "--m", "3"]);
    assert_eq!(v["name"], "delta_cm_c2_m3");

    let (code, _, _) = hstarkit(&["gen", "prop43", "--k", "3", "--j", "9"]);
    assert_eq!(code, 2);
    let (code, _, _) = hstarkit(&["gen", "delta_cm", "--c", "0", "--m", "3"]);
    assert_eq!(code, 2);
}

#[test]
fn generated_documents_feed_back_into_hstar() {
    let dir = tempfile::tempdir().unwrap();
    let (_, doc, _) = hstarkit(&["gen", "delta_cm", "--c", "3", "--m", "2"]);
    let path = dir.path().join("d.json");
    std::fs::write(&path, &doc).unwrap();
    let (code, v) = json(&["--json", "hstar", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["hstar"], serde_json::json!([1, 0, 3]));
    assert_eq!(v["input"], serde_json::from_str::<Value>(&doc).unwrap());
    let (_, again) = json(&["--json", "hstar", path.to_str().unwrap()]);
    assert_eq!(v, again);
}

#[test]
fn check_conditions_examples() {
    let (code, v) = json(&["--json", "check-conditions", "--hstar", "1,7,1", "--dim", "2"]);
    assert_eq!(code, 0);
    let checks = v["conditions"]["checks"].as_array().unwrap();
    let scott = checks.iter().find(|c| c["check"] == "scott_dimension2").unwrap();
    assert_eq!(scott["verdict"], "satisfied");
    assert_eq!(scott["condition"], 3);

    let (_, v) = json(&["--json", "check-conditions", "--hstar", "1,0,1,3"]);
    assert_eq!(v["conditions"]["non_realizable"], true);
    let three = v["conditions"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["check"] == "three_term_prime")
        .unwrap()
        .clone();
    assert_eq!(three["verdict"], "not_realizable");
    assert!(three["note"].as_str().unwrap().contains("p = 5"));

    let (_, v) = json(&["--json", "check-conditions", "--hstar", "1,0,2,4"]);
    assert_eq!(v["conditions"]["non_realizable"], true);

    let (code, _, _) = hstarkit(&["check-conditions", "--hstar", "2,1"]);
    assert_eq!(code, 2);
    let (code, _, _) = hstarkit(&["check-conditions", "--hstar", "1,x"]);
    assert_eq!(code, 2);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(hstarkit(&["hstar", bad.to_str().unwrap()]).0, 2);
    assert_eq!(hstarkit(&["hstar", "/nonexistent/file.json"]).0, 2);
    assert_eq!(hstarkit(&["no-such-command"]).0, 2);
    assert_eq!(hstarkit(&["--help"]).0, 0);

    assert_eq!(hstarkit(&["hstar", &fixture("prop43.json"), "--max-volume", "1"]).0, 3);
    assert_eq!(hstarkit(&["search", "--k", "3", "--max-order", "10001"]).0, 3);
    assert_eq!(hstarkit(&["search", "--k", "3", "--max-order", "5", "--max-dim", "21"]).0, 3);

    let wrong = dir.path().join("wrong.json");
    let text = std::fs::read_to_string(fixture("prop43.json")).unwrap();
    std::fs::write(&wrong, text.replace("[1,0,2,4,2]", "[1,0,2,3,3]")).unwrap();
    assert_eq!(hstarkit(&["hstar", wrong.to_str().unwrap()]).0, 4);
}

#[test]
fn empty_corpus_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout, _) = hstarkit(&["verify-suite", "--corpus", dir.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stdout.is_empty());
}

#[test]
fn corrupted_fixture_fails_the_oracle_match() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture("prop43.json")).unwrap();
    std::fs::write(dir.path().join("corrupt.json"), text.replace("[1,0,2,4,2]", "[1,0,2,3,3]")).unwrap();
    std::fs::copy(fixture("unit-triangle.json"), dir.path().join("ok.json")).unwrap();
    let (code, stdout, _) = hstarkit(&["verify-suite", "--corpus", dir.path().to_str().unwrap()]);
    assert_eq!(code, 4);
    let records = lines(&stdout);
    let failed: Vec<(&str, &str)> = records
        .iter()
        .filter(|r| r["status"] == "fail")
        .map(|r| (r["file"].as_str().unwrap(), r["invariant"].as_str().unwrap()))
        .collect();
    assert!(failed.contains(&("corrupt.json", "expected_hstar")), "{failed:?}");
    assert!(failed.contains(&("corrupt.json", "oracle_match")), "{failed:?}");
    assert!(failed.iter().all(|(f, _)| *f == "corrupt.json"));
}

#[test]
fn search_with_order_one_finds_only_the_unimodular_simplex() {
    let (code, stdout, _) = hstarkit(&["search", "--k", "3", "--max-order", "1"]);
    assert_eq!(code, 0);
    let records = lines(&stdout);
    let instances: Vec<&Value> = records.iter().filter(|r| r["record"] == "instance").collect();
    assert!(!instances.is_empty());
    assert!(instances.iter().all(|r| r["hstar"] == serde_json::json!([1])));
    assert_eq!(records.last().unwrap()["record"], "summary");
}

#[test]
fn weak_search_finds_the_three_level_pattern() {
    let (code, stdout, _) = hstarkit(&["search", "--k", "2", "--window", "weak", "--max-order", "12"]);
    assert_eq!(code, 0);
    let records = lines(&stdout);
    let hit =
        records.iter().find(|r| r["hstar"] == serde_json::json!([1, 0, 1, 0, 1])).expect("1 + t^2 + t^4 recorded");
    assert_eq!(hit["q"], 3);
}

#[test]
fn strong_search_realizes_every_truncation() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("search.jsonl");
    let (code, stdout, _) =
        hstarkit(&["search", "--k", "3", "--max-order", "20", "--max-dim", "5", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let records = lines(&std::fs::read_to_string(&out).unwrap());
    let instances: Vec<&Value> = records.iter().filter(|r| r["record"] == "instance").collect();
    assert!(instances.len() > 10);
    assert!(instances.iter().all(|r| r["face_realizes_truncation"] == true));
    let summary = records.last().unwrap();
    assert_eq!(summary["theorem_failures"], 0);
    assert_eq!(summary["recorded"], instances.len());
}

#[test]
fn search_truncation_is_reported() {
    let (code, stdout, _) = hstarkit(&["search", "--k", "3", "--max-order", "30", "--max-candidates", "5"]);
    assert_eq!(code, 0);
    let summary = lines(&stdout).pop().unwrap();
    assert_eq!(summary["truncated"], true);
    assert_eq!(summary["candidates"], 5);
}

#[test]
fn corpus_documents_round_trip() {
    for entry in std::fs::read_dir(corpus()).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let doc = hstarkit_cli::document::SimplexDocument::parse(&text).unwrap();
        let again = hstarkit_cli::document::SimplexDocument::parse(&doc.to_json_line()).unwrap();
        assert_eq!(doc, again, "{}", path.display());
    }
}

#[test]
fn big_coordinates_survive_as_strings() {
    let (code, v) = json(&["--json", "hstar", &fixture("translated-bigint.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["hstar"], serde_json::json!([1]));
    let text = v["input"]["vertices"].to_string();
    assert!(text.contains("\"100000000000000000000\""), "{text}");
}
