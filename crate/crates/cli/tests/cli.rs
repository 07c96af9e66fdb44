use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn toughham(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_toughham"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).expect("JSON on stdout");
    assert_eq!(v["schema_version"], 1);
    v
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("toughham-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn analyze_reads_graph6_from_stdin() {
    let v = json(&toughham(&["analyze", "-"], Some("Bw\n")));
    assert_eq!(v["n"], 3);
    assert_eq!(v["m"], 3);
    assert_eq!(v["toughness"]["value"], "INF");
    assert_eq!(v["freeness"][0]["free"], true);
}

#[test]
fn analyze_reads_edge_lists() {
    // C_5 as an edge list.
    let v = json(&toughham(&["analyze", "-"], Some("5 5\n0 1\n1 2\n2 3\n3 4\n4 0\n")));
    assert_eq!(v["graph6"], "Dhc");
    assert_eq!(v["toughness"]["value"], "1");
    assert_eq!(v["kappa"], 2);
    assert_eq!(v["alpha"], 2);
}

#[test]
fn malformed_input_exits_with_two() {
    let out = toughham(&["analyze", "-"], Some("3 2\n0 1\n"));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
    assert!(out.stdout.is_empty());
}

#[test]
fn oracle_on_petersen_says_no() {
    let v = json(&toughham(&["oracle", "-"], Some("IheA@GUAo\n")));
    assert_eq!(v["kind"], "cycle");
    assert_eq!(v["answer"]["verdict"], "NO");
    let v = json(&toughham(&["oracle", "-", "--ends", "0", "1"], Some("IheA@GUAo\n")));
    assert_eq!(v["kind"], "path");
}

#[test]
fn generated_multipartite_graph_gets_a_cycle() {
    let file = scratch("k2x32.g6");
    let f = file.to_str().unwrap();
    let parts = vec!["2"; 32].join(",");
    let v = json(&toughham(&["gen", "complete_multipartite", &parts, "--out", f], None));
    assert_eq!(v["toughness_bound"], "31");
    let v = json(&toughham(&["cycle", f, "--certificate", "complete_multipartite"], None));
    assert_eq!(v["terminal"], "DEGREE_SUM_SHORTCUT");
    assert_eq!(v["trace"]["validated"], true);
    assert_eq!(v["trace"]["result"].as_array().map(Vec::len), Some(64));
}

#[test]
fn planted_components_reach_the_assembly() {
    let file = scratch("components.txt");
    let f = file.to_str().unwrap();
    json(&toughham(&["gen", "components", "75", "8,9,10", "2", "--out", f], None));
    assert!(std::fs::read_to_string(&file).unwrap().starts_with("104 "));
    let v = json(&toughham(&["cycle", f, "--certificate", "clique_join"], None));
    assert_eq!(v["terminal"], "LEMMA_2_7_ASSEMBLY");
}

#[test]
fn unmet_hypotheses_exit_with_two() {
    let out = toughham(&["cycle", "-", "--t", "15"], Some("Dhc\n"));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("toughness"));
}

#[test]
fn lemma_suite_reports_violations_without_failing() {
    let v = json(&toughham(&["lemma", "pathcover", "--n-max", "6"], None));
    assert_eq!(v["lemma_id"], "pathcover");
    assert_eq!(v["violations"][0]["graph6"], "E@UW");
    let v = json(&toughham(&["lemma", "2.2", "--budget", "20", "--seed", "9"], None));
    assert_eq!(v["instances_sourced"], 20);
    assert_eq!(v["seed"], 9);
}

#[test]
fn unknown_lemma_exits_with_two() {
    let out = toughham(&["lemma", "9.9"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("9.9"));
}

#[test]
fn search_is_reproducible() {
    let args = ["search", "--n-max", "8", "--budget", "100", "--seed", "4"];
    let a = json(&toughham(&args, None));
    let b = json(&toughham(&args, None));
    assert_eq!(a, b);
    assert_eq!(a["counterexamples"].as_array().map(Vec::len), Some(0));
}
