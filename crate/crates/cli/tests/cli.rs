use std::collections::BTreeSet;
use std::process::{Command, Output};

use dcell_core::topology::parse_edge_list;
use serde_json::Value;

fn dcell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dcell")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

fn edge_set(text: &str) -> BTreeSet<(u64, u64)> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let f: Vec<u64> = l.split_whitespace().map(|x| x.parse().unwrap()).collect();
            (f[0].min(f[1]), f[0].max(f[1]))
        })
        .collect()
}

fn sequence(v: &Value) -> Vec<u64> {
    v["sequence"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect()
}

#[test]
fn gen_six_cycle() {
    let text = stdout(&dcell(&["gen", "--n", "2", "--k", "1"]));
    let edges = edge_set(&text);
    assert_eq!(edges.len(), 6);
    for v in 0..6 {
        assert_eq!(edges.iter().filter(|(a, b)| *a == v || *b == v).count(), 2);
    }
    let t = parse_edge_list(&text).unwrap();
    assert_eq!((t.vertex_count(), t.edge_count()), (6, 6));
    let dot = stdout(&dcell(&["gen", "--n", "2", "--k", "1", "--format", "dot"]));
    assert_eq!(dot.matches("--").count(), 6);
}

#[test]
fn gen_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    stdout(&dcell(&["gen", "--n", "3", "--k", "1", "--format", "json", "--out", path.to_str().unwrap()]));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert!(v.to_string().contains("12"));
}

#[test]
fn hp_is_a_path_of_the_generated_graph() {
    let edges = edge_set(&stdout(&dcell(&["gen", "--n", "3", "--k", "2"])));
    let seq = sequence(&json(&dcell(&["hp", "--n", "3", "--k", "2", "--u", "0", "--v", "100"])));
    assert_eq!(seq.len(), 156);
    assert_eq!((seq[0], seq[155]), (0, 100));
    assert_eq!(seq.iter().collect::<BTreeSet<_>>().len(), 156);
    assert!(seq.windows(2).all(|w| edges.contains(&(w[0].min(w[1]), w[0].max(w[1])))));
}

#[test]
fn error_exit_codes() {
    let o = dcell(&["hp", "--n", "2", "--k", "1", "--u", "0", "--v", "1"]);
    assert_eq!(o.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "unsupported_parameters");
    assert!(err["message"].is_string());
    assert_eq!(dcell(&["gen", "--n", "2", "--k", "1", "--bogus"]).status.code(), Some(2));
    assert_eq!(dcell(&["gen", "--n", "5", "--k", "3"]).status.code(), Some(3));
    assert_eq!(dcell(&["--max-vertices", "100", "gen", "--n", "3", "--k", "2"]).status.code(), Some(3));
}

#[test]
fn certify_prints_pass_lines() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&dcell(&["oracle", "certify", "--cache-dir", dir.path().to_str().unwrap()]));
    let pass = out.lines().filter(|l| l.starts_with("PASS")).count();
    assert_eq!(pass, 4, "{out}");
    assert!(!out.contains("FAIL"));
}

#[test]
fn partial_next_order() {
    let out = stdout(&dcell(&["partial", "next", "--shape", "3,3,2", "--steps", "18"]));
    let got: Vec<&str> = out.lines().collect();
    assert_eq!(got.join(","), "000,100,010,001,011,020,021,110,101,111,120,121,200,210,201,211,220,221");
    assert_eq!(dcell(&["partial", "next", "--shape", "3,2", "--steps", "7"]).status.code().map(|c| c != 0), Some(true));
}

#[test]
fn partial_check_and_path() {
    let v = json(&dcell(&["partial", "check", "--n", "4", "--k", "2", "--d", "5", "--c", "5"]));
    assert_eq!(v["kc_connected"], true);
    assert_eq!(v["vertices"], 100);
    let p = json(&dcell(&["partial", "hp", "--n", "4", "--k", "2", "--d", "5", "--c", "5", "--u", "3", "--v", "77"]));
    let seq = sequence(&p);
    assert_eq!(seq.len(), 100);
    assert_eq!((seq[0], seq[99]), (3, 77));
}

#[test]
fn faulty_path_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let faults = dir.path().join("f.json");
    std::fs::write(&faults, r#"{"vertices": [], "edges": [[0, 1]]}"#).unwrap();
    let f = faults.to_str().unwrap();
    let edges = edge_set(&stdout(&dcell(&["gen", "--n", "4", "--k", "1"])));
    let seq = sequence(&json(&dcell(&["ft-hp", "--n", "4", "--k", "1", "--faults", f, "--u", "0", "--v", "19"])));
    assert_eq!(seq.len(), 20);
    for w in seq.windows(2) {
        let e = (w[0].min(w[1]), w[0].max(w[1]));
        assert!(edges.contains(&e) && e != (0, 1));
    }
    std::fs::write(&faults, r#"{"vertices": [7], "edges": [[0, 1]]}"#).unwrap();
    let cycle = sequence(&json(&dcell(&["ft-hc", "--n", "4", "--k", "1", "--faults", f])));
    assert_eq!(cycle.len(), 19);
    assert!(!cycle.contains(&7));
    let over = dcell(&["ft-hp", "--n", "4", "--k", "1", "--faults", f, "--u", "0", "--v", "19"]);
    assert_eq!(over.status.code(), Some(3));
}

#[test]
fn broadcast_json() {
    let v = json(&dcell(&["bcast", "--n", "2", "--k", "2", "--scheme", "flood"]));
    assert_eq!(v["per_trial"][0]["messages"], 85);
    let v = json(&dcell(&["bcast", "--n", "2", "--k", "2", "--scheme", "ham"]));
    assert_eq!(v["per_trial"][0]["messages"], 41);
    let a = stdout(&dcell(&["bcast", "--n", "3", "--k", "1", "--p", "0.1", "--trials", "50", "--seed", "9"]));
    let b = stdout(&dcell(&["bcast", "--n", "3", "--k", "1", "--p", "0.1", "--trials", "50", "--seed", "9"]));
    assert_eq!(a, b);
}

#[test]
fn bench_rows() {
    let empty = stdout(&dcell(&["bench"]));
    assert_eq!(empty.lines().count(), 1);
    let out = stdout(&dcell(&["bench", "--row", "2,2", "--row", "3,1"]));
    assert_eq!(out.lines().count(), 3);
}
