use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn saidi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_saidi")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = saidi(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    saidi(args).status.code().unwrap()
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn ring3() -> String {
    data("ring3.json").to_string_lossy().into_owned()
}

#[test]
fn analyze_ring() {
    let out = ok(&["analyze", &ring3(), "--p", "0.1"]);
    assert_eq!(out, "saidi 0.0903\nnormalized 0.0301\n");
    let out = ok(&["analyze", &ring3(), "--p", "0"]);
    assert_eq!(out, "saidi 0\nnormalized 0\n");
    let v: serde_json::Value = serde_json::from_str(&ok(&["analyze", &ring3(), "--json", "--mode", "k-order", "--k", "2"])).unwrap();
    assert_eq!(v["mode"], "k-order");
    assert_eq!(v["k"], 2);
}

#[test]
fn bad_input_exits_2() {
    assert_eq!(code(&["curve", &ring3(), "--p-min", "0.2", "--p-max", "0.1"]), 2);
    assert_eq!(code(&["analyze", &ring3(), "--p", "1.2"]), 2);
    assert_eq!(code(&["analyze", "/nonexistent.json"]), 2);
    assert_eq!(code(&["generate", "hypercube"]), 2);
    assert_eq!(code(&["risks", &ring3(), "--order", "4"]), 2);

    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(data("ring3.json")).unwrap();
    let no_source = write(&dir, "nosrc.json", &text.replace("\"is_source\": true", "\"is_source\": false"));
    let o = saidi(&["analyze", &no_source]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("is_source"));
    let bad_p = write(&dir, "badp.json", &text.replacen("\"p_fail\": 0.1", "\"p_fail\": 1.2", 1));
    let o = saidi(&["analyze", &bad_p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("edges[0].p_fail"));
}

#[test]
fn size_guard_exits_3() {
    // complete graph: every node on the frontier at once
    let n = 18;
    let nodes: Vec<_> = (0..n)
        .map(|i| serde_json::json!({"id": format!("v{i}"), "weight": 1, "is_source": i == 0}))
        .collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push(serde_json::json!({"id": format!("e{i}_{j}"), "u": format!("v{i}"), "v": format!("v{j}"), "p_fail": 0.1}));
        }
    }
    let doc = serde_json::json!({"schema_version": 1, "nodes": nodes, "edges": edges});
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "k18.json", &doc.to_string());
    let o = saidi(&["analyze", &f]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    // k-order stays cheap
    assert!(saidi(&["analyze", &f, "--mode", "k-order", "--k", "2"]).status.success());
}

#[test]
fn risks_formats() {
    let petersen = data("petersen55.json").to_string_lossy().into_owned();
    let csv = ok(&["risks", &petersen, "--order", "1", "--format", "csv"]);
    assert_eq!(csv.lines().count(), 1, "a 2-connected net has no single-edge cuts");

    let csv = ok(&["risks", &ring3(), "--top", "3", "--format", "csv"]);
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.len() == header.len()));
    let risk: Vec<f64> = rows.iter().map(|r| r[6].parse().unwrap()).collect();
    assert!(risk.windows(2).all(|w| w[0] >= w[1]));

    let v: serde_json::Value = serde_json::from_str(&ok(&["risks", &ring3(), "--format", "json"])).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 5);
    assert!(ok(&["risks", &ring3()]).starts_with("rank"));
}

#[test]
fn curve_csv() {
    let out = ok(&["curve", &ring3(), "--p-min", "0", "--p-max", "0.2", "--points", "3"]);
    assert_eq!(out, "p,saidi,normalized\n0,0,0\n0.1,0.0903,0.0301\n0.2,0.3248,0.108266666667\n");
    let tree = data("tree7.json").to_string_lossy().into_owned();
    let out = ok(&["curve", &ring3(), &tree, "--points", "2"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "p,saidi,normalized,network");
    assert_eq!(lines.len(), 5);
    assert!(lines[4].ends_with(",tree7"));
}

#[test]
fn generate_and_audit() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("p.json").to_string_lossy().into_owned();
    ok(&["generate", "cubic", "--cubic", "petersen", "--n", "40", "--out", &f]);
    assert!(ok(&["audit", &f]).ends_with("passed\n"));
    let v: serde_json::Value = serde_json::from_str(&ok(&["audit", &f, "--json"])).unwrap();
    assert_eq!(v["passed"], true);

    let out = ok(&["audit", &ring3()]);
    assert!(out.contains("FAIL 3-regular structure graph"));
    assert!(out.ends_with("failed\n"));
    assert_eq!(ok(&["generate", "ring", "--n", "3", "--p", "0.1", "--name", "ring of 3"]), std::fs::read_to_string(data("ring3.json")).unwrap());
}

#[test]
fn whatif_and_suggest() {
    let out = ok(&["whatif", &ring3(), "--edge", "s,v1,0.1,1", "--p", "0.1"]);
    let delta: f64 = out.lines().find_map(|l| l.strip_prefix("delta ")).unwrap().parse().unwrap();
    assert!(delta > 0.0);
    let v: serde_json::Value = serde_json::from_str(&ok(&["whatif", &ring3(), "--edge", "v1,v2,0.1,1", "--json"])).unwrap();
    assert_eq!(v["kind"], "inter_chain");
    assert_eq!(code(&["whatif", &ring3(), "--edge", "v1,v2"]), 2);
    assert_eq!(code(&["whatif", &ring3(), "--edge", "v1,zz,0.1,1"]), 2);

    let dir = tempfile::tempdir().unwrap();
    let none = write(&dir, "none.json", "[]");
    let v: serde_json::Value = serde_json::from_str(&ok(&["suggest", &ring3(), "--candidates", &none, "--budget", "5", "--json"])).unwrap();
    assert!(v["steps"].as_array().unwrap().is_empty());
    assert_eq!(v["saidi_before"], v["saidi_after"]);

    let cands = write(
        &dir,
        "c.json",
        r#"[{"id":"a","u":"s","v":"v1","p_fail":0.1,"cost":1},
            {"id":"b","u":"v1","v":"v2","p_fail":0.1,"cost":5},
            {"id":"c","u":"s","v":"v2","p_fail":0.1,"cost":2}]"#,
    );
    let all: serde_json::Value = serde_json::from_str(&ok(&["suggest", &ring3(), "--candidates", &cands, "--budget", "inf", "--json"])).unwrap();
    assert_eq!(all["steps"].as_array().unwrap().len(), 3);
    let some: serde_json::Value = serde_json::from_str(&ok(&["suggest", &ring3(), "--candidates", &cands, "--budget", "3", "--json"])).unwrap();
    assert!(some["spent"].as_f64().unwrap() <= 3.0);
}

#[test]
fn output_is_deterministic() {
    let feeder = data("feeder33.json").to_string_lossy().into_owned();
    let cands = data("feeder33_candidates.json").to_string_lossy().into_owned();
    for args in [
        vec!["risks", feeder.as_str(), "--top", "5", "--format", "json"],
        vec!["suggest", feeder.as_str(), "--candidates", cands.as_str(), "--budget", "3", "--json"],
        vec!["analyze", "../../data/grid30x7_third.json"],
    ] {
        assert_eq!(ok(&args), ok(&args));
    }
}
