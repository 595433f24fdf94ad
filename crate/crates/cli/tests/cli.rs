use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn pnn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pnn")).args(args).output().expect("spawn pnn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_system(dir: &Path, name: &str, json: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, json).unwrap();
    p.to_str().unwrap().to_string()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_slice(&fs::read(p).unwrap()).unwrap()
}

#[test]
fn expand_examples() {
    let dir = tempfile::tempdir().unwrap();
    let n3 = write_system(dir.path(), "N3.json", r#"{"kind":"integer","N":3}"#);
    let silver = write_system(dir.path(), "silver.json", r#"{"kind":"algebraic","minpoly":[-1,-2,1],"interval":[2.41,2.42]}"#);
    let o = pnn(&["expand", "--system", &n3, "--x", "1/2", "--n", "10"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("1111111111"));
    assert!(lines.next().unwrap().starts_with("residual "));
    assert_eq!(stdout(&pnn(&["expand", "--x", "0", "--n", "5"])).lines().next(), Some("00000"));
    assert_eq!(stdout(&pnn(&["expand", "--system", &silver, "--x", "1", "--n", "4"])).lines().next(), Some("2100"));
}

#[test]
fn small_verbs() {
    let dir = tempfile::tempdir().unwrap();
    let silver = write_system(dir.path(), "silver.json", r#"{"kind":"algebraic","minpoly":[-1,-2,1],"interval":[2.41,2.42]}"#);
    assert_eq!(stdout(&pnn(&["admissible", "--system", &silver, "--word", "21"])), "false\n");
    assert_eq!(stdout(&pnn(&["admissible", "--system", &silver, "--word", "20"])), "true\n");

    let o = pnn(&["language", "--system", &silver, "--n", "2", "--list"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], "7");
    assert_eq!(v["words"].as_array().unwrap().len(), 7);
    assert_eq!(v["config_hash"].as_str().unwrap().len(), 64);

    let v: Value = serde_json::from_slice(&pnn(&["measure", "--length", "1"]).stdout).unwrap();
    let mu: Vec<&str> = v["cylinders"].as_array().unwrap().iter().map(|r| r["mu_exact"].as_str().unwrap()).collect();
    assert_eq!(mu, ["2/3", "0", "1/3"]);

    let v: Value = serde_json::from_slice(&pnn(&["glue", "--system", &silver, "--a", "2", "--b", "2"]).stdout).unwrap();
    assert_eq!(v["glued"], "202");
    let v: Value = serde_json::from_slice(&pnn(&["gamma", "--n", "3", "--list"]).stdout).unwrap();
    assert_eq!(v["size"], 25);
}

#[test]
fn construct_then_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c");
    let a = dir.path().join("a");
    let o = pnn(&["construct", "--p", "1", "--stages", "4", "--out", c.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let trace = read_json(&c.join("trace.json"));
    let ann = read_json(&c.join("annotations.json"));
    assert_eq!(trace["config_hash"], ann["config_hash"]);
    let stages = trace["stages"].as_array().unwrap();
    assert_eq!(stages.len(), 4);
    for key in ["n_j", "rho", "eta", "lengths", "records", "bound"] {
        assert!(stages[0].get(key).is_some(), "missing {key}");
    }
    let len = fs::read_to_string(c.join("prefix.txt")).unwrap().trim_end().len();
    assert_eq!(ann["length"], len);

    let o = pnn(&[
        "analyze",
        "--input",
        c.join("prefix.txt").to_str().unwrap(),
        "--annotations",
        c.join("annotations.json").to_str().unwrap(),
        "--out",
        a.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let r = read_json(&a.join("report.json"));
    assert_eq!(r["digits"][0]["verdict"], "divergent");
    assert_eq!(r["digits"][0]["estimates"].as_array().unwrap().len(), 2);
    assert!(r.get("dimension").is_some());
    assert_eq!(r["connectors"]["violations"], 0);
    let csv = fs::read_to_string(a.join("trace_0.csv")).unwrap();
    assert!(csv.starts_with("m,frequency,config_hash\r\n"));
}

#[test]
fn raw_files_degrade() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("twos.txt");
    fs::write(&input, "2".repeat(1000)).unwrap();
    let out = dir.path().join("a");
    assert!(pnn(&["analyze", "--input", input.to_str().unwrap(), "--out", out.to_str().unwrap()]).status.success());
    let r = read_json(&out.join("report.json"));
    assert_eq!(r["digits"][2]["verdict"], "convergent");
    assert_eq!(r["digits"][2]["estimates"][0], 1.0);
    assert!(r.get("dimension").is_none());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "01x2").unwrap();
    let out = dir.path().join("o");
    assert_eq!(pnn(&["analyze", "--input", bad.to_str().unwrap(), "--out", out.to_str().unwrap()]).status.code(), Some(4));
    assert_eq!(pnn(&["expand", "--x", "nope", "--n", "3"]).status.code(), Some(4));
    assert_eq!(pnn(&["construct", "--unknown"]).status.code(), Some(4));
    let o = pnn(&["construct", "--stages", "3", "--growth", "1e9", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn dimension_ledger_export() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d");
    let o = pnn(&["dimension", "--p", "1", "--stages", "2", "--covers", "5", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = read_json(&out.join("ledger.json"));
    assert_eq!(v["covers"]["violations"], 0);
    assert_eq!(v["monotone"], true);
    let first = &v["ledger"]["entries"][1];
    for key in ["n", "j", "i", "log_y", "log_e"] {
        assert!(first.get(key).is_some());
    }
}

#[test]
fn thread_cap_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str, sub: &str| {
        let out = dir.path().join(sub);
        let o = Command::new(env!("CARGO_BIN_EXE_pnn"))
            .env("PNN_THREADS", threads)
            .args(["construct", "--stages", "3", "--out", out.to_str().unwrap()])
            .output()
            .unwrap();
        assert!(o.status.success());
        fs::read(out.join("trace.json")).unwrap()
    };
    assert_eq!(run("1", "one"), run("4", "four"));
}
