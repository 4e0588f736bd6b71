use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_spillover"));
    c.env_remove("PERSUASION_CAP");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn diagnostic(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is one JSON object")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn repro_figure1_csv() {
    let text = stdout(&run(&["repro", "figure1"]));
    assert_eq!(
        text,
        "label,edge_count,value_lower,value_upper,certified,source\n\
         empty,0,14/15,14/15,true,construction\n\
         pairs,4,8/9,14/15,false,oracle\n\
         circle,9,14/15,14/15,true,construction\n\
         complete,36,2/3,2/3,true,public\n"
    );
    assert_eq!(text, stdout(&run(&["repro", "figure1"])), "output is deterministic");
}

#[test]
fn repro_example2_reaches_one() {
    let v: Value = serde_json::from_str(&stdout(&run(&["repro", "example2"]))).unwrap();
    assert_eq!(v["extended_value"], "1");
    assert_eq!(v["bridge"], serde_json::json!([4, 5]));
}

#[test]
fn eval_example2_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let e = dir.path().join("e.json");
    stdout(&run(&["construct", "example2", "--out", s(&e)]));
    let g = write(dir.path(), "g.json", r#"{"n":8,"edges":[[0,3],[1,3],[2,3],[3,4],[5,6],[5,7],[6,7],[4,5]]}"#);
    let args = ["eval", "--network", s(&g), "--experiment", s(&e), "--k", "4", "--prior", "1/3"];
    let rejected = run(&args);
    assert_eq!(rejected.status.code(), Some(2));
    assert_eq!(diagnostic(&rejected)["error"], "BoundaryPriorRejected");
    let mut accepted = args.to_vec();
    accepted.extend(["--allow-boundary", "--value"]);
    assert_eq!(stdout(&run(&accepted)), "1\n");
}

#[test]
fn dominate_lists_one_based_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let c6 = dir.path().join("c6.json");
    stdout(&run(&["family", "make", "circle", "--n", "6", "-o", s(&c6)]));
    assert_eq!(stdout(&run(&["dominate", "--network", s(&c6)])), "count: 0\n");
    let star = write(dir.path(), "star.json", r#"{"n":3,"edges":[[0,1],[0,2]]}"#);
    assert_eq!(stdout(&run(&["dominate", "--network", s(&star)])), "1>2\n1>3\ncount: 2\n");
}

#[test]
fn family_make_and_check() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    stdout(&run(&["family", "make", "clusters", "--q", "3", "--p", "3", "-o", s(&g)]));
    let v: Value = serde_json::from_str(&stdout(&run(&["family", "check", "--network", s(&g)]))).unwrap();
    assert_eq!(v["family"]["kind"], "cluster_network");
    assert_eq!(v["declared_matches"], true);
    let lying = write(dir.path(), "l.json", r#"{"n":3,"edges":[[0,1]],"family":{"kind":"circle"}}"#);
    let v: Value = serde_json::from_str(&stdout(&run(&["family", "check", "--network", s(&lying)]))).unwrap();
    assert_eq!(v["declared_matches"], false);
    let bad = run(&["family", "make", "circle", "--n", "2"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn construct_replicate_eval() {
    let dir = tempfile::tempdir().unwrap();
    let c9 = dir.path().join("c9.json");
    let e = dir.path().join("e.json");
    let r = dir.path().join("r.json");
    stdout(&run(&["family", "make", "circle", "--n", "9", "-o", s(&c9)]));
    stdout(&run(&["construct", "circle-block", "--network", s(&c9), "--k", "5", "--prior", "1/3", "-o", s(&e)]));
    stdout(&run(&["transform", "replicate", "--network", s(&c9), "--experiment", s(&e), "-o", s(&r)]));
    let empty = write(dir.path(), "empty.json", r#"{"n":9,"edges":[]}"#);
    let value = |net: &Path, exp: &Path| {
        stdout(&run(&["eval", "--network", s(net), "--experiment", s(exp), "--k", "5", "--prior", "1/3", "--value"]))
    };
    assert_eq!(value(&c9, &e), "14/15\n");
    assert_eq!(value(&empty, &r), "14/15\n");
}

#[test]
fn extend_then_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let pairs = dir.path().join("p.json");
    stdout(&run(&["family", "make", "pairs", "--n", "9", "--pairs", "0-1,2-3,4-5,6-8", "-o", s(&pairs)]));
    let plan: Value = serde_json::from_str(&stdout(&run(&[
        "extend",
        "pairs-to-circle",
        "--network",
        s(&pairs),
        "--k",
        "5",
        "--prior",
        "1/3",
    ])))
    .unwrap();
    assert_eq!(plan["added_edges"].as_array().unwrap().len(), 5);
    assert_eq!(plan["certificate"]["count"], 0);
    let circle = write(dir.path(), "c.json", &plan["extended"].to_string());
    let csv = stdout(&run(&["sweep", "--chain", s(&pairs), s(&circle), "--k", "5", "--prior", "1/3"]));
    assert_eq!(csv.lines().nth(2), Some("circle,9,14/15,14/15,true,construction"));
    let backwards = run(&["sweep", "--chain", s(&circle), s(&pairs), "--k", "5", "--prior", "1/3"]);
    assert_eq!(diagnostic(&backwards)["error"], "NotAnExtensionChain");
}

#[test]
fn oracle_modes_and_caps() {
    let dir = tempfile::tempdir().unwrap();
    let star = write(dir.path(), "star.json", r#"{"n":3,"edges":[[0,1],[0,2]]}"#);
    let base = ["oracle", "--network", s(&star), "--k", "2", "--prior", "1/4"];
    let mut exhaustive = base.to_vec();
    exhaustive.extend(["--mode", "exhaustive"]);
    let v: Value = serde_json::from_str(&stdout(&run(&exhaustive))).unwrap();
    assert_eq!(v["mode"], "exhaustive");
    assert!(v["witness"]["rows"].is_array());

    let mut capped = base.to_vec();
    capped.extend(["--cap", "1"]);
    let out = run(&capped);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(diagnostic(&out)["error"], "TooLarge");
    let out = bin().args(base).env("PERSUASION_CAP", "1").output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    let out = run(&["dominate", "--network", "/definitely/missing.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(diagnostic(&out)["error"], "Io");
}

#[test]
fn selftest_passes() {
    let v: Value = serde_json::from_str(&stdout(&run(&["selftest", "--seed", "7", "--cases", "60"]))).unwrap();
    for c in v["checks"].as_array().unwrap() {
        assert_eq!(c["failed"], 0, "{c}");
    }
}
