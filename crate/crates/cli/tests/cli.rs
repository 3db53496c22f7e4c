use std::path::PathBuf;
use std::process::{Command, Output};

fn mqknot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mqknot")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn data(file: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(file).display().to_string()
}

const TREFOIL: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";

#[test]
fn alexander_of_the_trefoil() {
    let o = mqknot(&["alexander", "--pd", TREFOIL]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "t^2 - t + 1");
    let b = mqknot(&["alexander", "--braid", "braid(2; 1 1 1)"]);
    assert_eq!(stdout(&b), stdout(&o));
}

#[test]
fn lemma_check_passes() {
    let o = mqknot(&["lemma-check", "--seed", "7", "--iters", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("lemma-check: 1000/1000 passed"), "{text}");
    let again = mqknot(&["lemma-check", "--seed", "7", "--iters", "1000", "--sequential"]);
    assert_eq!(stdout(&again), text);
}

#[test]
fn exit_codes() {
    assert_eq!(mqknot(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(mqknot(&["alexander", "--pd", "X(1,2,3)"]).status.code(), Some(2));
    assert_eq!(mqknot(&["alexander"]).status.code(), Some(2));
    assert_eq!(mqknot(&["kpq", "-p", "3"]).status.code(), Some(2));
    assert_eq!(mqknot(&["--help"]).status.code(), Some(0));
}

#[test]
fn parse_and_nakanishi() {
    let o = mqknot(&["parse", "--pd", TREFOIL]);
    let text = stdout(&o);
    assert!(text.contains("crossings: 3") && text.contains("determinant: 3"), "{text}");
    let n = mqknot(&["nakanishi", "--braid", "braid(2; 1 1 1)"]);
    assert!(stdout(&n).contains("m: 1"), "{}", stdout(&n));
}

#[test]
fn mq_with_metadata() {
    let o = mqknot(&["mq", "--pd", TREFOIL, "--fibered", "true", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["a_lower"], 1);
    assert_eq!(v[0]["a_upper"], 1);
    let d = mqknot(&["mq", "--dataset", &data("special.jsonl"), "--name", "KT", "--format", "csv"]);
    assert!(stdout(&d).lines().nth(1).unwrap().starts_with("KT,1,0,0,1,1,false"), "{}", stdout(&d));
}

#[test]
fn kpq_and_derived_depth() {
    let o = mqknot(&["kpq", "-p", "3", "-q", "-9"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("m = 2, a = 2"));
    let d = mqknot(&["derived-depth", "--word", "[[a,b],[a,c]]"]);
    assert_eq!(stdout(&d).trim(), "depth >= 2");
}

#[test]
fn emit_to_file() {
    let dir = std::env::temp_dir().join(format!("mqknot-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("special.csv");
    let o = mqknot(&["emit", "--dataset", &data("special.jsonl"), "--format", "csv", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 3);
    std::fs::remove_dir_all(&dir).unwrap();
}
