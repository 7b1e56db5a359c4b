use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn qsplit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsplit")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qsplit-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

#[test]
fn forms_list_and_info() {
    let list = json(&qsplit(&["forms", "list", "--json"]));
    assert_eq!(list.as_array().unwrap().len(), 8);
    let info = json(&qsplit(&["forms", "info", "su13"]));
    assert_eq!(info["quasi_split"], Value::Bool(false));
    let via_flag = json(&qsplit(&["--form", "sl3R", "forms", "info"]));
    assert_eq!(via_flag["name"], "sl3R");
}

#[test]
fn roots_orders() {
    let v = json(&qsplit(&["roots", "su22"]));
    assert_eq!(v["weyl_order"], 24);
    assert_eq!(v["restricted_weyl_order"], 8);
}

#[test]
fn kr_section_round_trip() {
    let v = json(&qsplit(&["kr-section", "sl2R", "--point", "-3"]));
    assert_eq!(v["round_trip"], Value::Bool(true));
    assert_eq!(v["section"][0][1], "3");
    let wrong = qsplit(&["kr-section", "sl3R", "--point", "1"]);
    assert_eq!(wrong.status.code(), Some(2));
    let not_qs = qsplit(&["kr-section", "su13", "--point", "1"]);
    assert_eq!(not_qs.status.code(), Some(2));
}

#[test]
fn centralizer_of_nilpotent() {
    let p = scratch("e.json", r#"[["0","1"],["0","0"]]"#);
    let v = json(&qsplit(&["centralizer", "sl2R", "--point", p.to_str().unwrap(), "--group", "Gtheta"]));
    assert_eq!(v["components_found"], 2);
    assert_eq!(v["is_abelian"], Value::Bool(true));
    let bad = scratch("bad.json", r#"[["1","0"],["0","-1"]]"#);
    assert_eq!(qsplit(&["centralizer", "sl2R", "--point", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn cameral_commands() {
    let b = scratch("b.json", r#"{"form":"sl2R","ell":1,"sections":[["0","-1","1"]]}"#);
    let b = b.to_str().unwrap();
    let built = json(&qsplit(&["cameral", "build", b]));
    assert_eq!(built["equations"][0], "-t1^2 = x^2 - x");
    assert_eq!(json(&qsplit(&["cameral", "fiber", b, "--at", "2"]))["count"], 2);
    assert_eq!(json(&qsplit(&["cameral", "fiber", b, "--at", "1"]))["count"], 1);
    let ram = json(&qsplit(&["cameral", "ramification", b]));
    assert_eq!(ram["degree_check"]["holds"], Value::Bool(true));
    let broken = scratch("broken.json", "{");
    assert_eq!(qsplit(&["cameral", "build", broken.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn sections_enumerate() {
    let v = json(&qsplit(&["sections", "enumerate", "sl2R", "--fiber", "3", "--values", "Ttheta"]));
    assert_eq!(v["count"], 4);
    assert!(v["sections"].as_array().unwrap().iter().all(|s| s["extension"]["valid"] == Value::Bool(true)));
    let ram = json(&qsplit(&["sections", "enumerate", "sl2R", "--fiber", "0"]));
    assert_eq!(ram["count"], 1);
    let full = json(&qsplit(&["sections", "enumerate", "sl2R", "--fiber", "t:0", "--values", "T"]));
    assert!(full["count"].as_u64().unwrap() >= 1);
}

#[test]
fn verify_exit_status_and_determinism() {
    let ok = qsplit(&["verify", "cartan", "sl2R"]);
    assert!(ok.status.success());
    assert!(String::from_utf8_lossy(&ok.stdout).contains("PASS cartan.quasi_split"));
    let a = qsplit(&["--json", "--seed", "7", "verify", "centralizers", "sl3R"]);
    let b = qsplit(&["--json", "--seed", "7", "verify", "centralizers", "sl3R", "--sequential"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 7);
    let fails = qsplit(&["verify", "roots", "su22"]);
    assert_eq!(fails.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&fails.stdout).contains("FAIL roots.stabilizer_inclusion"));
    assert_eq!(qsplit(&["verify", "nope", "sl2R"]).status.code(), Some(2));
    assert_eq!(qsplit(&["verify", "cartan", "sl7R"]).status.code(), Some(2));
    assert_eq!(qsplit(&["verify", "cartan"]).status.code(), Some(2));
    assert!(qsplit(&["verify", "exact-sequences", "sl3R"]).status.success());
}
