use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn ballcover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ballcover"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

fn run_to(dir: &TempDir, name: &str, args: &[&str]) -> Vec<u8> {
    let out = dir.path().join(name);
    let mut all = args.to_vec();
    all.extend(["--out", path_str(&out)]);
    let o = ballcover(&all);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::read(out).unwrap()
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let body = dir.path().join("body.json");
    std::fs::write(&body, r#"[{"degree": 4, "order": 0, "coefficient": 0.004}, {"degree": 6, "order": 3, "coefficient": -0.001}]"#).unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["ball-class", "--dim", "3"],
        vec!["witness", "--dim", "3", "--pair", "2", "--eps", "1/100"],
        vec!["zonal", "--lmax", "12"],
        vec!["cl-certify", "--lmax", "64"],
        vec!["construct", "--body", path_str(&body), "--grid", "6"],
    ];
    for (k, args) in cases.iter().enumerate() {
        let a = run_to(&dir, &format!("a{k}.json"), args);
        let b = run_to(&dir, &format!("b{k}.json"), args);
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn emitted_certificates_pass_verify() {
    let dir = TempDir::new().unwrap();
    for (name, args) in [
        ("lattice.json", vec!["anstar", "--dim", "3"]),
        ("class.json", vec!["ball-class", "--dim", "4"]),
        ("witness.json", vec!["witness", "--dim", "3", "--pair", "0"]),
        ("cl.json", vec!["cl-certify", "--lmax", "300"]),
    ] {
        run_to(&dir, name, &args);
        let p = dir.path().join(name);
        let o = ballcover(&["verify", "--certificate", path_str(&p)]);
        assert_eq!(code(&o), 0, "{name}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let csv = std::fs::read_to_string(dir.path().join("cl.csv")).unwrap();
    assert_eq!(csv.lines().count(), 302);
    assert!(csv.lines().any(|l| l == "2,0,0,zero"));
}

#[test]
fn tampered_certificate_fails_with_code_1() {
    let dir = TempDir::new().unwrap();
    let text = String::from_utf8(run_to(&dir, "w.json", &["witness", "--dim", "3", "--pair", "1"])).unwrap();
    let bad = text.replacen("\"s\": \"1/128\"", "\"s\": \"1/64\"", 1);
    assert_ne!(bad, text);
    let p = dir.path().join("bad.json");
    std::fs::write(&p, bad).unwrap();
    let o = ballcover(&["verify", "--certificate", path_str(&p)]);
    assert_eq!(code(&o), 1, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn ball_class_headlines() {
    let o = ballcover(&["ball-class", "--dim", "3"]);
    assert_eq!(code(&o), 0);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("CriticallySemiEutactic") && err.contains("inextensible"));
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(json["kind"], "ball-class");
    assert_eq!(json["classification"], "CriticallySemiEutactic");

    let o = ballcover(&["ball-class", "--dim", "4"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("ball extensible"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&ballcover(&["ball-class", "--dim", "7"])), 2);
    assert_eq!(code(&ballcover(&["ball-class"])), 2);
    assert_eq!(code(&ballcover(&["construct", "--body", "/nonexistent.json"])), 2);
    assert_eq!(code(&ballcover(&["witness", "--dim", "3", "--pair", "0", "--eps", "x/y"])), 2);
    assert_eq!(code(&ballcover(&["witness", "--dim", "4", "--pair", "0"])), 2);
}

#[test]
fn aspherical_body_is_rejected() {
    let dir = TempDir::new().unwrap();
    let body = dir.path().join("big.json");
    std::fs::write(&body, r#"[{"degree": 4, "order": 0, "coefficient": 0.1666}]"#).unwrap();
    let o = ballcover(&["construct", "--body", path_str(&body), "--grid", "4"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("aspherical"));
    std::fs::write(&body, "{not json").unwrap();
    assert_eq!(code(&ballcover(&["construct", "--body", path_str(&body)])), 2);
}

#[test]
fn ball_body_matches_ball_density() {
    let dir = TempDir::new().unwrap();
    let body = dir.path().join("ball.json");
    std::fs::write(&body, "[]").unwrap();
    let bytes = run_to(&dir, "c.json", &["construct", "--body", path_str(&body), "--grid", "5"]);
    let json: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(json["delta_k_bound"], "0.000000000000e0");
    assert_eq!(json["constructed_density"], json["ball_density"]);
    assert_eq!(json["below_ball_density"], false);
}

#[test]
fn config_file_supplies_defaults() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"dim": 3, "pair": 2, "eps": "1/50"}"#).unwrap();
    let bytes = run_to(&dir, "w.json", &["witness", "--config", path_str(&cfg)]);
    let json: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(json["eps"], "1/50");
    assert_eq!(json["pair"], 2);
    let bytes = run_to(&dir, "w2.json", &["witness", "--config", path_str(&cfg), "--pair", "0"]);
    let json: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(json["pair"], 0);
}
