use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tschirnhaus"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tschirnhaus-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(name: &str, body: &str) -> PathBuf {
    let p = scratch(name);
    fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn bound_queries() {
    let o = run(&["bound", "--profile", "3:1", "--mode", "line"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "5");
    let o = run(&["bound", "--profile", "2:2,1:3", "--mode", "line"]);
    assert_eq!(stdout(&o).trim(), "9");
    let o = run(&["bound", "--profile", "4:1,3:1,2:1,1:1", "--mode", "point"]);
    assert_eq!(stdout(&o).trim(), "10");
    let o = run(&["bound", "--profile", "3:x"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn transform_accepts_both_formats() {
    let p = write("p4.json", "[1, 2, 3, 4]");
    let t = write("t4.json", r#"{"b": [["0", "0"], ["1", "0"], ["0", "0"], ["0", "0"]]}"#);
    let o = run(&["transform", p.to_str().unwrap(), t.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let q: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(q["n"], 4);
    let a1: f64 = q["a"][0][0].as_str().unwrap().parse().unwrap();
    assert_eq!(a1, 1.0);

    let canonical = write("p4c.json", &stdout(&o));
    let t2 = write("t4b.json", "[0, 0, 0, 1]");
    let o = run(&["transform", canonical.to_str().unwrap(), t2.to_str().unwrap()]);
    assert!(o.status.success());

    let bad = write("t3.json", "[0, 1, 0]");
    let o = run(&["transform", p.to_str().unwrap(), bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn reduce_then_verify() {
    let p = write("q5.json", "[0, 0, 0, -1, -1]");
    let cert = scratch("cert.json");
    let o = run(&["reduce", "--k", "3", "--seed", "7", p.to_str().unwrap(), "-o", cert.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&cert).unwrap();
    assert!(text.contains("\"tf-cert/1\""));

    let o = run(&["verify", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("FAIL"));

    let forged = write("forged.json", &text.replace("\"max_degree\": 3", "\"max_degree\": 21"));
    let o = run(&["verify", forged.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("[FAIL] solve-degree"));
}

#[test]
fn exit_codes() {
    let p = write("q5b.json", "[0, 0, 0, -1, -1]");
    let o = run(&["reduce", "--k", "4", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["reduce", "--k", "5", "--variant", "segre", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["reduce", "--k", "3", "--variant", "chain", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["verify", scratch("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn demo_quintic_roots() {
    let p = write("roots.json", "[-15, 85, -225, 274, -120]");
    let o = run(&["demo-quintic", p.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let mut re: Vec<f64> = v["roots"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r[0].as_str().unwrap().parse().unwrap())
        .collect();
    re.sort_by(f64::total_cmp);
    for (i, x) in re.iter().enumerate() {
        assert!((x - (i + 1) as f64).abs() < 1e-10, "{re:?}");
    }
    assert_eq!(v["max_degree"], 3);
}
