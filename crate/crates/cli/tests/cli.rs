use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn vk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vertexkit")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let o = vk(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("vertexkit-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(vk(&["--help"]).status.code(), Some(0));
    assert_eq!(vk(&["--version"]).status.code(), Some(0));
    assert_eq!(vk(&["mlde", "scan", "--help"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(vk(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(vk(&["mf", "j", "--json", "--csv"]).status.code(), Some(2));
    assert_eq!(vk(&["mlde", "solve", "--exponent", "one/two"]).status.code(), Some(2));
    assert_eq!(vk(&["theta", "genus1", "--lattice-file", "/nonexistent/l.json"]).status.code(), Some(2));
    assert_eq!(vk(&["pierce", "analyze", "--ring", "Q"]).status.code(), Some(2));
}

#[test]
fn computation_errors_exit_one() {
    let gram = scratch("indef.json");
    fs::write(&gram, r#"{"rank": 2, "gram": [[2, 3], [3, 2]]}"#).unwrap();
    assert_eq!(vk(&["theta", "genus1", "--lattice-file", gram.to_str().unwrap()]).status.code(), Some(1));
    // 1/60 is not an indicial root of the Yang-Lee equation
    assert_eq!(vk(&["mlde", "solve", "--exponents", "-1/60,11/60", "--exponent", "1/60"]).status.code(), Some(1));
}

#[test]
fn json_keys_are_sorted() {
    let out = stdout(&vk(&["pierce", "analyze", "--ring", "Z/12", "--json"]));
    let keys: Vec<&str> = out
        .lines()
        .filter(|l| l.starts_with("  \""))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(out.ends_with('\n'));
}

#[test]
fn pierce_z12() {
    let v = json(&["pierce", "analyze", "--ring", "Z/12", "--json"]);
    assert_eq!(v["local"], false);
    assert_eq!(v["vnr"], false);
    assert_eq!(v["exchange"], true);
    assert_eq!(v["idempotent_count"], 4);
}

#[test]
fn yang_lee_solution_json() {
    let v = json(&["mlde", "solve", "--order", "2", "--kappa", "-11/3600", "--exponent", "-1/60", "--terms", "8", "--json"]);
    let got: Vec<&str> = v["solution"]["coefficients"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert_eq!(got, ["1", "1", "1", "1", "2", "2", "3", "3", "4"]);
    assert_eq!(v["solution"]["resonance"], false);
}

#[test]
fn fgl_verify_reports_each_axiom() {
    let v = json(&["fgl", "verify", "--builtin", "multiplicative", "--order", "6", "--json"]);
    assert_eq!(v["verdict"], "pass");
    for axiom in ["identity", "associativity", "commutativity"] {
        assert_eq!(v["report"][axiom]["passed"], true, "{axiom}");
    }
}

#[test]
fn theta_genus2_csv() {
    let out = stdout(&vk(&["theta", "genus2", "--lattice", "A1", "--csv"]));
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "a,b,c,count");
    let rows: Vec<&str> = lines.collect();
    assert!(rows.contains(&"1,1,2,2"));
    assert!(rows.contains(&"1,1,-2,2"));
}

#[test]
fn scan_csv_columns() {
    let out = stdout(&vk(&["mlde", "scan", "--dmax", "12", "--terms", "10", "--csv"]));
    assert_eq!(out.lines().next().unwrap(), "c,h_list,first_20_coeffs_of_vacuum,verdict");
}

#[test]
fn config_overrides_flags() {
    let cfg = scratch("cfg.json");
    fs::write(&cfg, r#"{"terms": 2, "json": true}"#).unwrap();
    let v = json(&["mf", "j", "--terms", "9", "--config", cfg.to_str().unwrap()]);
    assert_eq!(v["expansion"]["coefficients"].as_array().unwrap().len(), 4);

    let bad = scratch("bad.json");
    fs::write(&bad, r#"{"colour": "blue"}"#).unwrap();
    assert_eq!(vk(&["mf", "j", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn manifest_replays() {
    let m = scratch("run.json");
    let mpath = m.to_str().unwrap();
    let o = vk(&["mf", "eisenstein", "--weight", "4", "--terms", "12", "--json", "--manifest", mpath]);
    assert!(o.status.success());
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(&m).unwrap()).unwrap();
    for key in ["command_line", "config", "tool_version", "elapsed_ms", "output_sha256"] {
        assert!(manifest.get(key).is_some(), "{key}");
    }
    let r = vk(&["replay", mpath]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));

    // a tampered digest is a failed replay
    let mut tampered = manifest.clone();
    tampered["output_sha256"] = serde_json::json!("00");
    let t = scratch("tampered.json");
    fs::write(&t, serde_json::to_string(&tampered).unwrap()).unwrap();
    assert_eq!(vk(&["replay", t.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn jobs_do_not_change_output() {
    let one = stdout(&vk(&["pierce", "sweep", "--max-n", "40", "--json", "--jobs", "1"]));
    let two = stdout(&vk(&["pierce", "sweep", "--max-n", "40", "--json", "--jobs", "2"]));
    assert_eq!(one, two);
}
