use std::path::Path;
use std::process::{Command, Output};

fn mvfj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mvfj"))
        .args(args)
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

const MINIMAL: &str = r#"{
  "name": "minimal",
  "graph": { "generate": { "kind": "erdos-renyi", "n": 1 } },
  "sim": { "horizon": 1.0, "eps": 0.25, "alpha": { "constant": 0.0 }, "x0": { "values": [0.4] } },
  "policy": { "kind": "zero" }
}"#;

#[test]
fn minimal_run_succeeds_with_summary() {
    let dir = tempfile::tempdir().unwrap();
    let sc = write(dir.path(), "s.json", MINIMAL);
    let out = dir.path().join("out");
    let res = mvfj(&["--scenario", &sc, "--output-dir", out.to_str().unwrap()]);
    assert_eq!(
        res.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let stdout = String::from_utf8(res.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 1);
    assert!(stdout.starts_with("trajectories.csv:"));
    let csv = std::fs::read_to_string(out.join("trajectories.csv")).unwrap();
    assert_eq!(csv.lines().count(), 6);
}

#[test]
fn quiet_suppresses_summary() {
    let dir = tempfile::tempdir().unwrap();
    let sc = write(dir.path(), "s.json", MINIMAL);
    let out = dir.path().join("out");
    let res = mvfj(&[
        "--scenario",
        &sc,
        "--output-dir",
        out.to_str().unwrap(),
        "--quiet",
    ]);
    assert_eq!(res.status.code(), Some(0));
    assert!(res.stdout.is_empty());
}

#[test]
fn print_config_fills_defaults_and_applies_seed() {
    let dir = tempfile::tempdir().unwrap();
    let sc = write(dir.path(), "s.json", MINIMAL);
    let res = mvfj(&["--scenario", &sc, "--print-config", "--seed", "99"]);
    assert_eq!(res.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(v["sim"]["seed"], 99);
    assert_eq!(v["sim"]["clamp"], false);
    assert_eq!(v["outputs"]["trajectories"], true);
    assert!(!dir.path().join("out").exists());
}

#[test]
fn validation_failure_exits_2_before_simulating() {
    let dir = tempfile::tempdir().unwrap();
    let body = MINIMAL.replace(
        r#""policy": { "kind": "zero" }"#,
        "\"policy\": { \"kind\": \"zero\" },\n  \"outputs\": { \"kde_times\": [3.0] }",
    );
    let sc = write(dir.path(), "s.json", &body);
    let out = dir.path().join("out");
    let res = mvfj(&["--scenario", &sc, "--output-dir", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
    let err = String::from_utf8(res.stderr).unwrap();
    assert!(err.contains("line 6"), "{err}");
    assert!(!out.exists());
}

#[test]
fn unknown_fields_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let body = MINIMAL.replace(
        r#""name": "minimal","#,
        r#""name": "minimal", "colour": 1,"#,
    );
    let sc = write(dir.path(), "s.json", &body);
    let res = mvfj(&["--scenario", &sc]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("line 2"));
}

#[test]
fn complex_roots_exit_3_naming_agent_and_step() {
    // Without ties or anchoring T2 vanishes and T3 > 0, so the discriminant
    // is negative.
    let body = r#"{
  "name": "complex",
  "graph": { "generate": { "kind": "erdos-renyi", "n": 2 } },
  "sim": { "horizon": 1.0, "eps": 0.5, "x0": { "values": [0.4, 0.6] } },
  "multiplier": { "linear": { "lambda0": 0.0, "rate": 1.0 } },
  "policy": { "kind": "optimal" }
}"#;
    let dir = tempfile::tempdir().unwrap();
    let sc = write(dir.path(), "s.json", body);
    let out = dir.path().join("out");
    let res = mvfj(&["--scenario", &sc, "--output-dir", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(3));
    let err = String::from_utf8(res.stderr).unwrap();
    assert!(err.contains("step 0, agent 0"), "{err}");
    assert!(err.contains("T1=") && err.contains("T3="), "{err}");
    assert!(!out.join("trajectories.csv").exists());
}

#[test]
fn missing_scenario_file_exits_2() {
    let res = mvfj(&["--scenario", "/nonexistent/scenario.json"]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn explicit_graph_files_resolve_next_to_the_scenario() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "edges.csv", "i,j,w\n0,1,1.0\n1,0,1.0\n");
    write(dir.path(), "nodes.csv", "i,k\n0,0.5\n1,0.5\n");
    let sc = write(
        dir.path(),
        "s.json",
        r#"{
  "name": "explicit",
  "graph": { "load": { "edges": "edges.csv", "nodes": "nodes.csv" } },
  "sim": { "horizon": 1.0, "eps": 0.1, "x0": { "values": [0.2, 0.8] } },
  "policy": { "kind": "constant", "u": 0.1 },
  "outputs": { "costs": true }
}"#,
    );
    let out = dir.path().join("out");
    let res = mvfj(&["--scenario", &sc, "--output-dir", out.to_str().unwrap()]);
    assert_eq!(
        res.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let costs: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("costs.json")).unwrap()).unwrap();
    let agents = costs["agents"].as_array().unwrap();
    assert_eq!(agents.len(), 2);
    for key in [
        "agent",
        "total",
        "disagreement",
        "stubbornness",
        "effort",
        "paths",
        "std_error",
    ] {
        assert!(agents[0].get(key).is_some(), "missing {key}");
    }
    assert!(agents[0]["disagreement"].as_f64().unwrap() > 0.0);
}
