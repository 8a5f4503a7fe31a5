//! The command-line runner: exit codes, diagnostics, and output placement.

mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use predgain::analytic::{shorter_route_probability, GraphModel};
use predgain::experiment::OUT_DIR_ENV;

fn predgain(args: &[&str], env: Option<(&str, &Path)>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_predgain"));
    cmd.args(args).env_remove(OUT_DIR_ENV);
    if let Some((k, v)) = env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn lists_every_scenario() {
    let o = predgain(&["list-scenarios"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    for name in [
        "entropy-sweep",
        "compression-surface",
        "route-probability",
        "differential-gain",
        "flash-route",
        "update-bound",
    ] {
        assert!(text.contains(name), "{name} missing");
    }
}

#[test]
fn missing_scenario_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", "{\n  \"seed\": 3\n}\n");
    let o = predgain(&["validate", &cfg], None);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("missing field `scenario`"), "{err}");
    assert!(err.contains("c.json:3:"), "{err}");
}

#[test]
fn hop_reduction_must_stay_below_hops() {
    let dir = tempfile::tempdir().unwrap();
    let text = "{\n  \"scenario\": \"differential-gain\",\n  \"flow\": {\n    \"hops\": 20,\n    \"hop_reduction\": 20\n  }\n}\n";
    let cfg = write(dir.path(), "c.json", text);
    let o = predgain(&["validate", &cfg], None);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("c.json:5: flow.hop_reduction: must satisfy 1 <= hop_reduction < flow.hops = 20 (got 20)"), "{err}");
}

#[test]
fn every_violation_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{"scenario": "entropy-sweep", "repetitions": 0, "graph": {"nodes": 1}, "mobility": {"ratios": [[1, 2]]}}"#;
    let o = predgain(&["validate", &write(dir.path(), "c.json", text)], None);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    for key in ["repetitions", "graph.nodes", "mobility.ratios[0]"] {
        assert!(
            err.contains(&format!("{key}: ")),
            "{key} not reported: {err}"
        );
    }
}

#[test]
fn syntax_errors_and_unknown_scenarios_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let o = predgain(
        &[
            "validate",
            &write(dir.path(), "a.json", "{\n \"scenario\": \n"),
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(2));
    let o = predgain(
        &[
            "validate",
            &write(dir.path(), "b.json", r#"{"scenario": "fig-9"}"#),
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("scenario"));
    let o = predgain(&["validate", "/nonexistent/c.json"], None);
    assert_eq!(o.status.code(), Some(2));
    let o = predgain(&["frobnicate"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn minimal_config_echoes_every_default() {
    let dir = tempfile::tempdir().unwrap();
    let o = predgain(
        &[
            "validate",
            &write(dir.path(), "c.json", r#"{"scenario": "update-bound"}"#),
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["graph"]["nodes"], 100);
    assert_eq!(v["graph"]["radius"], 2.0);
    assert_eq!(v["graph"]["epoch"], 10.0);
    assert_eq!(v["cluster"]["link_capacity"], 1e6);
    assert_eq!(v["flow"]["flow_bits"], 1e8);
    assert_eq!(v["flow"]["hops"], 50);
    assert_eq!(v["mobility"]["field"]["kind"], "rotation");
    assert_eq!(v["repetitions"], 20);
    for section in [
        "mobility",
        "compression",
        "graph",
        "cluster",
        "flow",
        "route",
        "flash",
        "monte_carlo",
    ] {
        assert!(v[section].is_object(), "{section} not materialized");
    }
}

#[test]
fn update_bound_run_writes_commented_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"scenario": "update-bound", "seed": 4}"#,
    );
    let out = dir.path().join("out");
    let o = predgain(
        &["run", &cfg, "--out", out.to_str().unwrap(), "--seed", "9"],
        None,
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(out.join("update_bound.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        format!("# seed=9,version={}", env!("CARGO_PKG_VERSION"))
    );
    assert_eq!(lines.next().unwrap(), "C,I_c,T_r");
    assert_eq!(lines.next().unwrap(), "1,0,0");
    assert_eq!(lines.count(), 99);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["seed"], 9);
    assert_eq!(report["config"]["seed"], 9);
    assert_eq!(report["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn output_directory_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let from_config = dir.path().join("cfg-out");
    let text = format!(
        r#"{{"scenario": "update-bound", "output_dir": {:?}}}"#,
        from_config.to_str().unwrap()
    );
    let cfg = write(dir.path(), "c.json", &text);
    assert_eq!(predgain(&["run", &cfg], None).status.code(), Some(0));
    assert!(from_config.join("update_bound.csv").exists());

    let from_env = dir.path().join("env-out");
    assert_eq!(
        predgain(&["run", &cfg], Some((OUT_DIR_ENV, &from_env)))
            .status
            .code(),
        Some(0)
    );
    assert!(from_env.join("update_bound.csv").exists());

    let explicit = dir.path().join("flag-out");
    let o = predgain(
        &["run", &cfg, "--out", explicit.to_str().unwrap()],
        Some((OUT_DIR_ENV, &from_env)),
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(explicit.join("update_bound.csv").exists());
}

#[test]
fn runtime_failure_leaves_nothing_behind() {
    let dir = tempfile::tempdir().unwrap();
    // a single direct hop never forms with probability 0.99
    let text = r#"{"scenario": "differential-gain", "graph": {"calibration": {"bound": 2, "target": 0.99}}}"#;
    let cfg = write(dir.path(), "c.json", text);
    let out = dir.path().join("out");
    let o = predgain(&["run", &cfg, "--out", out.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(!out.exists());
    let entries: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(entries, vec![std::ffi::OsString::from("c.json")]);
}

#[test]
fn zero_jobs_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"scenario": "update-bound"}"#);
    let o = predgain(
        &[
            "run",
            &cfg,
            "--jobs",
            "0",
            "--out",
            dir.path().join("o").to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn route_probability_table_matches_the_model() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{
        "scenario": "route-probability",
        "graph": {"nodes": 100, "link_probability": 0.01},
        "route": {"k_max": 30},
        "monte_carlo": {"trials": 500, "gap_nodes": [5]}
    }"#;
    let cfg = write(dir.path(), "c.json", text);
    let out = dir.path().join("out");
    let o = predgain(
        &["run", &cfg, "--out", out.to_str().unwrap(), "--jobs", "2"],
        None,
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = common::csv_rows(&fs::read_to_string(out.join("route_probability.csv")).unwrap());
    assert_eq!(rows.len(), 30);
    let g = GraphModel::with_probability(100, 0.01, 10.0).unwrap();
    for (i, r) in rows.iter().enumerate() {
        let k: u64 = r[0].parse().unwrap();
        assert_eq!(k, i as u64 + 1);
        let want = shorter_route_probability(&g, k).unwrap();
        assert!(common::rel_err(r[1].parse().unwrap(), want) <= 1e-9);
    }
    assert_eq!(rows[0][1], "0");
}
