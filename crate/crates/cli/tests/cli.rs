//! End-to-end runs of the fsrlab binary: exit codes, report shapes,
//! rerun stability, and the documented error paths.

use std::process::{Command, Output};

fn fsrlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fsrlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fsrlab_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fsrlab"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn validate_accepts_every_bundled_rule() {
    for name in ["pillow2", "columns2", "barycentric", "triangles3"] {
        let out = fsrlab(&["validate", name]);
        assert_eq!(code(&out), 0, "{name}: {}", stderr(&out));
        assert!(stdout(&out).contains("valid"));
    }
}

#[test]
fn validate_rejects_garbage_and_broken_rules() {
    let dir = tempfile::tempdir().unwrap();
    let garbage = dir.path().join("garbage.fsr");
    std::fs::write(&garbage, "this is not a rule").unwrap();
    let out = fsrlab(&["validate", garbage.to_str().unwrap()]);
    assert_eq!(code(&out), 2);

    // parses, but the gluing names a slot that carries a different edge
    let emitted = fsrlab(&["fixtures", "emit", "pillow2"]);
    let text = stdout(&emitted).replacen("(Q, slot 0)", "(Q, slot 1)", 1);
    assert_ne!(text, stdout(&emitted), "the gluing line is present");
    let broken = dir.path().join("broken.fsr");
    std::fs::write(&broken, text).unwrap();
    let out = fsrlab(&["validate", broken.to_str().unwrap()]);
    assert_eq!(code(&out), 2, "{}", stdout(&out));
    assert!(stdout(&out).contains("findings"), "{}", stdout(&out));
}

#[test]
fn analyze_reports_combexp_for_pillow2() {
    let out = fsrlab(&["analyze", "pillow2.fsr"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("CombExp: holds"));

    let out = fsrlab(&["--json", "analyze", "pillow2"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["schema"], "verdict.v1");
    let combexp = report["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["property"] == "CombExp")
        .unwrap();
    assert_eq!(combexp["holds"], true);
}

#[test]
fn analyze_esep_failure_prints_the_witness_cycle() {
    let out = fsrlab(&["analyze", "columns2", "--property", "esep"]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("FAILS"), "{text}");
    assert!(text.contains("cycle"), "{text}");
}

#[test]
fn exit_codes_are_stable_across_reruns() {
    for args in [
        vec!["analyze", "columns2"],
        vec!["analyze", "pillow2"],
        vec!["probe", "columns2", "contraction", "--max-n", "2"],
    ] {
        let a = fsrlab(&args);
        let b = fsrlab(&args);
        assert_eq!(code(&a), code(&b), "{args:?}");
        assert_eq!(stdout(&a), stdout(&b), "{args:?}");
    }
}

#[test]
fn emitted_fixture_text_round_trips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["pillow2", "columns2", "barycentric", "triangles3"] {
        let out = fsrlab(&["fixtures", "emit", name]);
        assert_eq!(code(&out), 0);
        let path = dir.path().join(format!("{name}.fsr"));
        std::fs::write(&path, stdout(&out)).unwrap();
        let from_file = fsrlab(&["--json", "analyze", path.to_str().unwrap()]);
        let from_name = fsrlab(&["--json", "analyze", name]);
        assert_eq!(code(&from_file), code(&from_name), "{name}");
        assert_eq!(stdout(&from_file), stdout(&from_name), "{name}");
    }
}

#[test]
fn unknown_inputs_exit_two() {
    let out = fsrlab(&["analyze", "no_such_rule"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("pillow2"), "lists what exists");

    let out = fsrlab(&["fixtures", "emit", "no_such_rule"]);
    assert_eq!(code(&out), 2);

    let out = fsrlab(&["analyze", "pillow2", "--property", "flavor"]);
    assert_eq!(code(&out), 2);

    // usage error: --level is required
    let out = fsrlab(&["subdivide", "pillow2"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn probes_map_status_to_exit_codes() {
    let out = fsrlab(&["probe", "pillow2", "contraction", "--max-n", "2"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("CERTIFIED"));

    let out = fsrlab(&["probe", "columns2", "contraction", "--max-n", "2"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("WITNESS"));

    let out = fsrlab(&[
        "probe", "pillow2", "rushton", "--M", "3", "--n", "1", "--depth", "3",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("PASS_AT_DEPTH"));

    let out = fsrlab(&["--json", "probe", "columns2", "boundary", "--depth", "3"]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["schema"], "probe.v1");
    assert_eq!(report["status"], "PERSISTENT");
}

#[test]
fn separation_graph_dot_highlights_the_self_loop() {
    let out = fsrlab(&["analyze", "columns2", "--property", "esep", "--emit", "dot"]);
    assert_eq!(code(&out), 1);
    let dot = stdout(&out);
    assert!(dot.starts_with("digraph"), "{dot}");
    assert!(dot.contains("color=red"), "{dot}");
}

#[test]
fn svg_needs_a_disk_and_dot_needs_a_graph() {
    let out = fsrlab(&[
        "subdivide",
        "pillow2",
        "--level",
        "1",
        "--tile",
        "P",
        "--emit",
        "svg",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).starts_with("<svg"));

    let out = fsrlab(&["subdivide", "pillow2", "--level", "1", "--emit", "svg"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("unsupported combination"));

    let out = fsrlab(&["subdivide", "pillow2", "--level", "1", "--emit", "dot"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("unsupported combination"));

    let out = fsrlab(&["graph", "pillow2", "--levels", "1", "--emit", "svg"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("unsupported combination"));
}

#[test]
fn cell_budget_env_caps_the_build() {
    let out = fsrlab_env(
        &["subdivide", "pillow2", "--level", "3"],
        "FSRLAB_CELL_BUDGET",
        "10",
    );
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("budget"));

    let out = fsrlab_env(
        &["subdivide", "pillow2", "--level", "3"],
        "FSRLAB_CELL_BUDGET",
        "not-a-number",
    );
    assert_eq!(code(&out), 2);
}

#[test]
fn fixtures_list_names_every_rule() {
    let out = fsrlab(&["fixtures", "list"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for name in ["pillow2", "columns2", "barycentric", "triangles3"] {
        assert!(text.contains(name), "{text}");
    }
}
