//! End-to-end tests of the command-line contract: exit codes, report files,
//! the run manifest, and byte-level determinism of repeated runs.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], out_dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permcompat"))
        .args(args)
        .arg("--out-dir")
        .arg(out_dir)
        .output()
        .expect("binary should launch")
}

fn read_json(path: &Path) -> serde_json::Value {
    let text = std::fs::read_to_string(path).expect("report file should exist");
    serde_json::from_str(&text).expect("report should be valid JSON")
}

#[test]
fn compatible_function_exits_zero_with_report_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["check", "--fn", "degree", "--n", "4", "--samples", "100", "--scalar", "rational"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report = read_json(&dir.path().join("check-report.json"));
    assert_eq!(report["verdict"], "compatible-on-sample");
    assert_eq!(report["graphs_checked"], 100);
    assert_eq!(report["constraints_checked"], 100 * 4 * 24);
    let manifest = read_json(&dir.path().join("manifest.json"));
    assert_eq!(manifest["subcommand"], "check");
    assert_eq!(manifest["outputs"], serde_json::json!(["check-report.json"]));
    assert_eq!(manifest["tool_version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn incompatible_function_exits_two_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["check", "--fn", "sp1", "--n", "3", "--samples", "1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let report = read_json(&dir.path().join("check-report.json"));
    assert_eq!(report["verdict"], "incompatible");
    let witness = &report["witness"];
    assert_eq!(witness["perm"], serde_json::json!([1, 0, 2]));
    assert_eq!(witness["node"], 0);
    assert_eq!(witness["lhs"], serde_json::json!(["1"]));
    assert_eq!(witness["rhs"], serde_json::json!(["0"]));
}

#[test]
fn twin_orbit_demo_exits_two_with_forced_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["demo-impossible", "--family", "ERGS", "--n", "10", "--seed", "7"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report = read_json(&dir.path().join("demo-report.json"));
    assert_eq!(report["target_reachable"], false);
    assert!(report["forced_mismatches"].as_u64().unwrap() >= 1);
    assert_eq!(report["all_programs_forced"], true);
    assert_eq!(report["programs"].as_array().unwrap().len(), 20);
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let bad_flag = run(&["check", "--fn", "degree", "--no-such-flag"], dir.path());
    assert_eq!(bad_flag.status.code(), Some(1));
    assert!(!bad_flag.stderr.is_empty(), "usage text should go to stderr");

    let bad_fn = run(&["check", "--fn", "nosuch", "--n", "4"], dir.path());
    assert_eq!(bad_fn.status.code(), Some(1));

    let help = Command::new(env!("CARGO_BIN_EXE_permcompat"))
        .arg("--help")
        .output()
        .unwrap();
    assert_eq!(help.status.code(), Some(0));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let args = ["check", "--fn", "mincut", "--n", "4", "--samples", "25", "--seed", "11"];
    let o1 = run(&args, d1.path());
    let o2 = run(&args, d2.path());
    assert_eq!(o1.status.code(), Some(0));
    assert_eq!(o1.stdout, o2.stdout, "stdout must be deterministic");
    let r1 = std::fs::read(d1.path().join("check-report.json")).unwrap();
    let r2 = std::fs::read(d2.path().join("check-report.json")).unwrap();
    assert_eq!(r1, r2, "report JSON must be byte-identical across reruns");
}

#[test]
fn gen_oracle_run_gnn_pipeline_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let gen = run(
        &["gen", "--family", "ergs", "--n", "6", "--d", "1", "--seed", "3", "--count", "2"],
        dir.path(),
    );
    assert_eq!(gen.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&gen.stderr));
    let graph_path = dir.path().join("graph-000.json");
    assert!(graph_path.exists());
    let meta = read_json(&dir.path().join("gen-meta.json"));
    assert_eq!(meta.as_array().unwrap().len(), 2);
    assert!(meta[0]["meta"]["twin_pair"].is_array(), "twin family must record its twin pair");

    let oracle_dir = tempfile::tempdir().unwrap();
    let oracle = run(
        &["oracle", "--graph", graph_path.to_str().unwrap(), "--fn", "degree"],
        oracle_dir.path(),
    );
    assert_eq!(oracle.status.code(), Some(0));
    let output = read_json(&oracle_dir.path().join("oracle-output.json"));
    assert_eq!(output["outputs"].as_array().unwrap().len(), 6);

    let spec_path = dir.path().join("prog.json");
    std::fs::write(
        &spec_path,
        "{\"family\":\"random\",\"d_in\":1,\"layer_dims\":[2,1],\"seed\":7}\n",
    )
    .unwrap();
    let rg_dir = tempfile::tempdir().unwrap();
    let rg = run(
        &[
            "run-gnn",
            "--program",
            spec_path.to_str().unwrap(),
            "--graph",
            graph_path.to_str().unwrap(),
        ],
        rg_dir.path(),
    );
    assert_eq!(rg.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&rg.stderr));
    let output = read_json(&rg_dir.path().join("run-gnn-output.json"));
    assert_eq!(output["outputs"].as_array().unwrap().len(), 6);
}

#[test]
fn synth_collision_exits_two_and_success_exits_zero() {
    let ok_dir = tempfile::tempdir().unwrap();
    let ok = run(
        &["synth", "--fn", "degree", "--n", "4", "--d", "1", "--calib-count", "10", "--verify", "all", "--emit-table"],
        ok_dir.path(),
    );
    assert_eq!(ok.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&ok.stderr));
    let report = read_json(&ok_dir.path().join("synth-report.json"));
    assert_eq!(report["passed"], true);
    assert_eq!(report["oracle_matches"], true);
    assert_eq!(report["audits_passed"], true);
    assert!(ok_dir.path().join("rho-table.json").exists());

    let bad_dir = tempfile::tempdir().unwrap();
    let bad = run(
        &["synth", "--fn", "sp1", "--n", "3", "--calib-count", "4"],
        bad_dir.path(),
    );
    assert_eq!(bad.status.code(), Some(2));
    let report = read_json(&bad_dir.path().join("synth-report.json"));
    assert_eq!(report["passed"], false);
    assert!(report["collision"].is_object());
    assert_ne!(
        report["collision"]["existing_output"],
        report["collision"]["new_output"]
    );
}

#[test]
fn out_dir_env_var_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_permcompat"))
        .args(["mef-verify", "--encoder", "scalar-power", "--n", "2", "--trials", "50"])
        .env("PERMCOMPAT_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("mef-report.json").exists());
    assert!(dir.path().join("manifest.json").exists());
}
