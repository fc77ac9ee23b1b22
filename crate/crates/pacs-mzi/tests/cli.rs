//! End-to-end tests of the installed binary: the exit-code contract, the
//! `PACSMZI_THREADS` environment knob, override refusal, manifest emission
//! and the `point` JSON shape.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 truncation / numeric-validity failure.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pacs-mzi"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("failed to spawn pacs-mzi")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for sub in ["verify", "figure", "point"] {
        assert!(text.contains(sub), "--help does not mention `{sub}`");
    }
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = run(&["verify", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_figure_id_is_usage_error() {
    let out = run(&["figure", "fig9"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(
        err.contains("fig2c") && err.contains("fig9"),
        "error should name the bad id and list valid ones: {err}"
    );
}

#[test]
fn refused_override_is_usage_error() {
    // fig1b is a vacuum ⊗ PACS family plot; a coherent amplitude for the
    // other arm contradicts its definition and must be refused, not ignored.
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "figure",
        "fig1b",
        "--alpha-a",
        "1.5",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("--alpha-a"),
        "refusal should name the offending flag: {}",
        stderr(&out)
    );
    // Refusal happens before any computation: nothing may be written.
    assert!(
        std::fs::read_dir(dir.path()).unwrap().next().is_none(),
        "refused run left files behind"
    );
}

#[test]
fn bad_thread_env_is_usage_error() {
    let out = bin()
        .args(["figure", "fig2c"])
        .env("PACSMZI_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("PACSMZI_THREADS"));

    let out = bin()
        .args(["figure", "fig2c"])
        .env("PACSMZI_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn truncation_preflight_is_numeric_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "verify",
        "--nmax",
        "8",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(
        stderr(&out).contains("truncation"),
        "expected a truncation message, got: {}",
        stderr(&out)
    );
    // The preflight fails before any report is written.
    assert!(!dir.path().join("verify_report.json").exists());
}

#[test]
fn verbatim_variance_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "verify",
        "--paper-verbatim-variance",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1), "stderr: {}", stderr(&out));

    // The report must still be written, with the curve-shape checks failing
    // and the baseline checks passing.
    let report: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("verify_report.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report["all_passed"], serde_json::Value::Bool(false));
    assert_eq!(report["variance_path"], "ratio_form");
    let failed: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == serde_json::Value::Bool(false))
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert_eq!(
        failed,
        ["closed_form_vs_oracle", "sub_sql_landmarks"],
        "unexpected failure set on the verbatim path"
    );
}

fn figure_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap())
        .filter(|e| e.file_name() != "run_manifest.json")
        .map(|e| {
            (
                e.file_name().into_string().unwrap(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn figure_outputs_are_thread_count_independent() {
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let dir = tempfile::tempdir().unwrap();
        let out = bin()
            .args(["figure", "fig2c", "--out", dir.path().to_str().unwrap()])
            .env("PACSMZI_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));

        // Exactly one manifest per output directory, recording the run.
        let manifest: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(dir.path().join("run_manifest.json")).unwrap(),
        )
        .unwrap();
        assert_eq!(manifest["command"], "figure fig2c");
        assert_eq!(manifest["threads"], threads.parse::<u64>().unwrap());

        outputs.push(figure_files(dir.path()));
    }
    assert!(!outputs[0].is_empty());
    assert_eq!(
        outputs[0], outputs[1],
        "fig2c data files differ between PACSMZI_THREADS=1 and 4"
    );
}

#[test]
fn point_reports_both_paths_as_json() {
    let out = run(&[
        "point",
        "--alpha-a",
        "1.5",
        "--alpha-b",
        "1.1713",
        "--m",
        "1",
        "--phi",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();

    for path in ["analytic", "oracle"] {
        for field in [
            "mean_nd",
            "var_nd",
            "slope",
            "n_total",
            "delta_phi",
            "s_sql",
        ] {
            assert!(
                v[path][field].is_number(),
                "missing {path}.{field} in point output: {v}"
            );
        }
    }
    for field in ["mean_nd", "var_nd", "slope"] {
        let gap = v["max_abs_gap"][field].as_f64().unwrap();
        assert!(gap < 1e-8, "paths disagree in {field} by {gap}");
    }
    // This operating point sits inside the sub-shot-noise window.
    assert!(v["analytic"]["s_sql"].as_f64().unwrap() < 1.0);
}

#[test]
fn point_without_closed_form_still_reports_oracle() {
    // No closed form exists for two added photons on a coherent arm; the
    // oracle side must still be reported, with an explanatory note.
    let out = run(&["point", "--alpha-a", "1.0", "--alpha-b", "1.0", "--m", "2"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["analytic"].is_null());
    assert!(v["max_abs_gap"].is_null());
    assert!(v["oracle"]["s_sql"].is_number());
    assert!(v["analytic_note"].is_string());
}

#[test]
fn point_vacuum_conflicts_with_alpha_a() {
    let out = run(&[
        "point",
        "--vacuum-a",
        "--alpha-a",
        "1.0",
        "--alpha-b",
        "1.0",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&[
        "point",
        "--vacuum-a",
        "--alpha-b",
        "1.5",
        "--phi",
        "1.5707963267948966",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let s = v["analytic"]["s_sql"].as_f64().unwrap();
    assert!(
        (s - 1.0).abs() < 1e-9,
        "vacuum ⊗ PACS at φ = π/2 should touch the SQL, got {s}"
    );
}
