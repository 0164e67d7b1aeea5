use std::path::Path;
use std::process::{Command, Output};

fn gaitcap(args: &[&str], output: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gaitcap"))
        .args(args)
        .arg("--output")
        .arg(output)
        .output()
        .expect("failed to launch gaitcap")
}

fn ok(out: Output) -> Output {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn data_rows(path: &Path) -> usize {
    std::fs::read_to_string(path).unwrap().lines().count() - 1
}

#[test]
fn single_frame_track_writes_one_row() {
    let dir = tempfile::tempdir().unwrap();
    ok(gaitcap(&["synth", "--frames", "1"], dir.path()));
    assert!(dir.path().join("frames/frame_0000.pgm").is_file());
    assert!(dir.path().join("frames/background.pgm").is_file());
    ok(gaitcap(&["track"], dir.path()));
    assert_eq!(data_rows(&dir.path().join("trajectory.csv")), 1);
    assert_eq!(data_rows(&dir.path().join("track_log.csv")), 1);

    let eval = ok(gaitcap(&["eval"], dir.path()));
    assert!(String::from_utf8_lossy(&eval.stdout).contains("mean joint RMSE"));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("eval_report.json")).unwrap()).unwrap();
    assert!(report["mean_rmse"].as_f64().unwrap() >= 0.0);

    let debug = ok(gaitcap(&["debug-weight", "--frame", "0"], dir.path()));
    assert!(String::from_utf8_lossy(&debug.stdout).contains("combined weight"));
}

#[test]
fn gait_on_stationary_subject_fails() {
    let dir = tempfile::tempdir().unwrap();
    ok(gaitcap(&["synth", "--frames", "6"], dir.path()));
    // every frame repeats the first pose
    let truth = std::fs::read_to_string(dir.path().join("truth.csv")).unwrap();
    let mut lines = truth.lines();
    let header = lines.next().unwrap();
    let first = lines.next().unwrap();
    let still: Vec<String> = (0..10)
        .map(|k| {
            let rest = first.split_once(',').unwrap().1;
            format!("{k},{rest}")
        })
        .collect();
    let path = dir.path().join("still.csv");
    std::fs::write(&path, format!("{header}\n{}\n", still.join("\n"))).unwrap();

    let out = gaitcap(&["gait", "--trajectory", path.to_str().unwrap()], dir.path());
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("insufficient gait events"), "stderr: {stderr}");
}

#[test]
fn gait_on_truth_reports_parameters() {
    let dir = tempfile::tempdir().unwrap();
    ok(gaitcap(&["synth", "--frames", "40"], dir.path()));
    let truth = dir.path().join("truth.csv");
    let out = ok(gaitcap(&["gait", "--trajectory", truth.to_str().unwrap()], dir.path()));
    assert!(String::from_utf8_lossy(&out.stdout).contains("cadence"));
    assert!(dir.path().join("gait_report.json").is_file());
    assert_eq!(data_rows(&dir.path().join("ankle_displacement.csv")), 40);
}

#[test]
fn missing_inputs_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let out = gaitcap(&["track"], dir.path());
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("does not exist"));
}

#[test]
fn bad_config_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(&path, "[paths]\noutput = \"x\"\nframes = [\"x/frames\"]\n\n[ipf]\ngrid_levels = 4\n").unwrap();
    let out = gaitcap(&["config", "--config", path.to_str().unwrap()], dir.path());
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 6"));
}

#[test]
fn debug_weight_compares_mask_files() {
    let dir = tempfile::tempdir().unwrap();
    ok(gaitcap(&["synth", "--frames", "1"], dir.path()));
    ok(gaitcap(&["track"], dir.path()));
    ok(gaitcap(&["debug-weight", "--frame", "0"], dir.path()));
    let observed = dir.path().join("debug_frame0000_cam0_observed.pgm");
    let observed = observed.to_str().unwrap();
    let out = ok(gaitcap(&["debug-weight", "--observed", observed, "--model", observed], dir.path()));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("n_sil_only 0  n_model_only 0"), "{text}");
}

#[test]
fn synth_track_eval_default_scenario() {
    let dir = tempfile::tempdir().unwrap();
    ok(gaitcap(&["synth"], dir.path()));
    ok(gaitcap(&["track"], dir.path()));
    assert_eq!(data_rows(&dir.path().join("trajectory.csv")), 40);
    ok(gaitcap(&["eval"], dir.path()));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("eval_report.json")).unwrap()).unwrap();
    let rmse = report["mean_rmse"].as_f64().unwrap();
    assert!(rmse <= 0.10, "mean joint RMSE {rmse} m exceeds 0.10 m");
}
