use std::fs;
use std::process::Command;

fn sqkd(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_sqkd"))
        .args(args)
        .env("SQKD_WORKERS", "2")
        .output()
        .expect("binary runs")
}

#[test]
fn run_writes_rows_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("runs/mirror.csv");
    let o = sqkd(&[
        "run", "--protocol", "mock", "--n", "2", "--delta", "3", "--attack", "cnot_mirror", "--trials", "200",
        "--seed", "42", "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(summary["eve_sift_accuracy"], 1.0);
    assert_eq!(summary["trials"], 200);
    let csv = fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 201);
    assert!(dir.path().join("runs/mirror.summary.json").exists());
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.conf");
    fs::write(&cfg, "protocol = \"p1\"\nn = 2\ndelta = 3.0\ntrials = 30\nseed = 5\n").unwrap();
    let o = sqkd(&["run", "--config", cfg.to_str().unwrap(), "--trials", "12"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(summary["trials"], 12);
    assert_eq!(summary["protocol"], "p1");
    assert_eq!(summary["master_seed"], 5);
}

#[test]
fn sweep_writes_the_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.conf");
    let out = dir.path().join("sweep.csv");
    fs::write(
        &cfg,
        format!(
            "protocol = \"p2\"\nn = 2\ndelta = 1.0\nattack = \"rotation_probe\"\ntrials = 200\n\
             p_ctrl = 1.0\np_test = 1.0\nsweep = \"theta\"\nvalues = [0.0, 1.5707963267948966]\nout = \"{}\"\n",
            out.display()
        ),
    )
    .unwrap();
    let o = sqkd(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("value,detection_prob,detection_ci_lo,detection_ci_hi,eve_info,eve_info_ci_lo,eve_info_ci_hi")
    );
    assert_eq!(lines.count(), 2);
}

#[test]
fn bounds_prints_a_table() {
    let o = sqkd(&["bounds", "--n", "40", "--epsilon", "0.5"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("PASS") && !text.contains("FAIL"), "{text}");
}

#[test]
fn verify_exits_zero_when_everything_holds() {
    let o = sqkd(&["verify", "--scope", "combinatorics"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let o = sqkd(&["verify", "--scope", "leakage", "--json"]);
    assert!(o.status.success());
    let reports: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(reports.as_array().unwrap().iter().all(|r| r["satisfied"] == true));
}

#[test]
fn bad_input_is_reported() {
    let o = sqkd(&["run", "--attack", "telepathy"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown attack"));
    let o = sqkd(&["verify", "--scope", "everything"]);
    assert!(!o.status.success());
}
