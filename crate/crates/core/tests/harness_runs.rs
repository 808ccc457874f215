use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};
use std::fs;

use sqkd_core::adversary::AttackChoice;
use sqkd_core::harness::{
    read_rows_csv, run_experiment, run_sweep, run_trials, summary_path, ExperimentConfig, FlatConfig, OutputFormat,
    Summary,
};
use sqkd_core::protocol::{OutcomeRow, ProtocolKind, ProtocolParams};

fn p2(attack: AttackChoice, trials: usize, seed: u64) -> ExperimentConfig {
    let params = ProtocolParams::new(2, 1.0).with_thresholds(1.0, 1.0).with_seed(seed);
    ExperimentConfig::new(ProtocolKind::P2, params, attack, trials)
}

#[test]
fn x_ctrl_error_follows_half_angle() {
    // |+> through the controlled rotation: P(|->) = sin^2(theta/2)
    for theta in [FRAC_PI_8, FRAC_PI_4, 3.0 * FRAC_PI_8] {
        let outcomes = run_trials(&p2(AttackChoice::rotation(theta), 400, 5)).unwrap();
        let (e, c) = outcomes
            .iter()
            .fold((0, 0), |(e, c), o| (e + o.stats.ctrl_x.errors, c + o.stats.ctrl_x.checked));
        let expected = (theta / 2.0).sin().powi(2);
        let sigma = (expected * (1.0 - expected) / c as f64).sqrt();
        let rate = e as f64 / c as f64;
        assert!((rate - expected).abs() < 4.0 * sigma, "theta {theta}: {rate} vs {expected}");
        assert!(outcomes.iter().all(|o| o.stats.ctrl_z.errors == 0));
    }
}

#[test]
fn rotation_sweep_shape() {
    let text = "protocol = \"p2\"\nn = 2\ndelta = 1.0\nattack = \"rotation_probe\"\ntrials = 1500\n\
                p_ctrl = 1.0\np_test = 1.0\nseed = 17\nsweep = \"theta\"\n";
    let values = [0.0, FRAC_PI_8, FRAC_PI_4, 3.0 * FRAC_PI_8, FRAC_PI_2];
    let mut cfg = FlatConfig::from_str(text).unwrap();
    cfg.values = Some(values.to_vec());
    let rows = run_sweep(&cfg.to_sweep().unwrap()).unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0].detection_prob, 0.0);
    assert_eq!(rows[0].eve_info, Some(0.0));
    for w in rows.windows(2) {
        assert!(w[1].detection_ci_hi >= w[0].detection_ci_lo, "{w:?}");
        assert!(w[1].eve_info_ci_hi.unwrap() >= w[0].eve_info_ci_lo.unwrap(), "{w:?}");
    }
    // theta = pi/2 is the forward-only cNOT
    let cnot = run_experiment(&p2(AttackChoice::named("cnot_forward_only"), 1500, 18)).unwrap().summary;
    let last = rows.last().unwrap();
    assert!(cnot.detection_ci.0 <= last.detection_ci_hi && last.detection_ci_lo <= cnot.detection_ci.1);
    let mi = cnot.eve_info_mi.unwrap();
    assert!(mi.ci_lo <= last.eve_info_ci_hi.unwrap() && last.eve_info_ci_lo.unwrap() <= mi.ci_hi);
}

#[test]
fn csv_is_byte_reproducible_and_complete() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = |name: &str| {
        let params = ProtocolParams::new(4, 0.5).with_seed(99);
        ExperimentConfig::new(ProtocolKind::P1, params, AttackChoice::named("intercept_resend_z"), 300)
            .with_output(dir.path().join(name), OutputFormat::Csv)
    };
    let a = run_experiment(&cfg("a.csv")).unwrap();
    run_experiment(&cfg("b.csv")).unwrap();
    let bytes = fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(bytes, fs::read(dir.path().join("b.csv")).unwrap());

    // every trial is a row, aborted ones with their reason
    let rows = read_rows_csv(&dir.path().join("a.csv")).unwrap();
    assert_eq!(rows.len(), 300);
    assert!(rows.iter().any(|r| r.status == "CtrlErrorRate"));
    assert!(rows.iter().filter(|r| r.status != "Completed").all(|r| r.eve_info_flag.is_none()));

    // the written summary is what the rows imply
    let written: Summary = serde_json::from_str(&fs::read_to_string(summary_path(&dir.path().join("a.csv"))).unwrap()).unwrap();
    let recomputed = Summary::from_rows(&cfg("a.csv"), &rows, a.summary.eve_sift_accuracy, a.summary.eve_info_mi);
    assert_eq!(written, recomputed);
    assert_eq!(written.aborted, rows.iter().filter(|r| r.status != "Completed").count());
}

#[test]
fn json_mirrors_csv() {
    let dir = tempfile::tempdir().unwrap();
    let params = ProtocolParams::new(2, 1.0).with_seed(3);
    let base = ExperimentConfig::new(ProtocolKind::Mock, params, AttackChoice::named("cnot_mirror"), 50);
    run_experiment(&base.clone().with_output(dir.path().join("r.csv"), OutputFormat::Csv)).unwrap();
    run_experiment(&base.with_output(dir.path().join("r.json"), OutputFormat::Json)).unwrap();
    let csv_rows = read_rows_csv(&dir.path().join("r.csv")).unwrap();
    let json_rows: Vec<OutcomeRow> = serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(csv_rows, json_rows);
}

#[test]
fn mock_mirror_reads_everything() {
    let params = ProtocolParams::new(2, 3.0).with_seed(21);
    let cfg = ExperimentConfig::new(ProtocolKind::Mock, params, AttackChoice::named("cnot_mirror"), 1000);
    let s = run_experiment(&cfg).unwrap().summary;
    assert_eq!(s.eve_sift_accuracy, Some(1.0));
    assert_eq!(s.eve_info_rate, Some(1.0));
    assert_eq!(s.mean_ctrl_err_x, Some(0.0));
    assert_eq!(s.mean_test_err, Some(0.0));
    // INFO is two uniform bits, all of which Eve holds
    let mi = s.eve_info_mi.unwrap();
    assert!((mi.plug_in - 2.0).abs() < 0.02, "{mi:?}");
}

#[test]
fn honest_p2_has_no_aborts() {
    let params = ProtocolParams::new(4, 0.5).with_seed(1);
    let cfg = ExperimentConfig::new(ProtocolKind::P2, params, AttackChoice::named("no_attack"), 100);
    let s = run_experiment(&cfg).unwrap().summary;
    assert_eq!(s.abort_reasons.get("CtrlErrorRate"), None);
    assert_eq!(s.abort_reasons.get("TestErrorRate"), None);
    assert_eq!(s.mean_ctrl_err_z, Some(0.0));
    assert_eq!(s.mean_test_err, Some(0.0));
}
