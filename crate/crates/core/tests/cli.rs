use std::path::Path;
use std::process::{Command, Output};

use spinbath::experiments::{self, Experiment, ExperimentConfig};

fn spinbath(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinbath"))
        .args(args)
        .arg("--output-dir")
        .arg(out)
        .output()
        .unwrap()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    let header = rdr.headers().unwrap().iter().map(str::to_string).collect();
    let rows = rdr
        .records()
        .map(|r| r.unwrap().iter().map(|x| x.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn fig1a_csv_layout() {
    let dir = tempfile::tempdir().unwrap();
    let out = spinbath(&["fig1a", "--precision", "8"], dir.path());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let path = dir.path().join("fig1a.csv");
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(!text.contains('\r'));
    assert!(text.starts_with("t,v1x,v1y,v1z,v2x,v2y,v2z,angle,len1,len2\n"));
    let second = text.lines().nth(1).unwrap();
    assert!(second.starts_with("0.0000000e0,1.0000000e0,0.0000000e0,0.0000000e0,-1.0000000e0"));

    let (header, rows) = read_csv(&path);
    assert_eq!(header.len(), 10);
    assert_eq!(rows.len(), 601);
    assert!((rows[600][0] - 3.0).abs() < 1e-12);
    assert!((rows[0][7] - std::f64::consts::PI).abs() < 1e-7);
    for r in &rows {
        assert!((r[1] + r[4]).abs() < 1e-7 && (r[2] + r[5]).abs() < 1e-7);
        assert!((r[3] - r[6]).abs() < 1e-7);
    }
}

#[test]
fn refuses_overwrite_without_force() {
    let dir = tempfile::tempdir().unwrap();
    assert!(spinbath(&["channel", "--t-max", "0.5"], dir.path())
        .status
        .success());
    let again = spinbath(&["channel", "--t-max", "0.5"], dir.path());
    assert_eq!(again.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&again.stderr).contains("--force"));
    assert!(
        spinbath(&["channel", "--t-max", "0.5", "--force"], dir.path())
            .status
            .success()
    );
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        spinbath(&["qfi", "--theta", "4"], dir.path()).status.code(),
        Some(2)
    );
    assert_eq!(
        spinbath(&["qfi", "--t-step", "0"], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        spinbath(&["qfi", "--phase-convention", "bogus"], dir.path())
            .status
            .code(),
        Some(2)
    );
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "no_such_key = 1\n").unwrap();
    let out = spinbath(&["qfi", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("qfi.csv").exists());
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# short run\nepsilon = 6\nt_max = 0.2\nt_step = 0.1\n",
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let c = dir.path().join("c");
    assert!(spinbath(&["channel", "--config", cfg], &a).status.success());
    assert!(
        spinbath(&["channel", "--config", cfg, "--epsilon", "2"], &b)
            .status
            .success()
    );
    assert!(spinbath(
        &[
            "channel",
            "--epsilon",
            "2",
            "--t_max",
            "0.2",
            "--t_step",
            "0.1"
        ],
        &c
    )
    .status
    .success());
    let read = |d: &Path| std::fs::read(d.join("channel.csv")).unwrap();
    assert_ne!(read(&a), read(&b));
    assert_eq!(read(&b), read(&c));
    let (_, rows) = read_csv(&b.join("channel.csv"));
    assert_eq!(rows.len(), 3);
}

#[test]
fn nm_scan_writes_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = spinbath(
        &["nm-scan", "--t-step", "0.01", "--tau-max", "2"],
        dir.path(),
    );
    assert!(out.status.success());
    let (header, rows) = read_csv(&dir.path().join("nm_scan.csv"));
    assert_eq!(header, ["tau", "measure"]);
    assert_eq!(rows.len(), 8);
    let summary = std::fs::read_to_string(dir.path().join("nm_summary.txt")).unwrap();
    for key in [
        "measure=",
        "argmax_tau=",
        "boundary_argmax=",
        "tail_warning=",
        "truncation_warning=none",
    ] {
        assert!(summary.contains(key), "{summary}");
    }
    let best = rows.iter().map(|r| r[1]).fold(0.0, f64::max);
    let line = summary.lines().find(|l| l.starts_with("measure=")).unwrap();
    assert_eq!(line["measure=".len()..].parse::<f64>().unwrap(), best);
}

#[test]
fn multi_regime_files() {
    let dir = tempfile::tempdir().unwrap();
    assert!(spinbath(&["fig2", "--t-max", "1"], dir.path())
        .status
        .success());
    assert!(
        spinbath(&["fig3", "--t-max", "1", "--regimes", "6:1"], dir.path())
            .status
            .success()
    );
    for name in [
        "fig2_eps2_T1.csv",
        "fig2_eps6_T1.csv",
        "fig2_eps2_T6.csv",
        "fig3_eps6_T1.csv",
    ] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
    let (header, rows) = read_csv(&dir.path().join("fig3_eps6_T1.csv"));
    assert_eq!(header, ["t", "f_qc", "f_product", "f_product_x2"]);
    for r in &rows {
        assert_eq!(r[3], 2.0 * r[2]);
    }
    // Both probes start pure with unit QFI.
    assert!((rows[0][1] - 1.0).abs() < 1e-12 && (rows[0][2] - 1.0).abs() < 1e-12);
}

#[test]
fn fig4_stats_file() {
    let dir = tempfile::tempdir().unwrap();
    assert!(spinbath(&["fig4", "--t-max", "1"], dir.path())
        .status
        .success());
    let (header, rows) = read_csv(&dir.path().join("fig4.csv"));
    assert_eq!(header, ["t", "dF_dt", "dDB_dt", "sign_agree"]);
    assert_eq!(rows.len(), 501);
    let stats = std::fs::read_to_string(dir.path().join("fig4_stats.txt")).unwrap();
    assert!(stats.contains("points=501\n") && stats.contains("sign_agreement_fraction="));
}

#[test]
fn shared_phase_convention_only_rotates() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("ode");
    let b = dir.path().join("paper");
    assert!(spinbath(&["channel", "--t-max", "1"], &a).status.success());
    assert!(spinbath(
        &["channel", "--t-max", "1", "--phase-convention", "paper"],
        &b
    )
    .status
    .success());
    let (_, ra) = read_csv(&a.join("channel.csv"));
    let (_, rb) = read_csv(&b.join("channel.csv"));
    for (x, y) in ra.iter().zip(&rb) {
        let radius = |r: &Vec<f64>| r[1].hypot(r[2]);
        assert!((radius(x) - radius(y)).abs() < 1e-14);
        assert_eq!((x[9], x[12]), (y[9], y[12]));
    }
}

#[test]
fn amplitude_damping_angle_decays_to_zero() {
    let cfg = ExperimentConfig {
        t_max: 20.0,
        t_step: 0.01,
        ..ExperimentConfig::for_experiment(Experiment::Fig1b)
    };
    let pairs = experiments::fig1b_data(&cfg).unwrap();
    let angles: Vec<f64> = pairs.iter().map(|p| p.angle().unwrap()).collect();
    assert!(angles.windows(2).all(|w| w[1] < w[0]));
    assert!(*angles.last().unwrap() < 1e-3);
    // Lengths are not monotone: they shrink, then grow towards |1>.
    let lens: Vec<f64> = pairs.iter().map(|p| p.v1.norm()).collect();
    let min = lens.iter().copied().fold(f64::INFINITY, f64::min);
    assert!(min < lens[0] && min < *lens.last().unwrap());
}
