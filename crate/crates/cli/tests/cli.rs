use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use chiral_diode::export::read_map_binary;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chiral-diode"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn single_sweep_has_one_row_per_detuning() {
    let out = run(&["single", "--detuning", "-4:4:401", "--gamma1", "1.0", "--kappa", "1.0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), "detuning_over_Gamma,gamma1_over_Gamma,T,R,loss");
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 401);
    // resonance sits in the middle: the ideal diode blocks left incidence
    assert_eq!(rows[200][0], 0.0);
    assert!(rows[200][2] < 1e-15);
}

#[test]
fn two_photon_resonance_map_shows_stripes() {
    let out = run(&["twomap", "--resonance", "two-photon", "--gamma1", "0", "--x", "-1:1:21"]);
    assert!(out.status.success());
    for r in csv_rows(&stdout(&out)) {
        let want = (10.0 * (r[1] - r[0])).cos().powi(2) / (2.0 * PI * PI);
        assert!((r[2] - want).abs() < 1e-14, "{r:?}");
    }
}

#[test]
fn twomap_all_channels_and_binary() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["twomap", "--gamma1", "0.6", "--x", "-2:2:5", "--channels", "all"]);
    assert!(stdout(&out).starts_with("x1,x2,psi_tt_sq,psi_rr_sq,psi_rt_sq\n"));

    let path = dir.path().join("map.bin");
    let p = path.to_str().unwrap();
    assert!(run(&["twomap", "--x", "-2:2:7", "--format", "bin", "-o", p]).status.success());
    let map = read_map_binary(&fs::read(&path).unwrap()).unwrap();
    assert_eq!((map.rows, map.cols, map.x_min, map.x_max), (7, 7, -2.0, 2.0));
    let text = stdout(&run(&["twomap", "--x", "-2:2:7"]));
    let from_csv: Vec<f64> = csv_rows(&text).iter().map(|r| r[2]).collect();
    assert_eq!(map.values, from_csv);
    // binary output needs a file
    assert_eq!(run(&["twomap", "--format", "bin"]).status.code(), Some(1));
}

#[test]
fn verify_residual_reports_json() {
    let out = run(&["verify", "--suite", "residual"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["passed"], Value::Bool(true));
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.len() > 15);
    for c in checks {
        for key in ["name", "value", "threshold", "pass"] {
            assert!(c.get(key).is_some(), "{c}");
        }
    }
}

#[test]
fn working_area_curves() {
    let out = run(&["working-area", "--gamma1", "0.5:1:11"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("gamma1_over_Gamma,Gamma_abs_x,branch,diverges\n"));
    // γ1 = Γ is the divergent point for κ = Γ
    assert!(text.trim_end().ends_with("1.0,inf,0,1"));

    let out = run(&["working-area", "--resonance", "two-photon", "--kappa", "0.4"]);
    let text = stdout(&out);
    assert!(text.lines().count() > 10);
    assert!(text.trim_end().ends_with(",inf,0,1"));

    let out = run(&["working-area", "--method", "scan", "--gamma1", "0.75", "--gamma-x", "0:10:201"]);
    let rows = csv_rows(&stdout(&out));
    let want = 2.0 / 2.0 * (4.0f64 * 0.75 * 0.75 / (0.5 * 0.5)).ln();
    assert!(rows.iter().any(|r| (r[1] - want).abs() < 1e-6), "{rows:?}");
}

fn manifest(dir: &Path, fig: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join(format!("{fig}_manifest.json"))).unwrap()).unwrap()
}

#[test]
fn reproduce_writes_panels_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert!(run(&["reproduce", "fig3", "--out-dir", d]).status.success());
    let m = manifest(dir.path(), "fig3");
    let panels = m["panels"].as_array().unwrap();
    assert_eq!(panels.len(), 4);
    for p in panels {
        assert!(dir.path().join(p["file"].as_str().unwrap()).exists());
    }
    assert_eq!(panels[1]["params"]["kappa"], serde_json::json!(0.01));

    assert!(run(&["reproduce", "fig6", "--out-dir", d]).status.success());
    assert_eq!(manifest(dir.path(), "fig6")["panels"].as_array().unwrap().len(), 2);
}

#[test]
fn reproduce_grid_override_keeps_schema() {
    let coarse = tempfile::tempdir().unwrap();
    let fine = tempfile::tempdir().unwrap();
    assert!(run(&["reproduce", "fig4", "--grid", "101", "--out-dir", coarse.path().to_str().unwrap()])
        .status
        .success());
    assert!(run(&["reproduce", "fig4", "--grid", "11", "--out-dir", fine.path().to_str().unwrap()])
        .status
        .success());
    let text = fs::read_to_string(coarse.path().join("fig4a.csv")).unwrap();
    assert_eq!(text.lines().count(), 1 + 101 * 101);
    let a = manifest(coarse.path(), "fig4");
    let b = manifest(fine.path(), "fig4");
    let keys = |v: &Value| v["panels"][0].as_object().unwrap().keys().cloned().collect::<Vec<_>>();
    assert_eq!(keys(&a), keys(&b));
    assert_eq!(a["grid"], serde_json::json!(101));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        assert!(run(&["reproduce", "fig5", "--grid", "51", "--out-dir", d.path().to_str().unwrap()])
            .status
            .success());
    }
    for name in ["fig5a.csv", "fig5d.csv", "fig5_manifest.json"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap());
    }
}

#[test]
fn config_file_merges_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"params": {"omega_a": 0, "kappa": 0, "U": 0, "gamma1": 0.5, "gamma2": 0.5}, "detuning": "0:0:1"}"#)
        .unwrap();
    let c = cfg.to_str().unwrap();

    // from the file: lossless symmetric coupling reflects everything
    let rows = csv_rows(&stdout(&run(&["--config", c, "single"])));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][1], 0.5);
    assert!((rows[0][3] - 1.0).abs() < 1e-15);

    // a flag beats the file
    let rows = csv_rows(&stdout(&run(&["single", "--config", c, "--kappa", "1", "--gamma1", "1"])));
    assert!(rows[0][2] < 1e-15 && rows[0][3] < 1e-15);

    fs::write(&cfg, r#"{"kapa": 1}"#).unwrap();
    assert_eq!(run(&["--config", c, "single"]).status.code(), Some(1));
    let missing = dir.path().join("nope.json");
    assert_eq!(run(&["--config", missing.to_str().unwrap(), "single"]).status.code(), Some(3));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["single", "--kappa", "-1"]).status.code(), Some(1));
    assert_eq!(run(&["single", "--gamma1", "1.5"]).status.code(), Some(1));
    assert_eq!(run(&["single", "--detuning", "1:0"]).status.code(), Some(1));
    assert_eq!(run(&["reproduce", "fig10"]).status.code(), Some(1));
    assert_eq!(run(&["single", "-o", "/nonexistent-dir/out.csv"]).status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn thread_cap_from_environment() {
    let ok = bin()
        .env("CHIRAL_DIODE_THREADS", "2")
        .args(["single", "--detuning", "0:1:3"])
        .output()
        .unwrap();
    assert!(ok.status.success());
    let bad = bin().env("CHIRAL_DIODE_THREADS", "0").args(["single"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
