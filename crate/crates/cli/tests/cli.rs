//! End-to-end runs of the `spin-kitten` binary.

use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spin-kitten")).args(args).arg("--out").arg(dir).output().expect("binary runs")
}

fn manifest(dir: &Path, stem: &str) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join(format!("{stem}.manifest.json"))).unwrap()).unwrap()
}

#[test]
fn selfcheck_passes_on_fig1a() {
    let d = tempfile::tempdir().unwrap();
    let o = run(d.path(), &["selfcheck", "--preset", "fig1a"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let m = manifest(d.path(), "selfcheck");
    assert_eq!(m["manifest_version"], 1);
    assert_eq!(m["results"]["all_passed"], true);
}

#[test]
fn revival_scan_reports_fourth_multiple() {
    let d = tempfile::tempdir().unwrap();
    let o = run(d.path(), &["revival-scan", "--preset", "fig1a"]);
    assert_eq!(o.status.code(), Some(0));
    let m = manifest(d.path(), "revival-scan");
    assert!((m["results"]["quasiperiod"].as_f64().unwrap() - 1.570816e6).abs() < 1.0);
    assert_eq!(m["results"]["revival_multiple"], 4);
}

#[test]
fn entropy_series_is_deterministic_and_flags_kittens() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["entropy-series", "--preset", "fig3a", "--t-end", "2.6e6", "--t-points", "2000"];
    assert_eq!(run(a.path(), &args).status.code(), Some(0));
    assert_eq!(run(b.path(), &args).status.code(), Some(0));
    let ta = std::fs::read(a.path().join("entropy-series.csv")).unwrap();
    assert_eq!(ta, std::fs::read(b.path().join("entropy-series.csv")).unwrap());
    let text = String::from_utf8(ta).unwrap();
    assert!(text.starts_with("t,value,flags\n"));
    let mins: Vec<f64> = text.lines().skip(1).filter(|l| l.ends_with(",min")).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    for target in [0.284981e6, 1.282021e6] {
        assert!(mins.iter().any(|t| (t - target).abs() < 5e-3 * target), "{target} not in {mins:?}");
    }
    let m = manifest(a.path(), "entropy-series");
    assert!(m["truncation"]["achieved_n_max"].as_u64().unwrap() > 0);
    assert!(m["residuals"]["entropy_equality"].as_f64().unwrap() < 1e-4);
}

#[test]
fn tomogram_and_distribution_layouts() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(run(d.path(), &["tomogram", "--preset", "fig7", "--tomo-grid", "4,5"]).status.code(), Some(0));
    let t = std::fs::read_to_string(d.path().join("tomogram.csv")).unwrap();
    let lines: Vec<&str> = t.lines().collect();
    assert_eq!(lines[0], "b,g,m2,probability");
    assert_eq!(lines.len(), 1 + 4 * 5 * 4);
    assert_eq!(lines[1].split(',').nth(2), Some("3"));
    assert_eq!(run(d.path(), &["distribution", "--dist", "q", "--space", "bipartite", "--beta-slice", "-1.5,0.5", "--sphere-grid", "5,6"]).status.code(), Some(0));
    let t = std::fs::read_to_string(d.path().join("distribution.csv")).unwrap();
    assert!(t.starts_with("theta,phi,re_beta,im_beta,value\n"));
    assert_eq!(t.lines().count(), 1 + 30);
    assert!(manifest(d.path(), "distribution")["residuals"]["sphere_marginal"].as_f64().unwrap() < 1e-9);
}

#[test]
fn scenario_file_round_trips_through_manifest() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(run(d.path(), &["spectrum", "--preset", "fig6b", "--n-max", "40"]).status.code(), Some(0));
    let m = manifest(d.path(), "spectrum");
    let file = d.path().join("scenario.json");
    std::fs::write(&file, serde_json::to_string(&m["scenario"]).unwrap()).unwrap();
    let e = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_spin-kitten")).args(["spectrum", "--scenario"]).arg(&file).arg("--out").arg(e.path()).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let mut back = manifest(e.path(), "spectrum")["scenario"].clone();
    back["out_dir"] = m["scenario"]["out_dir"].clone();
    assert_eq!(back, m["scenario"]);
    assert_eq!(std::fs::read(d.path().join("spectrum.csv")).unwrap(), std::fs::read(e.path().join("spectrum.csv")).unwrap());
}

#[test]
fn exit_codes() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(run(d.path(), &["spectrum", "--preset", "fig99"]).status.code(), Some(2));
    assert_eq!(run(d.path(), &["distribution", "--space", "osc", "--dist", "p"]).status.code(), Some(2));
    assert_eq!(run(d.path(), &["spectrum", "--beta-slice", "oops"]).status.code(), Some(2));
    let file = d.path().join("s.json");
    std::fs::write(&file, r#"{"truncation": {"n_max": 4, "adaptive": false}}"#).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_spin-kitten")).args(["evolve", "--scenario"]).arg(&file).arg("--out").arg(d.path()).output().unwrap();
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}
