use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qjsd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qjsd"))
        .args(args)
        .env_remove("QJSD_LOG")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_state(dir: &Path, name: &str, matrix: &str, dim: usize) -> String {
    let path = dir.join(name);
    fs::write(&path, format!("{{\"dim\":{dim},\"matrix\":{matrix}}}")).unwrap();
    path.to_str().unwrap().to_owned()
}

const KET0: &str = "[[[1,0],[0,0]],[[0,0],[0,0]]]";
const KET1: &str = "[[[0,0],[0,0]],[[0,0],[1,0]]]";
const MIXED: &str = "[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]";

#[test]
fn audit_reports_no_violations_and_is_worker_independent() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("w1");
    let eight = dir.path().join("w8");
    let out = qjsd(&["audit", "--dim", "2", "--samples", "100000", "--seed", "1", "--out", one.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_str(&fs::read_to_string(one.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["violations"], 0);
    assert_eq!(report["samples"], 100000);

    let out = qjsd(&[
        "audit", "--dim", "2", "--samples", "100000", "--seed", "1", "--workers", "8", "--out",
        eight.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(fs::read(one.join("report.json")).unwrap(), fs::read(eight.join("report.json")).unwrap());
    assert_eq!(fs::read(one.join("histogram.csv")).unwrap(), fs::read(eight.join("histogram.csv")).unwrap());
}

#[test]
fn audit_csv_bookkeeping() {
    let dir = tempfile::tempdir().unwrap();
    let out = qjsd(&["audit", "--dim", "4", "--samples", "10", "--seed", "1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let csv = fs::read_to_string(dir.path().join("histogram.csv")).unwrap();
    let mut total = 0u64;
    for line in csv.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        if line.starts_with('#') {
            total += fields[1].parse::<u64>().unwrap();
        } else {
            assert_eq!(fields.len(), 4);
            total += fields[2].parse::<u64>().unwrap();
        }
    }
    assert_eq!(total, 10);
    assert!(csv.starts_with("bin_low,bin_high,count,probability\n"));
}

#[test]
fn audit_without_out_prints_report() {
    let out = qjsd(&["audit", "--dim", "3", "--samples", "50", "--seed", "9"]);
    assert_eq!(code(&out), 0);
    let report = json_stdout(&out);
    assert_eq!(report["histogram"]["total"], 50);
    assert!(report.get("workers").is_none());
}

#[test]
fn invalid_configs_exit_64() {
    for args in [
        &["audit", "--dim", "2", "--samples", "0"][..],
        &["audit", "--dim", "2", "--bin-width", "-1"],
        &["audit", "--dim", "2", "--mixedness-floor", "1.5"],
        &["anneal", "--dim", "2", "--cooling-ratio", "1.5"],
        &["anneal", "--dim", "2", "--restarts", "0"],
        &["anneal", "--dim", "2", "--objective", "median"],
        &["audit", "--samples", "10"],
        &["audit", "--dim", "two"],
        &["frobnicate"],
        &["purescan", "--grid-steps", "1"],
        &["sample", "--dim", "0"],
    ] {
        let out = qjsd(args);
        assert_eq!(code(&out), 64, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn help_exits_zero() {
    assert_eq!(code(&qjsd(&["--help"])), 0);
    assert_eq!(code(&qjsd(&["audit", "--help"])), 0);
}

#[test]
fn anneal_symmetrized_reaches_zero() {
    let out = qjsd(&["anneal", "--dim", "2", "--objective", "symmetrized", "--seed", "3"]);
    assert_eq!(code(&out), 0);
    let r = json_stdout(&out);
    assert!(r["best_objective"].as_f64().unwrap() < 1e-4);
    assert_eq!(r["restarts"].as_array().unwrap().len(), 5);
    assert_eq!(r["schedule"]["cooling_ratio"], 0.95);
    for key in ["rho", "xi", "sigma"] {
        assert_eq!(r["states"][key]["dim"], 2);
    }
}

#[test]
fn anneal_single_makes_rho_and_xi_coincide() {
    let out = qjsd(&["anneal", "--dim", "2", "--objective", "single", "--seed", "7"]);
    assert_eq!(code(&out), 0);
    let r = json_stdout(&out);
    let entries = |k: &str| -> Vec<f64> {
        r["states"][k]["matrix"]
            .as_array()
            .unwrap()
            .iter()
            .flat_map(|row| row.as_array().unwrap().iter().flat_map(|z| z.as_array().unwrap().iter().map(|x| x.as_f64().unwrap())))
            .collect()
    };
    let hs = entries("rho")
        .iter()
        .zip(entries("xi"))
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    assert!(hs < 1e-2, "{hs}");
}

#[test]
fn anneal_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for path in [&a, &b] {
        let out = qjsd(&[
            "anneal", "--dim", "3", "--restarts", "1", "--seed", "3", "--t-final", "1e-3", "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn compare_tables() {
    let dir = tempfile::tempdir().unwrap();
    let k0 = write_state(dir.path(), "k0.json", KET0, 2);
    let k1 = write_state(dir.path(), "k1.json", KET1, 2);
    let mixed = write_state(dir.path(), "mixed.json", MIXED, 2);

    let same = json_stdout(&qjsd(&["compare", &mixed, &mixed]));
    for key in ["qjsd", "qjsd_sqrt", "hilbert_schmidt", "d_h_closed_form", "djs1_lower_bound"] {
        assert!(same[key].as_f64().unwrap().abs() < 1e-12, "{key}");
    }
    assert!((same["fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(same.get("wootters").is_none());

    let orth = json_stdout(&qjsd(&["compare", &k0, &k1]));
    assert!((orth["qjsd"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(orth["fidelity"].as_f64().unwrap().abs() < 1e-12);
    assert!((orth["wootters"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);

    let half = json_stdout(&qjsd(&["compare", &mixed, &k0]));
    assert!((half["qjsd"].as_f64().unwrap() - 0.3112781244591328).abs() < 1e-12);
    assert!((half["qjsd_spectral"].as_f64().unwrap() - 0.3112781244591328).abs() < 1e-12);
}

#[test]
fn compare_errors() {
    let dir = tempfile::tempdir().unwrap();
    let k0 = write_state(dir.path(), "k0.json", KET0, 2);
    let q3 = write_state(dir.path(), "q3.json", "[[[1,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]]]", 3);
    let junk = dir.path().join("junk.json");
    fs::write(&junk, "{not json").unwrap();
    let bad_trace = write_state(dir.path(), "bad.json", "[[[1,0],[0,0]],[[0,0],[1,0]]]", 2);

    assert_eq!(code(&qjsd(&["compare", &k0, &q3])), 65);
    assert_eq!(code(&qjsd(&["compare", &k0, junk.to_str().unwrap()])), 65);
    assert_eq!(code(&qjsd(&["compare", &k0, &bad_trace])), 65);
    let missing = dir.path().join("missing.json");
    let out = qjsd(&["compare", &k0, missing.to_str().unwrap()]);
    assert_eq!(code(&out), 74);
}

#[test]
fn sample_writes_reproducible_valid_states() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        let out = qjsd(&["sample", "--dim", "3", "--samples", "2", "--seed", "5", "--out", d.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
    }
    let mut files: Vec<_> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    files.sort();
    assert_eq!(files.len(), 2);
    for f in &files {
        let text = fs::read(a.join(f)).unwrap();
        assert_eq!(text, fs::read(b.join(f)).unwrap());
        let rho: qjsd::DensityMatrix = qjsd::states::read_state_json(std::str::from_utf8(&text).unwrap()).unwrap();
        assert_eq!(rho.dim(), 3);
    }
}

#[test]
fn sample_respects_mixedness_floor() {
    let out = qjsd(&["sample", "--dim", "2", "--samples", "1000", "--mixedness-floor", "0.45"]);
    assert_eq!(code(&out), 0);
    let states: Vec<Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(states.len(), 1000);
    for s in states {
        let rho: qjsd::DensityMatrix = qjsd::states::read_state_json(&s.to_string()).unwrap();
        assert!(rho.linear_entropy() >= 0.45);
    }
}

#[test]
fn purescan_passes() {
    let out = qjsd(&["purescan"]);
    assert_eq!(code(&out), 0);
    let r = json_stdout(&out);
    assert_eq!(r["grid_steps"], 25);
    let min = r["min_g"].as_f64().unwrap();
    assert!(min >= -1e-12);
    if min == 0.0 {
        let (x, y, z) = (r["x"].as_f64().unwrap(), r["y"].as_f64().unwrap(), r["z"].as_f64().unwrap());
        assert!((y - x).abs() < 1e-12 || (z - x).abs() < 1e-12, "{r}");
    }
    assert_eq!(code(&qjsd(&["purescan", "--grid-steps", "2"])), 0);
}
