use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ndsread"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

#[test]
fn curves_csv_layout_and_determinism() {
    let args = [
        "curves",
        "--r0",
        "0.3",
        "--r1",
        "0.6",
        "--ns-min",
        "1",
        "--ns-max",
        "3",
        "--ns-steps",
        "5",
    ];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(
        lines[0],
        "ns,universal_lb,coherent_pe,fock_pe,fock_chernoff,epr_fid_lb,epr_chernoff"
    );
    assert_eq!(lines.len(), 6);
    let half: Vec<&str> = lines[2].split(',').collect();
    assert_eq!(half[0], "1.5");
    assert_eq!((half[3], half[4]), ("", ""));
    let one: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(one[3], "0.35");
    assert!(one.iter().all(|c| !c.is_empty()));
}

#[test]
fn curves_json_declares_semantics() {
    let v = json(&[
        "curves",
        "--r0",
        "0",
        "--r1",
        "0.3",
        "--ns-min",
        "1",
        "--ns-max",
        "2",
        "--ns-steps",
        "2",
        "--format",
        "json",
        "--outputs",
        "fock_pe,fock_chernoff",
    ]);
    let cols = v["columns"].as_array().unwrap();
    assert_eq!(cols[1]["name"], "fock_pe");
    assert_eq!(cols[1]["semantics"], "exact");
    assert_eq!(cols[2]["semantics"], "upper");
    assert_eq!(v["rows"][0][1].as_f64().unwrap(), 0.35);
    assert!(v["rows"][0][2].is_null());
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.json");
    std::fs::write(
        &cfg,
        r#"{"r0": 0.3, "r1": 0.6, "ns_grid": [1, 2], "modes": 5, "outputs": ["epr_chernoff"]}"#,
    )
    .unwrap();
    let out = dir.path().join("out.csv");
    let path = |p: &Path| p.to_str().unwrap().to_string();
    stdout(&[
        "curves",
        "--config",
        &path(&cfg),
        "--modes",
        "50",
        "--out",
        &path(&out),
    ]);
    let text = std::fs::read_to_string(&out).unwrap();
    let direct = stdout(&[
        "curves",
        "--r0",
        "0.3",
        "--r1",
        "0.6",
        "--ns-min",
        "1",
        "--ns-max",
        "2",
        "--ns-steps",
        "2",
        "--modes",
        "50",
        "--outputs",
        "epr_chernoff",
    ]);
    assert_eq!(text, direct);
}

#[test]
fn usage_errors_exit_2() {
    let inconsistent = run(&[
        "curves",
        "--r0",
        "0.3",
        "--r1",
        "0.6",
        "--scenario",
        "ideal",
    ]);
    assert_eq!(inconsistent.status.code(), Some(2));
    assert_eq!(run(&["curves", "--r1", "0.6"]).status.code(), Some(2));
    assert_eq!(
        run(&["curves", "--r0", "0.7", "--r1", "0.6"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["point", "--state", "fock", "--r0", "0.3", "--r1", "0.6"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn gain_surface_triangle() {
    let text = stdout(&["gain-surface", "--r-steps", "5"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "r0,r1,gain");
    assert_eq!(lines.len(), 1 + 15);
    for l in &lines[1..] {
        let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
        assert!(v[0] <= v[1] && v[2] > 0.0);
    }
}

#[test]
fn validate_is_reproducible_and_catches_faults() {
    let args = ["validate", "--seed", "11", "--budget", "24"];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    let report: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(report["passed"], true);

    let faulty = run(&[
        "validate",
        "--seed",
        "11",
        "--budget",
        "24",
        "--inject-fault",
    ]);
    assert_eq!(faulty.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&faulty.stdout).unwrap();
    assert_eq!(report["passed"], false);
    let violations = report["violations"].as_array().unwrap();
    assert!(violations
        .iter()
        .any(|v| v["suite"] == "oracle_equivalence"));
    assert!(violations[0]["instance"]["support"].is_array());
}

#[test]
fn point_vacuum_and_partition_invariance() {
    let v = json(&[
        "point", "--state", "vacuum", "--r0", "0.3", "--r1", "0.6", "--modes", "2",
    ]);
    assert_eq!(v["report"]["pe"].as_f64().unwrap(), 0.5);

    let fock = |occ: &str| {
        let mut v = json(&[
            "point",
            "--state",
            "fock",
            "--occupation",
            occ,
            "--r0",
            "0.3",
            "--r1",
            "0.6",
        ]);
        v.as_object_mut().unwrap().remove("input");
        v
    };
    assert_eq!(fock("2"), fock("1,1"));
    assert_eq!(fock("2"), fock("0,2,0"));
}

#[test]
fn point_epr_fidelity_matches_closed_form() {
    let v = json(&[
        "point", "--state", "epr", "--modes", "1", "--ns", "1", "--r0", "0.3", "--r1", "0.6",
    ]);
    let series = v["report"]["fidelity"].as_f64().unwrap();
    let closed = v["closed_form"]["epr_fidelity"].as_f64().unwrap();
    let mu = (0.3f64 * 0.6).sqrt() + (0.7f64 * 0.4).sqrt();
    assert!((closed - (2.0 - mu).powi(-2)).abs() < 1e-15);
    assert!((series - closed).abs() < 1e-10);
    let r = &v["report"];
    let pe = r["pe"].as_f64().unwrap();
    assert!(r["bracket"]["lower"].as_f64().unwrap() <= pe);
    assert!(pe <= r["bracket"]["upper"].as_f64().unwrap());
}

#[test]
fn point_sparse_with_priors() {
    let v = json(&[
        "point",
        "--state",
        "sparse",
        "--support",
        "1:1",
        "--r0",
        "0.3",
        "--r1",
        "0.6",
        "--prior0",
        "0.7",
    ]);
    assert!((v["report"]["pe"].as_f64().unwrap() - 0.30).abs() < 1e-15);
}

#[test]
fn debug_dump_and_resource_failure() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("dump");
    stdout(&[
        "point",
        "--state",
        "fock",
        "--occupation",
        "1,1",
        "--r0",
        "0.3",
        "--r1",
        "0.6",
        "--dump-debug",
        d.to_str().unwrap(),
    ]);
    for name in ["rho0.csv", "rho1.csv"] {
        let text = std::fs::read_to_string(d.join(name)).unwrap();
        assert!(text.starts_with("row,idler,signal,"));
    }
    let big = run(&[
        "point",
        "--state",
        "epr",
        "--modes",
        "3",
        "--ns",
        "6",
        "--r0",
        "0.3",
        "--r1",
        "0.6",
        "--dump-debug",
        d.to_str().unwrap(),
    ]);
    assert_eq!(
        big.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&big.stderr)
    );
}
