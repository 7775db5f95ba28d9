use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qldp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qldp"))
        .args(args)
        .env_remove("QLDP_THREADS")
        .output()
        .expect("spawn qldp")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const DEP05: &str = r#"{
  "dim": 2,
  "label": "dep05",
  "kraus": [
    [[[0.7905694150420949, 0], [0, 0]], [[0, 0], [0.7905694150420949, 0]]],
    [[[0, 0], [0.3535533905932738, 0]], [[0.3535533905932738, 0], [0, 0]]],
    [[[0, 0], [0, -0.3535533905932738]], [[0, 0.3535533905932738], [0, 0]]],
    [[[0.3535533905932738, 0], [0, 0]], [[0, 0], [-0.3535533905932738, 0]]]
  ]
}"#;

#[test]
fn analyze_depolarizing_file() {
    // Dep(0.5) in Pauli form: weights 5/8 on I and 1/8 on X, Y, Z
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "dep05.json", DEP05);
    let v = json(&qldp(&["analyze", "--input", &input, "--format", "json", "--restarts", "16"]));
    assert_eq!(v["finite"], true);
    assert_eq!(v["label"], "dep05");
    assert!((v["eps_star"].as_f64().unwrap() - 3f64.ln()).abs() < 1e-6);
    assert_eq!(v["witness"].as_array().unwrap().len(), 2);
    assert!(v["wall_time_s"].as_f64().unwrap() >= 0.0);
}

#[test]
fn analyze_unitary_is_infinite() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "unitary.json",
        r#"{"dim": 2, "kraus": [[[[0, 0], [1, 0]], [[1, 0], [0, 0]]]]}"#,
    );
    let v = json(&qldp(&["analyze", "--input", &input, "--format", "json"]));
    assert_eq!(v["eps_star"], "inf");
    assert_eq!(v["reason"], "kraus-count");
    assert_eq!(v["short_circuit"], true);

    let csv = qldp(&["analyze", "--input", &input]);
    let text = String::from_utf8(csv.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let at = |k: &str| row[header.iter().position(|h| *h == k).unwrap()];
    assert_eq!(at("eps_star"), "inf");
    assert_eq!(at("reason"), "kraus-count");
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"dim\": 2,\n \"kraus\": [");
    let out = qldp(&["analyze", "--input", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let not_tp = write(dir.path(), "nottp.json", r#"{"dim": 1, "kraus": [[[[0.5, 0]]]]}"#);
    assert_eq!(qldp(&["analyze", "--input", &not_tp]).status.code(), Some(2));

    let shape = write(dir.path(), "shape.json", r#"{"dim": 2, "kraus": [[[[1, 0], [0, 0]]]]}"#);
    let out = qldp(&["analyze", "--input", &shape]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("kraus[0]"));

    let missing = dir.path().join("missing.json");
    assert_eq!(qldp(&["analyze", "--input", missing.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(qldp(&["noise", "Dep:p=2"]).status.code(), Some(2));
    assert_eq!(qldp(&["noise", "Foo:p=0.1"]).status.code(), Some(2));
    assert_eq!(qldp(&["analyze"]).status.code(), Some(2));
    assert_eq!(qldp(&["optimal", "--n", "1", "--epsilon", "-1"]).status.code(), Some(2));
    assert_eq!(qldp(&["analyze", "--noise", "Dep:p=0.5", "--tol", "0"]).status.code(), Some(2));
}

#[test]
fn noise_catalog_examples() {
    let v = json(&qldp(&["noise", "Dep:p=0.5", "--format", "json", "--restarts", "16"]));
    assert!((v["eps_star"].as_f64().unwrap() - 3f64.ln()).abs() < 1e-12);
    assert!((v["fidelity"].as_f64().unwrap() - 0.75).abs() < 1e-12);
    assert!((v["anti_trace"].as_f64().unwrap() - 0.75).abs() < 1e-12);
    assert!(v["delta_eps"].as_f64().unwrap() < 1e-6);

    let v = json(&qldp(&["noise", "GAD:q=0.75,gamma=0.4", "--format", "json", "--restarts", "16"]));
    assert!((v["fidelity"].as_f64().unwrap() - 0.7).abs() < 1e-12);
    assert!((v["anti_trace"].as_f64().unwrap() - 0.7).abs() < 1e-12);
    assert!(v["delta_fidelity"].as_f64().unwrap() < 1e-6);

    let v = json(&qldp(&["noise", "XF:p=0.5", "--format", "json", "--restarts", "16"]));
    assert_eq!(v["eps_star"], "inf");
    assert!((v["fidelity"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((v["anti_trace"].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn optimal_round_trips_through_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("opt.json");
    let eps = 3f64.ln().to_string();
    let out = qldp(&["optimal", "--n", "1", "--epsilon", &eps, "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let ch = qldp::format::parse_channel(&text).unwrap();
    let dep = qldp_core::noise::make_noise(&qldp_core::NoiseSpec::Depolarizing { p: 0.5 }).unwrap();
    assert_eq!(ch.kraus_count(), 4);
    for (a, b) in ch.kraus().iter().zip(dep.kraus()) {
        assert!(a.distance(b).unwrap() < 1e-12);
    }
    let v = json(&qldp(&["analyze", "--input", path.to_str().unwrap(), "--format", "json"]));
    assert!((v["eps_star"].as_f64().unwrap() - 3f64.ln()).abs() < 1e-6);
}

#[test]
fn ldp_with_trivial_povm_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let povm = write(
        dir.path(),
        "m1.json",
        r#"{"dim": 2,
            "elements": [[[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]],
                         [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]],
            "labels": ["a", "b"]}"#,
    );
    let v = json(&qldp(&["ldp", "--noise", "Dep:p=0.5", "--povm", &povm, "--format", "json"]));
    assert_eq!(v["measurement_eps"].as_f64().unwrap(), 0.0);
    assert_eq!(v["within_eps_star"], true);

    let basis = write(
        dir.path(),
        "m0.json",
        r#"{"dim": 2, "elements": [[[[1, 0], [0, 0]], [[0, 0], [0, 0]]],
                                   [[[0, 0], [0, 0]], [[0, 0], [1, 0]]]]}"#,
    );
    let v = json(&qldp(&["ldp", "--noise", "Dep:p=0.5", "--povm", &basis, "--format", "json"]));
    assert!((v["measurement_eps"].as_f64().unwrap() - 3f64.ln()).abs() < 1e-10);

    let wrong_dim = write(dir.path(), "m2.json", r#"{"dim": 1, "elements": [[[[1, 0]]]]}"#);
    assert_eq!(
        qldp(&["ldp", "--noise", "Dep:p=0.5", "--povm", &wrong_dim]).status.code(),
        Some(2)
    );
}

#[test]
fn compose_depolarizing_pair() {
    let v = json(&qldp(&["compose", "Dep:p=0.5", "Dep:p=0.5", "--bell", "--format", "json"]));
    let sum = v["sum_eps"].as_f64().unwrap();
    assert!((sum - 2.0 * 3f64.ln()).abs() < 1e-6);
    assert!(v["gap"].as_f64().unwrap() <= 1e-3);
    assert!((v["bell_p0_after"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(v["bell_ppt_before"], false);

    let v = json(&qldp(&["compose", "Dep:p=0.5", "ZF:p=0.3", "--format", "json"]));
    assert_eq!(v["infinite_party"], "b");
    assert_eq!(v["measured_eps"], "inf");
}

#[test]
fn experiments_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for d in [&a, &b] {
        let out = qldp(&["experiment", "all", "--output", d.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for f in ["fig2.csv", "fig3.csv", "fig4.csv"] {
        let x = std::fs::read(a.join(f)).unwrap();
        assert_eq!(x, std::fs::read(b.join(f)).unwrap(), "{f}");
        assert!(!x.contains(&b'\r'));
    }
    let fig4 = std::fs::read_to_string(a.join("fig4.csv")).unwrap();
    assert!(fig4.starts_with("epsilon,n,fidelity\n0,1,0.5\n"));
    assert!(fig4.contains("\n2,4,0.330029818\n"));
    let fig2 = std::fs::read_to_string(a.join("fig2.csv")).unwrap();
    assert!(fig2.starts_with("mechanism,q,epsilon,fidelity,feasible\nDep,,0.05,"));

    let single = qldp(&["experiment", "fig3"]);
    assert_eq!(single.stdout, std::fs::read(a.join("fig3.csv")).unwrap());
}

#[test]
fn unwritable_output_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("no/such/dir/out.csv");
    let out = qldp(&["experiment", "fig4", "--output", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));

    // a regular file where the output directory should go
    let file = dir.path().join("plain");
    std::fs::write(&file, "x").unwrap();
    let out = qldp(&["experiment", "all", "--output", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn thread_count_does_not_change_results() {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_qldp"))
            .args(["analyze", "--noise", "GAD:q=0.3,gamma=0.5", "--format", "json"])
            .env("QLDP_THREADS", threads)
            .output()
            .unwrap();
        let mut v = json(&out);
        v.as_object_mut().unwrap().remove("wall_time_s");
        v
    };
    assert_eq!(run("1"), run("4"));
    let bad = Command::new(env!("CARGO_BIN_EXE_qldp"))
        .args(["analyze", "--noise", "Dep:p=0.5"])
        .env("QLDP_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
