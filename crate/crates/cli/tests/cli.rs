use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_fermi-bridge");

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN).args(args).current_dir(dir).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    std::fs::write(dir.join(name), body).unwrap();
    name.to_string()
}

fn rows(dir: &Path, name: &str) -> Vec<csv::StringRecord> {
    let mut r = csv::Reader::from_path(dir.join(name)).unwrap();
    r.records().map(|x| x.unwrap()).collect()
}

const FLAT: &str = r#"{
    "experiment": "estimate",
    "pair": {"space": "euclidean", "m": 3, "submanifold": {"kind": "affine_subspace", "n": 1}},
    "x0": {"distance": 1.0},
    "n_paths": 300,
    "grid": {"h_max": 0.01}
}"#;

const H3: &str = r#"{
    "experiment": "estimate",
    "pair": {"space": "hyperbolic", "m": 3, "submanifold": {"kind": "totally_geodesic", "n": 2}},
    "x0": {"distance": 0.5},
    "n_paths": 500,
    "seed": 9,
    "grid": {"h_max": 0.01}
}"#;

#[test]
fn selftest_passes_and_detects_perturbation() {
    let dir = tempfile::tempdir().unwrap();
    let ok = run_in(dir.path(), &["selftest"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));
    let bad = run_in(dir.path(), &["selftest", "--perturb", "1e-2"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stdout).contains("FAIL laplacian"));
}

#[test]
fn flat_estimate_has_zero_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "flat.json", FLAT);
    let out = run_in(dir.path(), &["run", &cfg, "--out", "flat.csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let header = csv::Reader::from_path(dir.path().join("flat.csv")).unwrap().headers().unwrap().clone();
    assert_eq!(&header, vec!["weight", "eps", "cutoff", "mean", "stderr", "n_paths", "reference", "rel_error"]);
    let rs = rows(dir.path(), "flat.csv");
    assert_eq!(rs.len(), 3);
    for r in rs {
        assert_eq!(r[4].parse::<f64>().unwrap(), 0.0);
        assert_eq!(&r[3], &r[6]);
        assert_eq!(r[7].parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn csv_bytes_are_reproducible_across_runs_and_workers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "h3.json", H3);
    for (out, workers) in [("a.csv", "1"), ("b.csv", "1"), ("c.csv", "2")] {
        let o = run_in(dir.path(), &["run", &cfg, "--out", out, "--workers", workers]);
        assert_eq!(o.status.code(), Some(0));
    }
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("b.csv")).unwrap());
    assert_eq!(a, std::fs::read(dir.path().join("c.csv")).unwrap());
    let o = run_in(dir.path(), &["run", &cfg, "--out", "d.csv", "--seed", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert_ne!(a, std::fs::read(dir.path().join("d.csv")).unwrap());
}

#[test]
fn metadata_sidecar_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "flat.json", FLAT);
    run_in(dir.path(), &["run", &cfg, "--out", "r.csv", "--seed", "42"]);
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["seed"], 42);
    assert_eq!(meta["config"]["seed"], 42);
    assert_eq!(meta["config"]["experiment"], "estimate");
    assert!(meta["wall_time_seconds"].as_f64().unwrap() >= 0.0);
    assert!(meta["rng_scheme"].as_str().unwrap().contains("set_stream"));
    assert!(meta.get("git_describe").is_some());
}

#[test]
fn varadhan_rows_for_circle_in_plane() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "v.json",
        r#"{"experiment": "verify-varadhan",
            "pair": {"space": "euclidean", "m": 2, "submanifold": {"kind": "centered_sphere", "radius": 1.0}},
            "t_grid": [0.01, 0.001, 0.0001], "d_grid": [1.0]}"#,
    );
    let out = run_in(dir.path(), &["run", &cfg, "--out", "v.csv"]);
    assert_eq!(out.status.code(), Some(0));
    let rs = rows(dir.path(), "v.csv");
    let values: Vec<_> = rs.iter().filter(|r| &r[0] == "value").collect();
    assert_eq!(values.len(), 3);
    let limit = rs.iter().find(|r| &r[0] == "limit").unwrap();
    assert!(limit[3].parse::<f64>().unwrap().abs() < 0.01);
}

#[test]
fn failed_verification_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "v.json",
        r#"{"experiment": "verify-varadhan",
            "pair": {"space": "hyperbolic", "m": 3, "submanifold": {"kind": "totally_geodesic", "n": 2}},
            "t_grid": [1.0, 2.0, 3.0], "d_grid": [1.0]}"#,
    );
    let out = run_in(dir.path(), &["run", &cfg, "--out", "v.csv"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(dir.path().join("v.csv").exists() && dir.path().join("v.meta.json").exists());
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write(dir.path(), "a.json", &FLAT.replace("\"estimate\"", "\"guess\""));
    let o = run_in(dir.path(), &["run", &unknown]);
    assert_eq!(o.status.code(), Some(2));
    let field = write(dir.path(), "b.json", &FLAT.replace("\"n_paths\"", "\"paths\""));
    let o = run_in(dir.path(), &["run", &field]);
    assert_eq!(o.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&o.stderr);
    assert!(msg.contains("unknown field `paths`") && msg.contains("line 5"), "{msg}");
    let invalid = write(dir.path(), "c.json", &FLAT.replace("\"n_paths\": 300", "\"n_paths\": 0"));
    assert_eq!(run_in(dir.path(), &["run", &invalid]).status.code(), Some(2));
    assert_eq!(run_in(dir.path(), &["run", "missing.json"]).status.code(), Some(2));
    assert_eq!(run_in(dir.path(), &["run", &unknown, "--workers", "0"]).status.code(), Some(2));
    assert!(!dir.path().join("results.csv").exists());
}

#[test]
fn other_experiments_run() {
    let dir = tempfile::tempdir().unwrap();
    let configs = [
        r#"{"experiment": "endpoint-law", "pair": {"space": "euclidean", "m": 3, "submanifold": {"kind": "centered_sphere", "radius": 1.0}},
            "x0": [0.0, 0.0, 0.0], "n_paths": 2000, "grid": {"h_max": 0.01}}"#,
        r#"{"experiment": "local-time", "pair": {"space": "euclidean", "m": 1, "submanifold": {"kind": "point", "basepoint": [0.0]}},
            "x0": [0.0], "n_paths": 2000, "t_grid": [0.5, 1.0], "eps_bands": [0.02]}"#,
        r#"{"experiment": "radial-moments", "pair": {"space": "euclidean", "m": 3, "submanifold": {"kind": "affine_subspace", "n": 1}},
            "x0": {"distance": 1.0}, "n_paths": 4000, "observe": [0.5], "grid": {"h_max": 0.01}}"#,
        r#"{"experiment": "bridge-vs-exact", "pair": {"space": "euclidean", "m": 2, "submanifold": {"kind": "affine_subspace", "n": 1}},
            "x0": {"distance": 1.0}, "n_paths": 4000, "grid": {"h_max": 0.01}}"#,
        r#"{"experiment": "verify-bounds", "pair": {"space": "hyperbolic", "m": 3, "submanifold": {"kind": "totally_geodesic", "n": 2}}}"#,
        r#"{"experiment": "verify-derivatives", "pair": {"space": "circle", "submanifold": {"kind": "circle_point", "theta0": 0.0}}}"#,
    ];
    for (i, body) in configs.iter().enumerate() {
        let cfg = write(dir.path(), &format!("{i}.json"), body);
        let out = format!("{i}.csv");
        let o = run_in(dir.path(), &["run", &cfg, "--out", &out]);
        assert_eq!(o.status.code(), Some(0), "{body}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!rows(dir.path(), &out).is_empty());
    }
    let lt = rows(dir.path(), "1.csv");
    // E[L_t] = sqrt(2t/pi)
    for r in lt {
        let (t, mean, se) = (r[0].parse::<f64>().unwrap(), r[2].parse::<f64>().unwrap(), r[3].parse::<f64>().unwrap());
        assert!((mean - (2.0 * t / std::f64::consts::PI).sqrt()).abs() < 4.0 * se + 0.02);
    }
    let c = rows(dir.path(), "5.csv");
    assert!(c.iter().any(|r| &r[0] == "c_grad" && r[4].parse::<f64>().unwrap().is_finite()));
}
