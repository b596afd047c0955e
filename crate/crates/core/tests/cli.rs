use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lpbp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpbp"))
        .args(args)
        .env_remove("LPBP_CONFIG")
        .output()
        .expect("run lpbp")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn constants_prints_c_np() {
    let o = lpbp(&["constants", "--n", "2", "--p", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["c_np"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert_eq!(v["branch"], "lambda>1");
}

#[test]
fn verify_bp_on_ellipses() {
    let o = lpbp(&["verify", "--id", "bp", "--seeds", "10", "--n", "2", "--p", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("id,seed,n,p,r,lambda,lhs,rhs,deficit,pass,time_ms"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 10);
    for (i, row) in rows.iter().enumerate() {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[0], "bp");
        assert_eq!(cols[1], i.to_string());
        let deficit: f64 = cols[8].parse().unwrap();
        assert!((deficit - 1.0).abs() <= 1e-3, "{row}");
        assert_eq!(cols[9], "true");
    }
}

#[test]
fn mixed_volume_of_a_body_with_itself_is_its_volume() {
    let dir = tempfile::tempdir().unwrap();
    let k = write(dir.path(), "k.json", r#"{"polytope": [[1, 0], [0, 1], [-1, 0], [0, -1]]}"#);
    for r in ["1", "1.5"] {
        let o = lpbp(&["mixed-volume", "--k", &k, "--l", &k, "--r", r]);
        assert_eq!(o.status.code(), Some(0));
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert!((v["value"].as_f64().unwrap() - 2.0).abs() < 1e-12, "{v}");
    }
}

#[test]
fn moment_body_of_the_disk() {
    let dir = tempfile::tempdir().unwrap();
    let k = write(dir.path(), "disk.json", r#"{"ellipsoid": [[1, 0], [0, 1]]}"#);
    let o = lpbp(&["moment-body", "--in", &k, "--p", "2", "--centroid"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["volume"].as_f64().unwrap() - std::f64::consts::PI).abs() < 1e-4);
    assert_eq!(v["p"], 2.0);
}

#[test]
fn batch_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let o = lpbp(&[
            "verify", "--id", "main", "--seeds", "3", "--seed", "5", "--r", "1.5", "--field-grid", "48", "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    let a = std::fs::read(a).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, std::fs::read(b).unwrap());
}

#[test]
fn jsonl_and_json_formats() {
    let dir = tempfile::tempdir().unwrap();
    let jsonl = dir.path().join("r.jsonl");
    let o = lpbp(&["verify", "--id", "mixed", "--seeds", "2", "--format", "json", "--jsonl", jsonl.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[1]["seed"], 1);
    assert_eq!(std::fs::read_to_string(jsonl).unwrap(), stdout(&o));
}

#[test]
fn sweep_covers_the_lambda_grid() {
    let o = lpbp(&["sweep", "--id", "lnf", "--lambda-grid", "0.8,2", "--seeds", "2", "--field-grid", "40"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lambdas: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(5).unwrap()).collect();
    assert_eq!(lambdas, ["0.8", "0.8", "2", "2"]);
}

#[test]
fn oracle_constants_pass() {
    let o = lpbp(&["oracle", "constants"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["max_rel_discrepancy"].as_f64().unwrap() < 1e-8);
}

#[test]
fn failing_checks_exit_one_and_report() {
    // Cutting the extremal profile off early moves the pair out of its equality band.
    let o = lpbp(&["verify", "--id", "t1vmv", "--generator", "extremal-pair", "--r", "1.5", "--R", "0.5", "--seeds", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let failing: Vec<Value> = String::from_utf8_lossy(&o.stderr).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(failing.len(), 2);
    assert_eq!(failing[0]["band_ok"], false);
    assert_eq!(stdout(&o).lines().count(), 3);

    // A grid with three nodes per axis leaves no usable gradient.
    let o = lpbp(&["verify", "--id", "main", "--field-grid", "3", "--seeds", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["constants", "--n", "x"][..],
        &["constants", "--n", "1"],
        &["verify"],
        &["verify", "--id", "bp", "--sphere", "0"],
        &["oracle", "everything"],
        &["mixed-volume", "--k", "/nonexistent.json", "--l", "/nonexistent.json"],
    ] {
        let o = lpbp(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn help_for_every_subcommand() {
    for sub in ["constants", "moment-body", "mixed-volume", "verify", "sweep", "oracle"] {
        let o = lpbp(&[sub, "--help"]);
        assert_eq!(o.status.code(), Some(0), "{sub}");
        assert!(stdout(&o).contains("Usage"));
    }
    assert_eq!(lpbp(&["--help"]).status.code(), Some(0));
}

#[test]
fn config_file_and_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("from_config.csv");
    let cfg = write(dir.path(), "run.cfg", &format!("# batch settings\nseed = 7\nout = {}\n", out.display()));
    let o = lpbp(&["--config", &cfg, "verify", "--id", "mixed", "--seeds", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("mixed,7,"));

    // Flags win over the file.
    let o = lpbp(&["--config", &cfg, "verify", "--id", "mixed", "--seeds", "1", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(std::fs::read_to_string(&out).unwrap().lines().nth(1).unwrap().starts_with("mixed,3,"));

    let json_cfg = write(dir.path(), "json.cfg", "format = json\n");
    let o = Command::new(env!("CARGO_BIN_EXE_lpbp"))
        .args(["verify", "--id", "mixed", "--seeds", "1"])
        .env("LPBP_CONFIG", &json_cfg)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["id"], "mixed");

    let bad = write(dir.path(), "bad.cfg", "colour = blue\n");
    assert_eq!(lpbp(&["--config", &bad, "constants"]).status.code(), Some(2));
}
