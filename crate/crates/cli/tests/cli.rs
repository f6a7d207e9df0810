use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn harvest(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_harvest")).args(args).env("RUST_LOG", "warn").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn build_table(dir: &Path) -> String {
    let out = dir.join("t.bin");
    let p = out.to_str().unwrap().to_string();
    let o = harvest(&["modes", "--lmax", "4", "--omega-min", "0.05", "--omega-max", "6", "--omega-step", "0.05", "--radii", "6.009,8", "--out", &p]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("checksum"));
    p
}

#[test]
fn modes_response_and_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let table = build_table(dir.path());

    let o = harvest(&["response", "--table", &table, "--rb", "8", "--gamma", "2", "--delay", "5", "--state", "U"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["response"]["l_aa"].as_f64().unwrap() > 0.0);
    assert_eq!(v["pair"]["state"], "Unruh");

    let csv = dir.path().join("out").join("gamma.csv");
    let csv_s = csv.to_str().unwrap();
    let args = ["sweep", "--variable", "gamma", "--range", "0.5,3.0", "--points", "4", "--states", "B,H", "--delay", "10", "--table", &table, "--l-cut", "4", "--json", "--out", csv_s];
    let o = harvest(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let first = fs::read(&csv).unwrap();
    let text = String::from_utf8(first.clone()).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 1 + 8);
    assert!(csv.with_extension("json").exists());
    let echo = format!("{csv_s}.config.json");
    let spec: serde_json::Value = serde_json::from_str(&fs::read_to_string(&echo).unwrap()).unwrap();
    assert_eq!(spec["points"], 4);
    assert_eq!(spec["b"]["center"], 10.0);

    // Re-running from the echoed configuration reproduces the CSV byte for byte.
    let o = harvest(&["sweep", "--config", &echo]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read(&csv).unwrap(), first);

    let o = harvest(&["sweep", "--variable", "delay", "--range", "-4,4", "--points", "9", "--table", &table, "--l-cut", "4", "--out", dir.path().join("d.csv").to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(fs::read_to_string(dir.path().join("d.csv")).unwrap().contains("# peaks: "));
}

#[test]
fn coverage_and_io_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let table = build_table(dir.path());
    // Radius missing from the table.
    let o = harvest(&["response", "--table", &table, "--ra", "7"]);
    assert_eq!(code(&o), 3);
    // l_cut beyond the table.
    let o = harvest(&["response", "--table", &table, "--l-cut", "9"]);
    assert_eq!(code(&o), 3);
    let o = harvest(&["response", "--table", dir.path().join("missing.bin").to_str().unwrap()]);
    assert_eq!(code(&o), 4);
    // Corrupted table.
    let mut bytes = fs::read(&table).unwrap();
    let n = bytes.len();
    bytes[n / 2] ^= 0xff;
    let bad = dir.path().join("bad.bin");
    fs::write(&bad, bytes).unwrap();
    let o = harvest(&["response", "--table", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("checksum"));
    // Out-of-domain sweep.
    let o = harvest(&["sweep", "--variable", "gamma", "--range", "0,4", "--points", "3", "--table", &table, "--out", dir.path().join("x.csv").to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn geodesic_output() {
    let o = harvest(&["geodesic", "--r-min", "2.5", "--r-max", "4", "--points", "4", "--branches", "primary"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[1], "branch,r_A/M,r_B/M,gamma,dt/M");
    assert_eq!(lines.len(), 6);
    assert!(lines[3].starts_with("primary,3,3,"));
    let dt: f64 = lines[3].rsplit(',').next().unwrap().parse().unwrap();
    assert!((dt - 3.0 * 3.0f64.sqrt() * std::f64::consts::PI).abs() < 1e-6 * dt);
    let o = harvest(&["geodesic", "--branches", "quaternary"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn validate_reports_one_line_per_check() {
    let o = harvest(&["validate", "--suite", "negativity"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let checks = text.lines().filter(|l| l.starts_with("PASS ") || l.starts_with("FAIL ")).count();
    assert!(checks >= 1000, "{checks}");
    assert!(!text.contains("FAIL "));
}
