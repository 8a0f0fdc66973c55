use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn radshock(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radshock"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr_code(out: &Output) -> String {
    let v: Value = serde_json::from_slice(&out.stderr).expect("json error on stderr");
    v["error"]["code"].as_str().unwrap().to_string()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn solve_to(dir: &Path, name: &str, extra: &[&str]) -> (Output, std::path::PathBuf) {
    let out = dir.join(name);
    let mut args = vec!["solve", "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    (radshock(&args), out)
}

#[test]
fn solve_writes_profile_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let (o, csv) = solve_to(dir.path(), "d10.csv", &["--Uc", "10", "--delta", "1.0"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = read_json(&dir.path().join("d10.summary.json"));
    assert_eq!(summary["connection"]["type"], "jump");
    assert_eq!(summary["spike"]["location"], "at_jump");
    assert_eq!(summary["residual_ok"], true);
    assert_eq!(summary["regime"]["delta_jump"].as_f64().unwrap(), 0.8);

    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.by_ref().take_while(|l| l.starts_with('#')).collect();
    assert!(header.contains(&"# Uc = 10"));
    assert!(header.contains(&"# delta = 1"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert!(text.contains("\nxi,x,y,rho,u,theta,n,m\n"));
    // the jump is two consecutive rows at the same xi
    let equal: Vec<usize> = (1..rows.len()).filter(|&i| rows[i][0] == rows[i - 1][0]).collect();
    assert_eq!(equal.len(), 1);
    let i = equal[0];
    assert_eq!(rows[i][0], 0.0);
    assert!(rows[i][5] != rows[i - 1][5], "theta jumps");
    assert_eq!(rows[i][6], rows[i - 1][6], "n is continuous");
}

#[test]
fn continuous_case_reports_smooth_spike() {
    let dir = tempfile::tempdir().unwrap();
    let (o, _) = solve_to(dir.path(), "c.csv", &["--Uc", "100", "--delta", "0.6"]);
    assert!(o.status.success());
    let s = read_json(&dir.path().join("c.summary.json"));
    assert_eq!(s["connection"]["type"], "continuous");
    assert_eq!(s["spike"]["location"], "smooth_interior");
    assert!(s["jump"].is_null());
}

#[test]
fn inadmissible_delta_exits_2_without_writing() {
    let dir = tempfile::tempdir().unwrap();
    let (o, csv) = solve_to(dir.path(), "bad.csv", &["--Uc", "10", "--delta", "1.3"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_code(&o), "InadmissibleDelta");
    assert!(!csv.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn unsupported_regime_exits_4() {
    // g = u³ has g'(0) = 0 at the midpoint of u± = ±1
    let o = radshock(&["solve", "--model", "hamer", "--u-minus", "1", "--u-plus", "-1", "--alpha", "3"]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(stderr_code(&o), "UnsupportedRegime");
}

#[test]
fn validation_failures_exit_2() {
    for args in [
        &["solve", "--Uc", "10"][..],
        &["solve", "--model", "hamer", "--u-minus", "1", "--u-plus", "-1", "--Uc", "3"],
        &["solve", "--Uc", "ten", "--delta", "0.5"],
        &["solve", "--Uc", "10", "--delta", "0.5", "--format", "xml"],
        &["solve", "--Uc", "10", "--delta", "0.5", "--tol-int", "0.5"],
        &["solve", "--model", "hamer", "--u-minus", "-1", "--u-plus", "1"],
        &["solve", "--bogus", "1"],
        &["classify", "--model", "hamer", "--u-minus", "1", "--u-plus", "-1", "--alpha", "1.5"],
    ] {
        let o = radshock(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        stderr_code(&o);
    }
}

#[test]
fn classify_reports_thresholds() {
    let o = radshock(&["classify", "--Uc", "10", "--delta", "0.6"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["delta_spike"].as_f64().unwrap() - 0.4).abs() < 1e-15);
    assert!((v["delta_jump"].as_f64().unwrap() - 0.8).abs() < 1e-15);
    assert!((v["delta_max"].as_f64().unwrap() - 1.2).abs() < 1e-15);
    assert_eq!(v["jump_predicted"], true);

    let o = radshock(&["classify", "--gamma", "2.5", "--Uc", "10", "--delta", "0.75"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["delta_jump"].as_f64().unwrap() > v["delta_max"].as_f64().unwrap());
    assert_eq!(v["forced_jump_by_g0"], false);

    let o = radshock(&["classify", "--model", "hamer", "--u-minus", "1", "--u-plus", "-1", "--alpha", "1"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["jump_predicted"], true);
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# test\nUc = 10\ndelta = 0.6\nformat = json\n").unwrap();
    let base = radshock(&["classify", "--config", cfg.to_str().unwrap()]);
    let over = radshock(&["classify", "--config", cfg.to_str().unwrap(), "--delta", "0.3"]);
    let b: Value = serde_json::from_slice(&base.stdout).unwrap();
    let o: Value = serde_json::from_slice(&over.stdout).unwrap();
    assert_eq!(b["delta"].as_f64(), Some(0.6));
    assert_eq!(o["delta"].as_f64(), Some(0.3));

    std::fs::write(&cfg, "Uc = 10\nunknown = 3\n").unwrap();
    let o = radshock(&["classify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_code(&o), "UnknownKey");
}

#[test]
fn committed_config_solves() {
    let cfg = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/experiments.cfg");
    let o = radshock(&["classify", "--config", cfg, "--Uc", "10", "--delta", "0.6"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["G_prime_at_0"].as_f64().unwrap() - 20.0 / 17.0).abs() < 1e-12);
}

#[test]
fn csv_rows_round_trip_through_json() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--Uc", "50", "--delta", "1.0"];
    let (o, csv) = solve_to(dir.path(), "p.csv", &args);
    assert!(o.status.success());
    let mut jargs = args.to_vec();
    jargs.extend_from_slice(&["--format", "json"]);
    let (o, json) = solve_to(dir.path(), "p.json", &jargs);
    assert!(o.status.success());
    let doc = read_json(&json);
    let samples = doc["samples"].as_array().unwrap();
    let text = std::fs::read_to_string(csv).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), samples.len());
    for (row, s) in rows.iter().zip(samples) {
        for (cell, v) in row.split(',').zip(s.as_array().unwrap()) {
            let c: f64 = cell.parse().unwrap();
            assert_eq!(c.to_bits(), v.as_f64().unwrap().to_bits());
        }
    }
    assert_eq!(doc["connection"], read_json(&dir.path().join("p.summary.json"))["connection"]);
}

#[test]
fn repeated_solves_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (_, a) = solve_to(dir.path(), "a.csv", &["--Uc", "10", "--delta", "0.6"]);
    let (_, b) = solve_to(dir.path(), "b.csv", &["--Uc", "10", "--delta", "0.6"]);
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

fn sweep(args: &[&str]) -> Vec<Vec<String>> {
    let o = radshock(&[&["sweep"][..], args].concat());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn column(table: &[Vec<String>], name: &str) -> Vec<String> {
    let i = table[0].iter().position(|h| h == name).unwrap();
    table[1..].iter().map(|r| r[i].clone()).collect()
}

#[test]
fn delta_sweep_locates_transitions() {
    // step 0.05 from 0.05 to 1.15
    let t = sweep(&["--Uc", "10", "--axis1", "delta:0.05:1.15:23"]);
    let delta: Vec<f64> = column(&t, "delta").iter().map(|c| c.parse().unwrap()).collect();
    let regime = column(&t, "solved_regime");
    let onset = regime.iter().position(|r| r.starts_with("nonmonotone")).unwrap();
    assert!(delta[onset - 1] <= 0.4 + 1e-12 && delta[onset] > 0.4);
    let forced = column(&t, "forced_jump_by_g0");
    let first = forced.iter().position(|f| f == "true").unwrap();
    assert!((delta[first] - 0.8).abs() < 1e-12);
    assert!(column(&t, "error").iter().all(String::is_empty));
}

#[test]
fn uc_sweep_goes_from_jump_to_continuous() {
    let t = sweep(&["--delta", "0.6", "--axis1", "Uc:10:100:10"]);
    let conn = column(&t, "connection");
    assert_eq!(conn[0], "jump");
    // U_c = 50 and beyond
    assert!(conn[4..].iter().all(|c| c == "continuous"), "{conn:?}");
}

#[test]
fn sweep_order_is_independent_of_workers() {
    let args = ["--axis1", "delta:0.3:1.1:5", "--axis2", "Uc:10:60:3"];
    let one = radshock(&[&["sweep", "--workers", "1"][..], &args].concat());
    let four = radshock(&[&["sweep", "--workers", "4"][..], &args].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    let t = sweep(&args);
    assert_eq!(t.len(), 16);
    assert_eq!(&t[0][..2], ["delta", "Uc"]);
    // axis-major: axis2 varies fastest
    assert_eq!(t[1][1], t[4][1]);
    assert_eq!(t[1][0], t[3][0]);
}

#[test]
fn sweep_records_point_failures_in_row() {
    // rho-minus <= 0 fails on part of the grid only
    let t = sweep(&["--Uc", "10", "--delta", "0.6", "--axis1", "rho-minus:-0.1:0.1:3"]);
    let err = column(&t, "error");
    assert_eq!(err[0], "NonPositiveInput");
    assert!(err[2].is_empty());
}

#[test]
fn degenerate_sweeps_are_rejected() {
    for args in [
        &["sweep", "--Uc", "10", "--axis1", "delta:0.5:0.5:1"][..],
        &["sweep", "--Uc", "10", "--axis1", "delta:0.1:1.3:5"],
        &["sweep", "--Uc", "10", "--axis1", "delta:0.1:0.5"],
        &["sweep", "--delta", "0.5", "--axis1", "Uc:10:20:3", "--axis2", "Uc:10:20:3"],
    ] {
        let o = radshock(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn json_sweep_matches_the_csv_cells() {
    let args = ["--Uc", "10", "--axis1", "delta:0.3:1.1:3"];
    let csv = sweep(&args);
    let o = radshock(&[&["sweep", "--format", "json"][..], &args].concat());
    assert!(o.status.success());
    let rows: Vec<Value> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rows.len(), csv.len() - 1);
    for (row, cells) in rows.iter().zip(&csv[1..]) {
        for (name, cell) in csv[0].iter().zip(cells) {
            let v = &row[name.as_str()];
            match cell.parse::<f64>() {
                _ if cell.is_empty() => assert!(v.is_null(), "{name}"),
                Ok(x) => assert_eq!(v.as_f64().unwrap().to_bits(), x.to_bits(), "{name}"),
                Err(_) if cell == "true" || cell == "false" => assert_eq!(v.as_bool().unwrap().to_string(), *cell),
                Err(_) => assert_eq!(v.as_str().unwrap(), cell),
            }
        }
    }
}
