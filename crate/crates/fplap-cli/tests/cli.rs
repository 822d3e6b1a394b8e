//! End-to-end checks of the binary: determinism, JSON round-trip,
//! CSV shape, exit codes, and config-file precedence.

use std::process::{Command, Output};

fn fplap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fplap"))
        .args(args)
        .output()
        .expect("failed to launch fplap")
}

#[test]
fn eval_reports_pi() {
    let out = fplap(&["eval", "--n", "1", "--s", "0.5", "--p", "2", "--x", "0.3"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let value = v["rows"][0]["value"].as_f64().unwrap();
    assert!((value - std::f64::consts::PI).abs() < 1e-8);
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = ["sweep", "--grid", "0:0.8:5", "--n", "1", "--s", "0.5", "--p", "3"];
    let a = fplap(&args);
    let b = fplap(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    // and with a worker pool: rows still in grid order, same bytes
    let mut with_jobs = args.to_vec();
    with_jobs.extend_from_slice(&["--jobs", "3"]);
    let c = fplap(&with_jobs);
    let cv: serde_json::Value = serde_json::from_slice(&c.stdout).unwrap();
    let av: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(av["rows"], cv["rows"]);
}

#[test]
fn json_round_trips_byte_identically() {
    let out = fplap(&["eval", "--n", "1", "--s", "0.5", "--p", "4", "--x", "0.5"]);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // re-serialize through the same writer the binary uses
    let mut buf = Vec::new();
    reserialize(&parsed, &mut buf, 0);
    buf.push(b'\n');
    assert_eq!(out.stdout, buf);
}

// mirror of the binary's writer, kept in sync by this test
fn reserialize(v: &serde_json::Value, out: &mut Vec<u8>, indent: usize) {
    use serde_json::Value;
    use std::io::Write;
    let pad = "  ".repeat(indent);
    let pad_in = "  ".repeat(indent + 1);
    match v {
        Value::Null => write!(out, "null").unwrap(),
        Value::Bool(b) => write!(out, "{b}").unwrap(),
        Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                write!(out, "{u}").unwrap();
            } else if let Some(i) = n.as_i64() {
                write!(out, "{i}").unwrap();
            } else {
                write!(out, "{:.16e}", n.as_f64().unwrap()).unwrap();
            }
        }
        Value::String(s) => write!(out, "{}", Value::String(s.clone())).unwrap(),
        Value::Array(items) => {
            if items.is_empty() {
                write!(out, "[]").unwrap();
                return;
            }
            writeln!(out, "[").unwrap();
            for (i, item) in items.iter().enumerate() {
                write!(out, "{pad_in}").unwrap();
                reserialize(item, out, indent + 1);
                writeln!(out, "{}", if i + 1 < items.len() { "," } else { "" }).unwrap();
            }
            write!(out, "{pad}]").unwrap();
        }
        Value::Object(map) => {
            if map.is_empty() {
                write!(out, "{{}}").unwrap();
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            writeln!(out, "{{").unwrap();
            for (i, k) in keys.iter().enumerate() {
                write!(out, "{pad_in}{}: ", serde_json::Value::String((*k).clone())).unwrap();
                reserialize(&map[*k], out, indent + 1);
                writeln!(out, "{}", if i + 1 < keys.len() { "," } else { "" }).unwrap();
            }
            write!(out, "{pad}}}").unwrap();
        }
    }
}

#[test]
fn csv_has_header_and_lf_endings() {
    let out = fplap(&[
        "sweep", "--grid", "0.1:0.5:3", "--n", "1", "--s", "0.5", "--p", "2", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,value,err_est,n_evals,status");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].ends_with(",ok"));
}

#[test]
fn exit_codes() {
    // validation: x outside the open support
    let out = fplap(&["eval", "--n", "1", "--s", "0.5", "--p", "2", "--x", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("outside open support"));
    // usage: unknown flag
    let out = fplap(&["eval", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    // validation: bad s
    let out = fplap(&["eval", "--n", "1", "--s", "1.5", "--p", "2", "--x", "0.3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fractions_are_exact() {
    let out = fplap(&["eval", "--n", "1", "--s", "1/2", "--p", "2", "--x", "1/4"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["params"]["s"].as_f64().unwrap(), 0.5);
    assert_eq!(v["rows"][0]["x"].as_f64().unwrap(), 0.25);
}

#[test]
fn config_file_precedence() {
    let dir = std::env::temp_dir().join(format!("fplap-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg_path = dir.join("cfg.json");
    std::fs::write(&cfg_path, r#"{"s": 0.25, "p": 3, "n": 1, "format": "csv"}"#).unwrap();
    // config supplies s, p, n, format
    let out = fplap(&["eval", "--x", "0.2", "--config", cfg_path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("x,value"), "config format not applied: {text}");
    // explicit flag beats the config value
    let out = fplap(&[
        "eval",
        "--x",
        "0.2",
        "--config",
        cfg_path.to_str().unwrap(),
        "--format",
        "json",
        "--s",
        "0.5",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["params"]["s"].as_f64().unwrap(), 0.5);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn output_file_and_io_error() {
    let dir = std::env::temp_dir().join(format!("fplap-cli-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = fplap(&[
        "eval", "--n", "1", "--s", "0.5", "--p", "2", "--x", "0.1", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v["rows"][0]["value"].as_f64().is_some());
    // unwritable path -> exit 4
    let out = fplap(&[
        "eval", "--n", "1", "--s", "0.5", "--p", "2", "--x", "0.1", "--out",
        "/nonexistent-dir/report.json",
    ]);
    assert_eq!(out.status.code(), Some(4));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn identity_command_residual() {
    let out = fplap(&["identity", "--s", "0.5", "--p", "3"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["summary"]["residual"].as_f64().unwrap().abs() <= 1e-6);
}

#[test]
fn singfit_and_scaling_commands() {
    let out = fplap(&["singfit", "--n", "1", "--s", "0.5", "--p", "2", "--jmax", "10"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["summary"]["b"].as_f64().unwrap().abs() < 1e-7);
    let out = fplap(&[
        "scaling", "--n", "1", "--s", "0.5", "--p", "3", "--rho", "2", "--x", "0.8",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["summary"]["relative_error"].as_f64().unwrap() < 1e-4);
}
