use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn polygeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polygeo"))
        .args(args)
        .env_remove("POLYGEO_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn stderr_json(out: &Output) -> Value {
    assert!(!out.status.success());
    serde_json::from_slice(&out.stderr).expect("json on stderr")
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

#[test]
fn cf_digits_of_phi() {
    let v = stdout_json(&polygeo(&["cf", "--alpha", "phi", "--digits", "5"]));
    assert_eq!(v["digits"], serde_json::json!([1, 1, 1, 1, 1]));
    assert_eq!(v["q"], serde_json::json!([1, 1, 2, 3, 5]));
}

#[test]
fn cf_accepts_tagged_quadratics() {
    let v = stdout_json(&polygeo(&["cf", "--alpha", "quad:1,1,4,5", "--digits", "4"]));
    assert_eq!(v["preperiod"], serde_json::json!([0, 1]));
    assert_eq!(v["period"], serde_json::json!([4]));
}

#[test]
fn ostrowski_of_eleven() {
    let v = stdout_json(&polygeo(&["ostrowski", "--alpha", "phi", "--n", "11"]));
    assert_eq!(v["digits"], serde_json::json!([0, 0, 0, 1, 0, 1]));
    assert_eq!(v["q"], serde_json::json!([1, 1, 2, 3, 5, 8]));
    assert_eq!(v["valid"], Value::Bool(true));
}

#[test]
fn missing_surface_file_is_malformed() {
    let out = polygeo(&["trace", "--surface", "nosuch.json", "--alpha", "phi", "--n", "10"]);
    assert_eq!(stderr_json(&out)["error"], "MalformedFile");
}

#[test]
fn invalid_surface_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"squares": 2, "right": [0,1], "top": [0,1]}"#).unwrap();
    let out = polygeo(&["trace", "--surface", path.to_str().unwrap(), "--alpha", "phi", "--n", "10"]);
    assert_eq!(stderr_json(&out)["error"], "InvariantViolation");
}

#[test]
fn bad_arguments_give_machine_readable_errors() {
    for args in [
        vec!["cf"],
        vec!["cf", "--alpha", "sqrt4"],
        vec!["cf", "--alpha", "3/2"],
        vec!["rotate", "--alpha", "phi", "--n", "10", "--interval", "0.5"],
        vec!["trace", "--surface", "L3", "--alpha", "phi", "--n", "5", "--y0", "0"],
        vec!["cf", "--alpha", "phi", "--format", "svg"],
        vec!["cf", "--alpha", "phi", "--threads", "0"],
    ] {
        let out = polygeo(&args);
        let v = stderr_json(&out);
        assert_eq!(v["error"], "BadArgs", "{args:?}: {v}");
        assert!(v["detail"].is_string());
    }
}

#[test]
fn trace_csv_round_trips() {
    let out = polygeo(&["trace", "--surface", &fixture("L3.json"), "--alpha", "phi", "--y0", "1/2", "--n", "200"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,edge,height_decimal_40"));
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let rows: Vec<(u64, usize, f64)> = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            assert_eq!(f.len(), 3);
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].trim_start_matches('~').parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 200);
    let edges: Vec<usize> = rows.iter().take(10).map(|r| r.1).collect();
    assert_eq!(edges, vec![1, 0, 1, 0, 1, 0, 2, 2, 2, 1]);
    for (i, (k, _, h)) in rows.iter().enumerate() {
        assert_eq!(*k, i as u64 + 1);
        let expected = (0.5 + *k as f64 * phi).fract();
        assert!((h - expected).abs() < 1e-9, "k = {k}");
    }
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rot.csv");
    let out = polygeo(&["rotate", "--alpha", "sqrt2", "--n", "50", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 51);
    assert!(text.starts_with("k,frac_decimal_40\n1,~0.4142135623730950488016887242096980785696\n"));
}

#[test]
fn rotate_interval_counts() {
    let v = stdout_json(&polygeo(&["rotate", "--alpha", "phi", "--n", "100", "--interval", "0,1/2", "--format", "json"]));
    assert_eq!(v["visits"], 50);
}

#[test]
fn lemma1_sweeps_are_seeded() {
    let run = |seed: &str| polygeo(&["lemma1", "--alpha", "sqrt2", "--h", "12", "--len", "1/q", "--seed", seed, "--format", "csv"]).stdout;
    assert_eq!(run("5"), run("5"));
    assert_ne!(run("5"), run("6"));
    let v = stdout_json(&polygeo(&["lemma1", "--alpha", "sqrt2", "--h", "12", "--len", "1/q"]));
    assert!(v["max_count"].as_u64().unwrap() <= 3);
    let v = stdout_json(&polygeo(&["lemma1", "--alpha", "sqrt2", "--h", "12", "--len", "3/q"]));
    assert!(v["min_count"].as_u64().unwrap() >= 1);
}

#[test]
fn svg_outputs_are_standalone() {
    for args in [
        vec!["trace", "--surface", "L3", "--alpha", "phi", "--n", "3000", "--format", "svg"],
        vec!["rotate", "--alpha", "phi", "--n", "3000", "--format", "svg"],
        vec!["superdensity", "--surface", "torus", "--alpha", "phi", "--mmax", "8", "--format", "svg"],
        vec!["threshold", "--surface", "L3", "--alpha", "phi", "--n", "3000", "--eps", "1/4", "--format", "svg"],
    ] {
        let out = polygeo(&args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let svg = String::from_utf8(out.stdout).unwrap();
        assert!(svg.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\""));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(!svg.contains("href"), "{args:?} references an external asset");
    }
}

#[test]
fn threads_flag_and_env_agree() {
    let a = polygeo(&["uniformity", "--surface", "L3", "--alpha", "phi", "--n", "5000", "--C", "50", "--threads", "1"]);
    let b = Command::new(env!("CARGO_BIN_EXE_polygeo"))
        .args(["uniformity", "--surface", "L3", "--alpha", "phi", "--n", "5000", "--C", "50"])
        .env("POLYGEO_THREADS", "3")
        .output()
        .unwrap();
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn fixture_files_match_builtin_fixtures() {
    let a = polygeo(&["trace", "--surface", &fixture("torus.json"), "--alpha", "sqrt3", "--n", "100"]);
    let b = polygeo(&["trace", "--surface", "torus", "--alpha", "sqrt3", "--n", "100"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn threshold_on_l3_returns_a_certified_bracket() {
    let v = stdout_json(&polygeo(&[
        "threshold", "--surface", &fixture("L3.json"), "--alpha", "phi", "--n", "100000", "--eps", "0.1",
    ]));
    let bracket = &v["bracket"];
    assert_eq!(bracket["n"], 100000);
    let parse = |s: &Value| -> f64 {
        let s = s.as_str().unwrap();
        match s.split_once('/') {
            Some((p, q)) => p.parse::<f64>().unwrap() / q.parse::<f64>().unwrap(),
            None => s.parse().unwrap(),
        }
    };
    let hi = parse(&bracket["hi"]);
    let lo = parse(&bracket["lo"]);
    assert!(lo < hi && hi / lo <= 1.05 + 1e-12);
    let probes = bracket["probes"].as_array().unwrap();
    assert!(probes.iter().any(|p| p["passed"] == Value::Bool(true) && parse(&p["c"]) == hi));
    assert!(probes.iter().any(|p| p["passed"] == Value::Bool(false) && parse(&p["c"]) == lo));
    // the sweep table is ordered by C
    let cs: Vec<f64> = v["sweep"].as_array().unwrap().iter().map(|r| parse(&r["C"])).collect();
    assert!(cs.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn lemma3_refuses_case_b_scales() {
    let out = polygeo(&["lemma3", "--surface", "L3", "--alpha", "phi", "--n", "20000", "--C", "3/2", "--eps", "0.1", "--samples", "5"]);
    assert_eq!(stderr_json(&out)["error"], "PreconditionNotMet");
}
