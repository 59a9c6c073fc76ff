use std::process::{Command, Output};

use serde_json::Value;

fn thermowig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thermowig"))
        .args(args)
        .output()
        .expect("spawn thermowig")
}

#[test]
fn eval_writes_q_major_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("added.csv");
    let out = thermowig(&[
        "eval",
        "--family",
        "added",
        "--n",
        "1",
        "--theta",
        "0.2",
        "--box",
        "4",
        "--res",
        "81",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("q,p,w"));
    let rows: Vec<[f64; 3]> = lines
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            [v[0], v[1], v[2]]
        })
        .collect();
    assert_eq!(rows.len(), 81 * 81);
    assert_eq!(rows[0][..2], [-4.0, -4.0]);
    assert_eq!(rows[1][..2], [-4.0, -3.9]);
    let origin = rows[40 * 81 + 40];
    assert_eq!(origin[..2], [0.0, 0.0]);
    // Single added photon on a weak thermal background: negative at the origin.
    assert!(origin[2] < 0.0);
}

#[test]
fn eval_json_echoes_normalized_parameters() {
    let out = thermowig(&[
        "eval", "--family", "vacuum", "--nc", "1", "--res", "3", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["command"], "eval");
    assert_eq!(v["config"]["nc"], 1.0);
    let theta = v["grid"]["state"]["thermal"]["theta"].as_f64().unwrap();
    assert!((theta - 1f64.asinh()).abs() < 1e-15);
    assert_eq!(v["grid"]["values"].as_array().unwrap().len(), 9);
}

#[test]
fn oracle_source_matches_closed_form() {
    let args = |src| {
        let out = thermowig(&[
            "eval",
            "--family",
            "subtracted",
            "--n",
            "1",
            "--theta",
            "0.5",
            "--res",
            "9",
            "--source",
            src,
        ]);
        assert_eq!(out.status.code(), Some(0));
        String::from_utf8(out.stdout).unwrap()
    };
    let closed = args("closed");
    let oracle = args("oracle");
    for (a, b) in closed.lines().zip(oracle.lines()).skip(1) {
        let w = |l: &str| l.rsplit(',').next().unwrap().parse::<f64>().unwrap();
        assert!((w(a) - w(b)).abs() < 1e-10, "{a} vs {b}");
    }
}

#[test]
fn verify_report_passes_and_echoes_config() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = thermowig(&[
        "verify",
        "--family",
        "subtracted",
        "--n",
        "2",
        "--theta",
        "0.8",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config"]["theta"], 0.8);
    assert_eq!(v["report"]["pass"], true);
    assert!(v["report"]["max_abs_err"].as_f64().unwrap() < 1e-8);
    assert!(v["report"]["tolerances"]["pointwise"].is_number());
}

#[test]
fn negativity_of_number_state_limit() {
    let out = thermowig(&[
        "negativity",
        "--family",
        "added",
        "--n",
        "1",
        "--theta",
        "0.3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let vol: f64 = String::from_utf8(out.stdout)
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!(vol > 0.0 && vol < 2.0 * ((-0.5f64).exp() - 0.5));
}

#[test]
fn limits_pass() {
    let out = thermowig(&["limits", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert!(!v["checks"].as_array().unwrap().is_empty());
}

#[test]
fn scan_theta_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let out = thermowig(&[
        "scan-theta",
        "--family",
        "subtracted",
        "--n",
        "1",
        "--steps",
        "4",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some("theta,w0,negativity_volume"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn thermal_parameterizations_are_exclusive() {
    for args in [
        &["eval", "--family", "vacuum", "--theta", "0.5", "--nc", "1"][..],
        &[
            "eval", "--family", "vacuum", "--nc", "1", "--omega", "1", "--kt", "1",
        ],
        &["eval", "--family", "vacuum", "--omega", "1"],
        &["eval", "--family", "vacuum"],
    ] {
        assert_eq!(thermowig(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn invalid_parameters_are_usage_errors() {
    for args in [
        &["eval", "--family", "added", "--theta", "-0.1"][..],
        &["eval", "--family", "added", "--theta", "0.3", "--n", "99"],
        &["eval", "--family", "added", "--theta", "0.3", "--res", "1"],
        &["eval", "--family", "subtracted", "--n", "1", "--theta", "0"],
        &["eval", "--family", "squeezed", "--theta", "0.3"],
        &[
            "scan-theta",
            "--family",
            "added",
            "--theta-min",
            "2",
            "--theta-max",
            "1",
        ],
    ] {
        let out = thermowig(args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn temperature_input_normalizes_to_theta() {
    let by_temp = thermowig(&[
        "eval", "--family", "number", "--n", "2", "--omega", "1", "--kt", "1", "--res", "5",
    ]);
    let by_theta = thermowig(&[
        "eval",
        "--family",
        "number",
        "--n",
        "2",
        "--theta",
        "0.7034145568736476",
        "--res",
        "5",
    ]);
    assert_eq!(by_temp.status.code(), Some(0));
    let w = |o: &Output| -> Vec<f64> {
        String::from_utf8_lossy(&o.stdout)
            .lines()
            .skip(1)
            .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
            .collect()
    };
    for (a, b) in w(&by_temp).iter().zip(w(&by_theta)) {
        assert!((a - b).abs() < 1e-14);
    }
}
