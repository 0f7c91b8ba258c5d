use std::process::{Command, Output};

use serde_json::Value;

fn qes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qes")).args(args).output().expect("run qes")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid json")
}

#[test]
fn spectrum_at_zero_coupling() {
    let o = qes(&["spectrum", "--n", "2", "--c", "0"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.starts_with("n=2 k0=0 c=0\n"), "{s}");
    assert!(s.contains("E = -8, 0, 0, 8\n"), "{s}");
}

#[test]
fn spectrum_json_matches_closed_form_and_nodes() {
    let o = qes(&["spectrum", "--n", "2", "--c", "1", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["k0"], "-1/8");
    // λ² = 33 ± 4√66
    let hi = (33.0 + 4.0 * 66f64.sqrt()).sqrt();
    let lo = (33.0 - 4.0 * 66f64.sqrt()).sqrt();
    let want = [-hi, -lo, lo, hi];
    let got: Vec<f64> = v["eigenvalues"].as_array().unwrap().iter().map(|e| e.as_f64().unwrap()).collect();
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() < 1e-10, "{got:?}");
    }
    assert!((hi - 8.09297).abs() < 1e-5 && (lo - 0.70983).abs() < 1e-5);
    let nodes: Vec<Value> = v["levels"].as_array().unwrap().iter().map(|l| l["nodes"][0].clone()).collect();
    assert_eq!(nodes, vec![serde_json::json!([0, 0]), serde_json::json!([2, 2]), serde_json::json!([2, 0]), serde_json::json!([4, 2])]);
}

#[test]
fn k0_and_c_give_the_same_spectrum() {
    let a = stdout(&qes(&["spectrum", "--n", "3", "--c", "-6"]));
    let b = stdout(&qes(&["spectrum", "--n", "3", "--k0", "1/2"]));
    assert_eq!(a, b);
    assert!(a.starts_with("n=3 k0=1/2 c=-6\n"));
}

#[test]
fn spectrum_prints_char_poly_in_c() {
    let o = qes(&["spectrum", "--n", "3", "--c", "1", "--charpoly"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains(
        "p(λ) = λ^6 - (3c^2 + 248)λ^4 + (3c^4 + 240c^2 + 4800)λ^2 - (c^6 - 8c^4 - 1344c^2 + 23040)"
    ));
}

#[test]
fn charpoly_json_coefficients() {
    let v = json(&qes(&["charpoly", "--n", "2", "--format", "json"]));
    assert_eq!(v["even"], true);
    let c: Vec<&str> = v["coefficients"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert_eq!(c, ["c^4 + 32c^2", "0", "-2c^2 - 64", "0", "1"]);
}

#[test]
fn sweep_csv_layout() {
    let dir = std::env::temp_dir().join(format!("qes-sweep-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("levels.csv");
    let o = qes(&["sweep", "--n", "3", "--c-min", "0", "--c-max", "10", "--steps", "200", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(!csv.contains('\r'));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "c,E_1,E_2,E_3,E_4,E_5,E_6");
    assert_eq!(lines.len(), 201);
    assert!(lines[200].starts_with("10,"));
    // √8 at c = 0, rendered to 12 significant digits
    assert_eq!(lines[1].split(',').nth(4), Some("2.82842712475"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn sweep_modulus_branches() {
    let o = qes(&["sweep", "--n", "3", "--c-min", "0", "--c-max", "10", "--steps", "3", "--modulus"]);
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "c,absE_1,absE_2,absE_3");
    assert_eq!(lines.len(), 4);
}

#[test]
fn degeneracy_reports_c_star() {
    let v = json(&qes(&["degeneracy", "--n", "3", "--c-min", "0", "--c-max", "10", "--format", "json"]));
    let c = v["degeneracy"]["c_star"].as_f64().unwrap();
    assert!((4.0..=6.0).contains(&c), "{v}");
    assert!(v["degeneracy"]["gap"].as_f64().unwrap() < 0.05);
    let o = qes(&["degeneracy", "--n", "2", "--c-min", "1/2", "--c-max", "10"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("no degeneracy"));
}

#[test]
fn crosscheck_status_follows_tolerance() {
    // at grid 800 the E = 8 level sits 2.2e-3 off (pure h² error)
    let o = qes(&["crosscheck", "--n", "2", "--c", "0", "--grid", "800", "--box", "9/2"]);
    assert_eq!(code(&o), 2, "box takes a decimal");
    let o = qes(&["crosscheck", "--n", "2", "--c", "0", "--grid", "800", "--box", "4.5"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("status=fail"));
    let o = qes(&["crosscheck", "--n", "2", "--c", "0", "--grid", "800", "--box", "4.5", "--tol", "3e-3", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["crosscheck"]["matches"].as_array().unwrap().len(), 4);
    let o = qes(&["crosscheck", "--n", "2", "--c", "1", "--grid", "1400", "--box", "4.5", "--refine"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let ratio: f64 = stdout(&o)
        .lines()
        .find_map(|l| l.strip_prefix("error ratio="))
        .and_then(|r| r.split_whitespace().next())
        .unwrap()
        .parse()
        .unwrap();
    assert!((3.5..=4.5).contains(&ratio), "{ratio}");
}

#[test]
fn delta4_scan_has_no_counterexample() {
    let o = qes(&["delta4-scan"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).ends_with("summary points=100 counterexamples=0\n"));
}

#[test]
fn verify_outcome() {
    // the standard normalization leaves only the nine metric entries of {F,F} failing
    let o = qes(&["verify", "--n-max", "10", "--delta-max", "4"]);
    assert_eq!(code(&o), 1);
    let s = stdout(&o);
    let failing: Vec<&str> = s.lines().filter(|l| l.contains("status=fails")).collect();
    assert_eq!(failing.len(), 27);
    assert!(failing.iter().all(|l| l.starts_with("EQ19 ")));
    let o = qes(&["verify", "--n-max", "10", "--delta-max", "4", "--metric", "killing"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("failed=0"));
}

#[test]
fn injected_fault_fails() {
    let o = qes(&["verify", "--n-max", "6", "--metric", "killing", "--inject-fault", "T+"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("EQ4 "));
}

#[test]
fn verify_json_lines() {
    let v = json(&qes(&["verify", "--n-max", "4", "--delta-max", "2", "--format", "json"]));
    let rel = v["relations"].as_array().unwrap();
    assert!(rel.iter().any(|r| r["tag"] == "25" && r["status"] == "holds"));
    assert_eq!(v["reflection"].as_array().unwrap().len(), 3);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["spectrum", "--n", "2", "--c", "0.5"][..],
        &["spectrum", "--n", "2", "--c", "1", "--k0", "1"],
        &["spectrum", "--n", "2"],
        &["spectrum", "--n", "1", "--c", "1"],
        &["sweep", "--n", "2", "--c-min", "0", "--c-max", "1", "--steps", "1"],
        &["sweep", "--n", "2", "--c-min", "1", "--c-max", "0", "--steps", "5"],
        &["verify", "--inject-fault", "X"],
        &["frobnicate"],
    ] {
        assert_eq!(code(&qes(args)), 2, "{args:?}");
    }
}
