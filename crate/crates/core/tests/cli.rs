use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn resurge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_resurge"))
        .args(args)
        .output()
        .expect("spawn resurge")
}

fn ok_json(args: &[&str]) -> Value {
    let out = resurge(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn schema(name: &str) -> jsonschema::Validator {
    let path: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "..",
        "..",
        "docs",
        "schema",
        &format!("{name}.schema.json"),
    ]
    .iter()
    .collect();
    let text = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).expect("valid schema")
}

fn assert_conforms(name: &str, v: &Value) {
    let errors: Vec<String> = schema(name).iter_errors(v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}\n{v:#}");
}

fn pair(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn coeffs_are_exact_strings() {
    let v = ok_json(&["coeffs", "--kmax", "7"]);
    assert_conforms("coeffs", &v);
    let a: Vec<&str> = v["a"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap())
        .collect();
    assert_eq!(
        &a[..7],
        [
            "1",
            "1/3",
            "1/36",
            "-1/270",
            "1/4320",
            "1/17010",
            "-139/5443200"
        ]
    );
    assert_eq!(v["exp_identity_holds"], true);
    assert!(v["exp_residual"]
        .as_array()
        .unwrap()
        .iter()
        .all(|x| x == "0"));
}

#[test]
fn resum_matches_oracle() {
    for object in ["lambda32", "chi", "mu"] {
        let v = ok_json(&["resum", object, "--z", "3+1j"]);
        assert_conforms("resum", &v);
        assert!(v["rel_error"].as_f64().unwrap() < 1e-10, "{object}: {v}");
    }
    let v = ok_json(&["resum", "realmajor-c", "--z", "4-2j", "--c", "0.25"]);
    assert_conforms("resum", &v);
    assert!(v["rel_error"].as_f64().unwrap() < 1e-8);
}

#[test]
fn polar_and_rectangular_input_agree() {
    let a = ok_json(&["resum", "lambda32", "--z", "2@0.5"]);
    let b = ok_json(&[
        "resum",
        "lambda32",
        "--z",
        &format!("{}+{}j", 2.0 * 0.5f64.cos(), 2.0 * 0.5f64.sin()),
    ]);
    let (va, vb) = (pair(&a["value"]), pair(&b["value"]));
    assert!((va.0 - vb.0).abs() + (va.1 - vb.1).abs() < 1e-14);
}

#[test]
fn output_is_deterministic() {
    let args = ["realmajor", "--xi", "1+1j"];
    assert_eq!(resurge(&args).stdout, resurge(&args).stdout);
}

#[test]
fn realmajor_records_carry_qpath_nodes() {
    for args in [
        vec!["realmajor", "--xi", "0.5"],
        vec!["realmajor", "--xi", "1", "--kernel", "nu"],
        vec!["realmajor", "--xi", "1@2", "--path", "1,1@1"],
        vec!["realmajor", "--xi", "0.05", "--kernel", "lambda1-contour"],
    ] {
        let v = ok_json(&args);
        assert_conforms("laplace", &v);
        assert!(v["qpath_nodes"].as_u64().unwrap() > 0, "{args:?}");
    }
}

#[test]
fn continuation_matches_direct_evaluation() {
    let direct = ok_json(&["realmajor", "--xi", "1@1"]);
    let continued = ok_json(&["realmajor", "--xi", "1@1", "--path", "1,1@0.5"]);
    let (a, b) = (pair(&direct["value"]), pair(&continued["value"]));
    assert!((a.0 - b.0).hypot(a.1 - b.1) < 1e-9);
}

#[test]
fn stokes_reports_small_residuals() {
    let v = ok_json(&["stokes", "--z", "2@-0.7853981633974483"]);
    assert_conforms("stokes", &v);
    assert!(v["identity_residual"].as_f64().unwrap() < 1e-6);
    assert!(v["reflection_residual"].as_f64().unwrap() < 1e-6);
}

#[test]
fn alien_ratios() {
    let v = ok_json(&["alien", "--m", "2", "--operator", "delta"]);
    assert_conforms("alien", &v);
    let (re, im) = pair(&v["ratio"]);
    assert!((re - 0.5).abs() < 1e-6 && im.abs() < 1e-6);
    let v = ok_json(&["alien", "--m", "-1", "--operator", "plus", "--kind", "chi"]);
    assert_conforms("alien", &v);
}

#[test]
fn alien_grid_csv() {
    let out = resurge(&[
        "alien",
        "--grid",
        "3",
        "--grid-n",
        "4",
        "--sheet-min",
        "-4",
        "--sheet-max",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("re_xi,im_xi,sheet_theta,re_val,im_val,kind")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 16);
    for r in rows {
        assert_eq!(r.len(), 6);
        let theta: f64 = r[2].parse().unwrap();
        assert!((-4.0..=4.0).contains(&theta));
        for x in &r[..5] {
            x.parse::<f64>().unwrap();
        }
    }
}

#[test]
fn csv_format_flattens_pairs() {
    let out = resurge(&["--format", "csv", "resum", "mu", "--z", "5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    for col in [
        "z_re",
        "z_im",
        "theta",
        "value_re",
        "value_im",
        "est_error",
        "panels",
    ] {
        assert!(header.contains(&col), "{header:?}");
    }
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("coeffs.json");
    let out = resurge(&["--out", path.to_str().unwrap(), "coeffs", "--kmax", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_conforms("coeffs", &v);
}

#[test]
fn verify_fast_passes() {
    let v = ok_json(&["verify", "fast"]);
    assert_conforms("verify", &v);
    assert_eq!(v["checks"].as_array().unwrap().len(), 14);
    assert_eq!(v["passed"], true);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["resum", "lambda32", "--z", "abc"],
        vec!["frobnicate"],
        vec!["--tol", "-1", "coeffs"],
        vec!["stokes", "--z", "2"],
        vec!["--format", "xml", "coeffs"],
    ] {
        assert_eq!(resurge(&args).status.code(), Some(2), "{args:?}");
    }
    let out = resurge(&["resum", "lambda32", "--z", "3@2", "--theta", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("half-plane"));
}

#[test]
fn numerical_failures_exit_3() {
    let out = resurge(&["resum", "lambda32", "--z", "0.02"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tail bound"));
}
