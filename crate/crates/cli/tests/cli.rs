use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn beamsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_beamsym"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = beamsym(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn schema(name: &str) -> jsonschema::Validator {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas");
    let load = |f: &str| -> Value {
        serde_json::from_str(&std::fs::read_to_string(dir.join(f)).unwrap()).unwrap()
    };
    let registry = jsonschema::Registry::new()
        .add(
            "https://beamsym.local/schemas/common.schema.json",
            load("common.schema.json"),
        )
        .unwrap()
        .prepare()
        .unwrap();
    jsonschema::options()
        .with_registry(&registry)
        .build(&load(&format!("{name}.schema.json")))
        .unwrap()
}

fn assert_valid(name: &str, v: &Value) {
    let s = schema(name);
    let errs: Vec<String> = s.iter_errors(v).map(|e| e.to_string()).collect();
    assert!(errs.is_empty(), "{name}: {errs:?}");
}

fn num(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn classify_x3_is_last_equal_class() {
    let v = json_ok(&[
        "classify",
        "--case",
        "equal",
        "-k",
        "1",
        "--rho1",
        "1",
        "--rho2",
        "1",
        "-b",
        "1",
        "--element",
        "0,0,1,0,0,0,0,0",
    ]);
    assert_eq!(v["class"], "X14");
    assert_valid("classify", &v);
}

#[test]
fn classify_x1_free_params() {
    let v = json_ok(&["classify", "--element", "1,2,0,0,0,4,0,0"]);
    assert_eq!(v["class"], "X1");
    assert_eq!(num(&v["free_params"]["alpha"]), 2.0);
    assert_eq!(num(&v["free_params"]["beta"]), 4.0);
}

#[test]
fn classify_rejects_bad_elements() {
    let out = beamsym(&["classify", "--element", "0,0,0,0,0,0,0,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("zero"));
    let out = beamsym(&["classify", "--element", "1,2,3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`element`"));
}

#[test]
fn negative_coefficients_parse() {
    let v = json_ok(&[
        "classify",
        "--case",
        "greater",
        "--lambda",
        "0.5",
        "--element",
        "-1,0.5,0,0,0,-2,0,0",
    ]);
    assert_valid("classify", &v);
}

#[test]
fn adjoint_identity_and_entry() {
    let v = json_ok(&["adjoint"]);
    for (i, row) in v["matrix"].as_array().unwrap().iter().enumerate() {
        for (j, x) in row.as_array().unwrap().iter().enumerate() {
            assert_eq!(num(x), if i == j { 1.0 } else { 0.0 });
        }
    }
    let v = json_ok(&["adjoint", "--case", "equal", "--eps", "0,0,0,1,0,0,0,0"]);
    assert_eq!(num(&v["matrix"][0][2]), -1.0);
    assert!(num(&v["product_max_diff"]) < 1e-12);
    assert_valid("adjoint", &v);
}

#[test]
fn adjoint_csv() {
    let out = beamsym(&["adjoint", "--eps", "0,0,0,1,0,0,0,0", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 8);
    assert_eq!(rows[0][2], -1.0);
}

#[test]
fn floats_carry_17_digits() {
    let out = beamsym(&[
        "adjoint",
        "--case",
        "greater",
        "--eps",
        "0.3,0,0,0,0,0,0.2,0",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let re_ok = text
        .lines()
        .filter(|l| {
            l.contains('e')
                && l.trim_start()
                    .starts_with(|c: char| c == '-' || c.is_ascii_digit())
        })
        .all(|l| {
            let m = l.trim().trim_end_matches(',').trim_start_matches('-');
            m.split('e').next().unwrap().len() == 18
        });
    assert!(re_ok, "{text}");
}

#[test]
fn verify_example_one() {
    let v = json_ok(&["verify", "--example", "1"]);
    assert_eq!(v["verdict"]["corrected"]["eq1"]["pass"], true);
    assert_eq!(v["verdict"]["corrected"]["eq2"]["pass"], true);
    assert_eq!(v["study"]["reports"].as_array().unwrap().len(), 3);
    assert_valid("verify", &v);
}

#[test]
fn verify_base_with_translation() {
    let v = json_ok(&["verify", "--base", "line", "--eps", "0.2,-0.3,0,0,0,0,0,0"]);
    assert_eq!(v["final_order"]["kind"], "exact");
    assert_valid("verify", &v);
}

#[test]
fn transform_then_verify_grid() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("g.csv");
    let c = csv.to_str().unwrap();
    let t = json_ok(&[
        "transform",
        "--case",
        "less",
        "--eps",
        "0.1,0.2,0.3,0,0,0,0,0",
        "--grid",
        "31,21",
        "--out",
        c,
    ]);
    assert_valid("transform", &t);
    let v = json_ok(&["verify", "--case", "less", "--input", c]);
    assert_eq!(v["residual"], t["residual"]);
    assert!(num(&v["residual"]["eq1_max"]) < 1e-9);
    assert_valid("verify", &v);
}

#[test]
fn zero_grid_has_zero_residual() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("zero.csv");
    let w = beamsym::Window::unit();
    let g = beamsym::GridSolution::new(w, 11, 11, vec![0.0; 121], vec![0.0; 121]).unwrap();
    g.write_csv(&csv).unwrap();
    let v = json_ok(&["verify", "--input", csv.to_str().unwrap()]);
    for k in ["eq1_max", "eq1_l2", "eq2_max", "eq2_l2"] {
        assert_eq!(num(&v["residual"][k]), 0.0);
    }
}

#[test]
fn reduce_equal_f_zero_ics_is_exact() {
    let v = json_ok(&[
        "reduce", "--row", "equal/F", "--ics", "0,0,0,0", "--alpha", "0.6", "--beta", "0.5",
        "--gamma", "-0.3",
    ]);
    assert_eq!(v["final_order"]["kind"], "exact");
    assert_eq!(num(&v["report"]["reduced_max"]), 0.0);
    assert_valid("reduce", &v);
}

#[test]
fn reduce_singular_row_is_numerical_failure() {
    let out = beamsym(&["reduce", "--row", "less/A", "--alpha", "1", "--beta", "0.5"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("singular"));
}

#[test]
fn reduce_less_c() {
    let v = json_ok(&[
        "reduce", "--row", "less/C", "--alpha", "0.4", "--beta", "0.7", "--gamma", "0.2", "--grid",
        "101,101",
    ]);
    let q = num(&v["final_order"]["value"]);
    assert!((1.8..=2.2).contains(&q), "{q}");
    assert_valid("reduce", &v);
}

#[test]
fn reduce_row_case_conflict() {
    let out = beamsym(&[
        "reduce", "--row", "less/C", "--case", "equal", "--alpha", "0.4", "--beta", "0.7",
        "--gamma", "0.2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn catalog_lists_all_rows() {
    let v = json_ok(&["catalog"]);
    assert_valid("catalog", &v);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"case": "greater", "lambda": 2.0, "element": [0, 0, 1, 0, 0, 0, 0, 0], "out": "report.json"}"#).unwrap();
    let out = beamsym(&[
        "classify",
        "--config",
        cfg.to_str().unwrap(),
        "--lambda",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    assert_eq!(v["family"], "greater");
    assert_eq!(num(&v["params"]["case_kind"]["lambda"]), 0.5);
    std::fs::write(&cfg, r#"{"case": "sideways"}"#).unwrap();
    assert_eq!(
        beamsym(&["classify", "--config", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn invalid_params_exit_2() {
    for args in [
        &["classify", "--rho1", "-1", "--element", "1,0,0,0,0,0,0,0"][..],
        &[
            "classify",
            "--case",
            "less",
            "--mu",
            "3",
            "--element",
            "1,0,0,0,0,0,0,0",
        ][..],
        &["transform", "--window", "0,1,1,0"][..],
        &["verify", "--base", "line", "--grid", "21,31"][..],
    ] {
        let out = beamsym(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn deterministic_output() {
    let a = beamsym(&[
        "reduce",
        "--row",
        "greater/C",
        "--alpha",
        "0.4",
        "--beta",
        "0.7",
        "--gamma",
        "0.2",
    ]);
    let b = beamsym(&[
        "reduce",
        "--row",
        "greater/C",
        "--alpha",
        "0.4",
        "--beta",
        "0.7",
        "--gamma",
        "0.2",
    ]);
    assert_eq!(a.stdout, b.stdout);
}
