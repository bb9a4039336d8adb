use std::process::{Command, Output};

fn monictd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monictd")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn bounds_n3() {
    let o = monictd(&["bounds", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), r#"{"lower":"7/18","upper":"12/25"}"#);
}

#[test]
fn farey_21_is_empty() {
    let o = monictd(&["farey", "--nmax", "21"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "[]");
}

#[test]
fn certify_n8() {
    let o = monictd(&["certify", "--n", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in ["version", "interval", "n", "D", "verdict", "evidence", "resultants", "precision_bits"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["verdict"], "certified");
    assert_eq!(v["interval"], serde_json::json!(["0", "13/100"]));
    assert_eq!(v["D"], 15744);
    assert!(v["evidence"].as_array().unwrap().iter().all(|e| e["logsum"].as_array().unwrap().len() == 2));
}

#[test]
fn certify_n4_is_refuted() {
    let o = monictd(&["certify", "--n", "4"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["witness"]["value"], "6401");
}

#[test]
fn certify_product_and_recheck() {
    let dir = tempfile::tempdir().unwrap();
    let prod = dir.path().join("p.json");
    std::fs::write(&prod, r#"{"factors":[{"coeffs":["0","1"],"exp":7},{"coeffs":["1","-3","1"],"exp":1}]}"#).unwrap();
    let prod = prod.to_str().unwrap();
    let o = monictd(&["certify", "--product", prod, "--interval", "0,7/18", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let cert = dir.path().join("c.json");
    std::fs::write(&cert, o.stdout).unwrap();
    let o = monictd(&["certify", "--check", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = monictd(&["certify", "--product", prod, "--interval", "0,0.45", "--n", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let o = monictd(&["certify", "--product", prod, "--interval", "0,0.6", "--n", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn undecided_exit_code() {
    // With no room to escalate, the maximum x = 1/3 cannot be separated
    // from the bound at zero tolerance.
    let dir = tempfile::tempdir().unwrap();
    let prod = dir.path().join("p.json");
    std::fs::write(&prod, r#"{"factors":[{"coeffs":["0","1"],"exp":1}]}"#).unwrap();
    let o = monictd(&[
        "--precision", "64", "--max-precision", "64", "--tol", "0",
        "certify", "--product", prod.to_str().unwrap(), "--interval", "0,1/3", "--n", "3",
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(monictd(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(monictd(&[]).status.code(), Some(2));
    assert_eq!(monictd(&["bounds", "--n", "x"]).status.code(), Some(2));
    assert_eq!(monictd(&["supnorm", "--interval", "1,0", "--poly", r#"["0","1"]"#]).status.code(), Some(2));
}

#[test]
fn help_on_every_subcommand() {
    for sub in ["supnorm", "obstruction", "bounds", "profile", "search", "optimize", "certify", "farey"] {
        assert_eq!(monictd(&[sub, "--help"]).status.code(), Some(0), "{sub}");
    }
}

#[test]
fn precision_env_var() {
    let o = Command::new(env!("CARGO_BIN_EXE_monictd"))
        .env("MONICTD_PRECISION", "99999")
        .args(["bounds", "--n", "3"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_monictd"))
        .env("MONICTD_PRECISION", "99999")
        .args(["--precision", "256", "bounds", "--n", "3"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn obstruction_json() {
    let o = monictd(&["obstruction", "--interval", "0,0.303", "--dmax", "2", "--hmax", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["poly"], serde_json::json!(["-1", "4"]));
    assert_eq!(v["a_d"], "4");
    assert_eq!(v["d"], 1);
    assert!(v["value_decimal"].as_str().unwrap().starts_with("0.25"));
}

#[test]
fn search_and_optimize() {
    let o = monictd(&["search", "--interval", "0,1", "--q", r#"["-1","2"]"#, "--k", "8", "--rounds", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let factors = v["factors"].as_array().unwrap();
    assert!(factors.contains(&serde_json::json!(["0", "1"])));
    assert!(v["resultants"].as_array().unwrap().iter().all(|r| r == "1"));

    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    std::fs::write(&f, r#"[["0","1"],["-1","1"]]"#).unwrap();
    let o = monictd(&[
        "optimize", "--interval", "0,1", "--q", r#"["-1","2"]"#, "--factors", f.to_str().unwrap(), "--denom-limit", "100",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["alpha"], serde_json::json!(["1/2", "1/2"]));
    assert_eq!(v["exponents"], serde_json::json!([1, 1]));
    assert!(!v["history"].as_array().unwrap().is_empty());
}

#[test]
fn profile_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.csv");
    let o = monictd(&["profile", "--from", "0.35", "--to", "0.45", "--steps", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let mut r = csv::Reader::from_path(&out).unwrap();
    assert_eq!(r.headers().unwrap(), vec!["x_decimal", "lower_decimal", "upper_decimal", "provenance"]);
    let rows: Vec<csv::StringRecord> = r.records().map(|x| x.unwrap()).collect();
    assert_eq!(rows.len(), 3);
    for row in &rows {
        assert!(row[1].starts_with("0.333333"));
        assert!(row[2].starts_with("0.333333"));
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["search", "--interval", "0,1/4", "--q", r#"["-1","4"]"#, "--k", "8", "--rounds", "2", "--threads", "4"];
    assert_eq!(monictd(&args).stdout, monictd(&args).stdout);
}
