use std::process::{Command, Output};

use xxcorr_cli::table::Table;

fn xxcorr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xxcorr")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn ring_of_ten_product_against_ed() {
    let o = xxcorr(&["correlator", "--L", "10", "--x-max", "9", "--routes", "product,ed"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let table = Table::from_csv(&stdout(&o)).unwrap();
    assert_eq!(table.rows.len(), 9);
    assert!(table.rows.iter().all(|r| r.relerr[0] <= 1e-10));
    let xs: Vec<usize> = table.rows.iter().map(|r| r.x).collect();
    assert_eq!(xs, (1..=9).collect::<Vec<_>>());
}

#[test]
fn infinite_chain_relerr_falls_like_inverse_square() {
    let o = xxcorr(&["correlator", "--L", "inf", "--x-max", "50", "--routes", "product,asym"]);
    assert!(o.status.success());
    let table = Table::from_csv(&stdout(&o)).unwrap();
    let even: Vec<(usize, f64)> =
        table.rows.iter().filter(|r| r.x % 2 == 0).map(|r| (r.x, r.relerr[0])).collect();
    assert!(even.windows(2).all(|w| w[1].1 < w[0].1));
    let at = |x: usize| even.iter().find(|e| e.0 == x).unwrap().1;
    let ratio = at(20) / at(40);
    assert!((3.6..4.4).contains(&ratio), "ratio {ratio}");
}

#[test]
fn inadmissible_ring_is_rejected() {
    let o = xxcorr(&["correlator", "--L", "7", "--x-max", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("L must satisfy L/2 odd"));
    let o = xxcorr(&["correlator", "--L", "12", "--x-max", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn distance_out_of_range_is_rejected() {
    for x in ["0", "10"] {
        let o = xxcorr(&["correlator", "--L", "10", "--x-max", x]);
        assert_eq!(o.status.code(), Some(2), "x-max {x}");
    }
}

#[test]
fn ed_is_dropped_with_a_warning_on_large_rings() {
    let o = xxcorr(&["correlator", "--L", "inf", "--x-max", "5", "--routes", "det,product,ed"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("warning: ED route disabled"));
    assert!(!stdout(&o).contains("route:ed"));
    let o = xxcorr(&["correlator", "--L", "22", "--x-max", "5", "--routes", "product,ed"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_correlator_document() {
    let o = xxcorr(&[
        "correlator", "--L", "14", "--x-max", "13", "--routes", "det,product,ed,asym", "--format",
        "json",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["meta"]["lattice"], 14);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 13);
    for row in rows {
        assert!(row["relerr"]["det-ed"].as_f64().unwrap() <= 1e-10);
        assert!(row["relerr"]["product-ed"].as_f64().unwrap() <= 1e-10);
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.csv");
    let o = xxcorr(&[
        "correlator", "--L", "inf", "--x-max", "4", "--routes", "det,product", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("x,route:det,route:product,relerr:det-product\n"));
}

#[test]
fn constants_default_run() {
    let o = xxcorr(&["constants", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let c = &doc["constants"];
    assert_eq!(format!("{:.6}", c["amplitudeHalf"].as_f64().unwrap()), "0.147088");
    assert_eq!(format!("{:.6}", c["glaisherA"].as_f64().unwrap()), "1.282427");
    assert!(c["pairwiseMaxDev"].as_f64().unwrap() <= 1e-6);
    assert!(stderr(&o).contains("pairwiseMaxDev"));
}

#[test]
fn constants_csv_leads_with_the_spread() {
    let o = xxcorr(&["constants"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("name,value"));
    assert!(lines.next().unwrap().starts_with("pairwiseMaxDev,"));
}

#[test]
fn constants_reject_small_fits() {
    assert_eq!(xxcorr(&["constants", "--n-fit", "100"]).status.code(), Some(2));
    assert_eq!(xxcorr(&["constants", "--x-fit-max", "999"]).status.code(), Some(2));
}

#[test]
fn finite_size_adjusts_lengths() {
    let o = xxcorr(&["finite-size", "--L-list", "256,512,1024"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lens: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(lens, ["258", "514", "1026"]);
    let err = stderr(&o);
    assert!(err.contains("L = 256 adjusted to 258"));
    assert!(err.contains("deviation*L"));
}

#[test]
fn finite_size_single_length_has_no_verdict() {
    let o = xxcorr(&["finite-size", "--L-list", "30", "--format", "json"]);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 1);
    assert!(doc["verdict"].is_null());
}

#[test]
fn finite_size_usage_errors() {
    for args in [
        ["finite-size", "--L-list", "30", "--x-frac", "0"],
        ["finite-size", "--L-list", "30", "--x-frac", "1"],
        ["finite-size", "--L-list", "30,x", "--x-frac", "0.5"],
    ] {
        assert_eq!(xxcorr(&args).status.code(), Some(2), "{args:?}");
    }
}
