use std::process::Command;
use std::str::FromStr;

use mahler_cli::{parse_exact, run, RunReport};
use mahler_core::exact::{rat, PiScaled};
use serde_json::Value;

fn report(args: &[&str]) -> (i32, RunReport, Value) {
    let out = run(std::iter::once("mahler").chain(args.iter().copied()));
    let json: Value = serde_json::from_str(&out.stdout).expect("stdout is JSON");
    (out.code, out.report.expect("report"), json)
}

#[test]
fn verify_det_at_three() {
    let (code, r, json) = report(&["verify-det", "--N", "3"]);
    assert_eq!(code, 0);
    assert!(r.passed());
    let det = &json["exact_results"]["det"];
    assert_eq!(det["pi_power"], 3);
    assert_eq!(det["num"], serde_json::json!(["0", "0", "0", "8"]));
    assert_eq!(det["den"], serde_json::json!(["-36", "0", "49", "0", "-14", "0", "1"]));
}

#[test]
fn volume_at_one() {
    let (code, _, json) = report(&["volume", "--N", "1"]);
    assert_eq!(code, 0);
    assert_eq!(json["exact_results"]["volume"], "2/3 * pi^2");
    let v = json["numeric_results"]["volume"].as_f64().unwrap();
    assert!((v - 6.579736267392906).abs() < 1e-12);
}

#[test]
fn hn_at_three_halves() {
    let (code, _, json) = report(&["hn", "--N", "1", "--xi", "1.5"]);
    assert_eq!(code, 0);
    assert_eq!(json["exact_results"]["h_N(xi)"], "65/36 * pi^1");
    let v = json["numeric_results"]["h_N(xi)"].as_f64().unwrap();
    assert!((v - std::f64::consts::PI * (2.25 - 4.0 / 9.0)).abs() < 1e-12);
}

#[test]
fn exact_strings_round_trip() {
    let (_, _, json) = report(&["hn", "--N", "3"]);
    let terms = json["exact_results"]["h_N"].as_array().unwrap();
    assert_eq!(terms.len(), 6);
    for t in terms {
        let s = t["coeff"].as_str().unwrap();
        let v = PiScaled::from_str(s).unwrap();
        assert_eq!(v.to_string(), s);
        assert_eq!(v.pi_power(), 3);
    }
}

#[test]
fn floats_have_fifteen_significant_digits() {
    let out = run(["mahler", "volume", "--N", "2"]);
    assert!(out.stdout.contains("\"volume\": 9.30188300408994e+0"), "{}", out.stdout);
}

#[test]
fn reports_are_byte_identical() {
    let args = ["mahler", "mc", "--mode", "volume", "--N", "1", "--samples", "20000", "--seed", "9"];
    let a = run(args);
    let b = run(args);
    assert_eq!(a.stdout, b.stdout);
    let mut parallel = args.to_vec();
    parallel.extend(["--workers", "3"]);
    let c = run(parallel);
    let strip = |s: &str| s.replace("\"workers\": 3", "\"workers\": 1");
    assert_eq!(strip(&c.stdout), a.stdout);
}

#[test]
fn mc_hn_within_three_sigma() {
    let (code, r, json) = report(&["mc", "--mode", "hn", "--N", "1", "--xi", "1.5", "--samples", "100000", "--seed", "4"]);
    assert_eq!(code, 0, "{json}");
    assert!(r.checks.iter().any(|c| c.name == "within_three_sigma"));
    assert_eq!(json["exact_results"]["target"], "65/36 * pi^1");
}

#[test]
fn verify_entries_and_rank_one_pass() {
    for (j, k) in [("1", "3"), ("2", "4"), ("2", "3"), ("5", "5")] {
        let (code, _, _) = report(&["verify-entries", "--J", j, "--K", k]);
        assert_eq!(code, 0, "J={j} K={k}");
    }
    let (code, r, json) = report(&["rank-one", "--N", "4"]);
    assert_eq!(code, 0);
    assert_eq!(r.checks.len(), 4);
    assert_eq!(json["exact_results"]["det_c"], "1");
}

#[test]
fn jacobian_test_random_and_explicit() {
    let (code, _, json) = report(&["jacobian-test", "--N", "2", "--points", "5", "--seed", "3"]);
    assert_eq!(code, 0);
    assert_eq!(json["numeric_results"]["points"].as_array().unwrap().len(), 5);
    let (code, _, _) = report(&["jacobian-test", "--N", "1", "--alpha", "[[2.0, 0.5]]"]);
    assert_eq!(code, 0);
}

#[test]
fn measure_reports_both_methods() {
    // (x - 2)(x - 0.5i): measure 2.
    let (code, _, json) = report(&["measure", "--coeffs", "[[0, 1], [-2, -0.5], [1, 0]]"]);
    assert_eq!(code, 0, "{json}");
    let roots = json["numeric_results"]["mahler_roots"].as_f64().unwrap();
    let quad = json["numeric_results"]["mahler_quadrature"].as_f64().unwrap();
    assert!((roots - 2.0).abs() < 1e-12);
    assert!((quad - 2.0).abs() < 1e-10);
}

#[test]
fn measure_with_root_on_circle_skips_agreement() {
    // x^2 - 1 has both roots on the circle.
    let (code, r, _) = report(&["measure", "--coeffs", "[[-1, 0], [0, 0], [1, 0]]", "--nodes", "4095"]);
    assert_eq!(code, 0);
    assert!(r.checks.iter().all(|c| c.name != "quadrature_agreement"));
}

#[test]
fn table_is_csv() {
    let out = run(["mahler", "table", "--N", "1", "--xi-min", "1", "--xi-max", "2", "--steps", "2"]);
    assert_eq!(out.code, 0);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "xi,h_N");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].ends_with(",0.00000000000000e0"));
}

#[test]
fn malformed_arguments_exit_two() {
    for args in [
        vec!["mahler"],
        vec!["mahler", "bogus"],
        vec!["mahler", "volume"],
        vec!["mahler", "volume", "--N", "x"],
        vec!["mahler", "hn", "--N", "0"],
        vec!["mahler", "mc", "--mode", "hn", "--N", "1"],
        vec!["mahler", "rank-one", "--N", "1"],
        vec!["mahler", "measure", "--coeffs", "[1, 2]"],
        vec!["mahler", "hn", "--N", "1", "--xi", "abc"],
    ] {
        let out = run(args.clone());
        assert_eq!(out.code, 2, "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn exact_decimal_parsing() {
    assert_eq!(parse_exact("1.5").unwrap(), rat(3, 2));
    assert_eq!(parse_exact("1.10").unwrap(), rat(11, 10));
    assert_eq!(parse_exact("-0.25").unwrap(), rat(-1, 4));
    assert_eq!(parse_exact("7/3").unwrap(), rat(7, 3));
    assert!(parse_exact("1.").is_err());
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_mahler");
    let ok = Command::new(bin).args(["volume", "--N", "2"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin).args(["volume"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    // Too few nodes for the entry oracle: the check fails.
    let fail = Command::new(bin)
        .args(["verify-entries", "--J", "6", "--K", "6", "--nodes", "4"])
        .output()
        .unwrap();
    assert_eq!(fail.status.code(), Some(1), "{}", String::from_utf8_lossy(&fail.stdout));
}
