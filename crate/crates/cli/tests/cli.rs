use std::process::{Command, Output};

use duality_lab::catalog::{list_cases, selectors};
use duality_lab::config::{Command as Cmd, Format, Options, RunConfig};
use duality_lab::record::{write_records, Record, FIELDS};
use duality_lab::run::execute;
use duality_lab::exit_status;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_duality-lab")).args(args).output().expect("binary runs")
}

fn json_records(out: &Output) -> Vec<serde_json::Value> {
    serde_json::from_slice::<Vec<serde_json::Value>>(&out.stdout).expect("stdout is a JSON array")
}

#[test]
fn flags_override_the_config_file() {
    let file = Options::from_json(r#"{"c": "1/2", "k": ["1/3", 2], "trials": 10, "case": "irw-charlier", "seed": 7}"#).unwrap();
    let flags = Options { command: Some(Cmd::Simulate), c: Some("3/5".into()), ..Options::default() };
    let cfg = RunConfig::from_options(flags.over(file)).unwrap();
    assert_eq!(cfg.c, duality_core::scalar::rat(3, 5));
    assert_eq!(cfg.k, vec![duality_core::scalar::rat(1, 3), duality_core::scalar::rat(2, 1)]);
    assert!(cfg.k_given);
    assert_eq!(cfg.trials, 10);
    assert_eq!(cfg.seed, 7);
    assert_eq!(cfg.cases, vec!["irw-charlier".to_string()]);
}

#[test]
fn config_file_rejects_unknown_keys_and_bad_values() {
    assert!(Options::from_json(r#"{"colour": 1}"#).is_err());
    assert!(Options::from_json(r#"{"k": {"a": 1}}"#).is_err());
    assert!(Options::from_json(r#"{"k": [[1]]}"#).is_err());
    assert!(Options::from_json("not json").is_err());
    let o = Options::from_json(r#"{"command": "verify-duality", "c": 0.75, "format": "csv"}"#).unwrap();
    let cfg = RunConfig::from_options(o).unwrap();
    assert_eq!(cfg.command, Cmd::VerifyDuality);
    assert_eq!(cfg.c, duality_core::scalar::rat(3, 4));
    assert_eq!(cfg.format, Format::Csv);
}

#[test]
fn parameters_are_validated_before_running() {
    let base = || Options { command: Some(Cmd::VerifyDuality), ..Options::default() };
    let bad = [
        Options { c: Some("0".into()), ..base() },
        Options { c: Some("x".into()), ..base() },
        Options { k: Some("1/2".into()), ..base() },
        Options { k: Some("1/2,-1".into()), ..base() },
        Options { j: Some("3,0".into()), ..base() },
        Options { phi: Some(4.0), ..base() },
        Options { trunc: Some(1), ..base() },
        Options { points: Some(1), ..base() },
        Options { tolerance: Some(-1.0), ..base() },
        Options { dt: Some(0.0), ..base() },
        Options { trials: Some(0), ..base() },
        Options { case: vec!["nope".into()], ..base() },
        Options { c: Some("3/2".into()), case: vec!["sip-meixner".into()], ..base() },
        Options { command: None, ..base() },
    ];
    for o in bad {
        assert!(RunConfig::from_options(o.clone()).is_err(), "{o:?}");
    }
    let sim = || Options { command: Some(Cmd::Simulate), case: vec!["sip-bep-laguerre".into()], ..Options::default() };
    assert!(RunConfig::from_options(Options { eta1: Some("1.5,1".into()), ..sim() }).is_err());
    assert!(RunConfig::from_options(Options { eta2: Some("0,1".into()), ..sim() }).is_err());
    assert!(RunConfig::from_options(Options { eta1: Some("1,1,1".into()), ..sim() }).is_err());
    assert!(RunConfig::from_options(Options { sites: Some(3), ..sim() }).is_err());
    assert!(RunConfig::from_options(Options { eta1: Some("2,0".into()), eta2: Some("0.5,0.5".into()), ..sim() }).is_ok());
}

#[test]
fn every_record_has_the_same_fields() {
    let cfg = RunConfig { command: Cmd::VerifyAlgebra, ..RunConfig::default() };
    let records: Vec<Record> = execute(&cfg).iter().map(Record::from).collect();
    assert!(records.len() > 20);
    let mut buf = Vec::new();
    write_records(&mut buf, &records, Format::Json).unwrap();
    let v: Vec<serde_json::Map<String, serde_json::Value>> = serde_json::from_slice(&buf).unwrap();
    for rec in &v {
        let keys: Vec<&str> = rec.keys().map(String::as_str).collect();
        let mut want = FIELDS.to_vec();
        want.sort();
        let mut got = keys.clone();
        got.sort();
        assert_eq!(got, want);
    }
    let mut buf = Vec::new();
    write_records(&mut buf, &records, Format::Csv).unwrap();
    let mut rd = csv::Reader::from_reader(buf.as_slice());
    assert_eq!(rd.headers().unwrap().iter().collect::<Vec<_>>(), FIELDS.to_vec());
    assert_eq!(rd.records().count(), records.len());
    let mut buf = Vec::new();
    write_records(&mut buf, &[], Format::Csv).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap().trim(), FIELDS.join(","));
}

#[test]
fn exit_status_is_a_function_of_the_records() {
    let cfg = RunConfig { command: Cmd::VerifyAlgebra, cases: vec!["lie-algebras".into()], ..RunConfig::default() };
    let mut records: Vec<Record> = execute(&cfg).iter().map(Record::from).collect();
    assert_eq!(exit_status(&records), 0);
    records[0].status = duality_core::report::Status::Fail;
    assert_eq!(exit_status(&records), 1);
    assert_eq!(exit_status(&[]), 0);
}

#[test]
fn catalog_is_complete_and_stable() {
    let a = list_cases();
    assert_eq!(a, list_cases());
    let count = |k: &str| a.iter().filter(|e| e.kind == k).count();
    assert_eq!((count("duality"), count("intertwining"), count("orthogonality")), (8, 7, 6));
    let bessel = a.iter().find(|e| e.name == "bep-bessel").unwrap();
    assert_eq!(bessel.anchor, "BEP self-duality theorem");
    assert!(a.iter().any(|e| e.name == "sip-hyp-mp"));
    assert!(selectors(Cmd::ListCases).is_empty());
    assert!(selectors(Cmd::All).contains(&"intertwining/bessel"));
}

#[test]
fn single_duality_case_gives_one_passing_record() {
    let out = bin(&["verify-duality", "--case", "irw-charlier", "--c", "3/4", "--trunc", "12"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let recs = json_records(&out);
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0]["status"], "pass");
    assert_eq!(recs[0]["max_abs_residual"], 0.0);
    assert_eq!(recs[0]["mode"], "exact");
}

#[test]
fn failing_checks_exit_one_and_are_listed() {
    // a tolerance below the float residuals fails the Bessel case
    let out = bin(&["verify-duality", "--case", "bep-bessel", "--tolerance", "1e-300", "--points", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("duality/bep-bessel"), "{err}");
    assert_eq!(json_records(&out)[0]["status"], "fail");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["verify-duality", "--c", "-1"],
        vec!["verify-duality", "--case", "nope"],
        vec!["frobnicate"],
        vec!["verify-duality", "--config", "/nonexistent/config.json"],
        vec![],
    ] {
        assert_eq!(bin(&args).status.code(), Some(2), "{args:?}");
    }
    let out = Command::new(env!("CARGO_BIN_EXE_duality-lab"))
        .args(["verify-algebra"])
        .env("DUALITY_LAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_and_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.json");
    let report = dir.path().join("report.csv");
    std::fs::write(&conf, r#"{"command": "verify-algebra", "case": ["lie-algebras"], "format": "json"}"#).unwrap();
    let out = bin(&["--config", conf.to_str().unwrap(), "--format", "csv", "--output", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.starts_with(&FIELDS.join(",")));
    assert_eq!(text.lines().count(), 9);
}

#[test]
fn simulate_reports_a_seeded_estimate() {
    let out = Command::new(env!("CARGO_BIN_EXE_duality-lab"))
        .args(["simulate", "--case", "irw-charlier", "--trials", "4000", "--seed", "9"])
        .env("DUALITY_LAB_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let recs = json_records(&out);
    assert_eq!(recs[0]["mode"], "montecarlo");
    assert_eq!(recs[0]["seed"], 9);
    assert!(String::from_utf8_lossy(&out.stderr).contains("z ="));
}

#[test]
fn list_cases_prints_the_catalog() {
    let out = bin(&["list-cases"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_records(&out);
    assert_eq!(v.len(), 21);
    assert_eq!(v[0]["name"], "irw-charlier");
}

#[test]
fn errors_inside_a_check_become_null_residuals() {
    let r = duality_lab::suites::guard("broken", duality_core::report::Mode::Exact, || {
        Err(duality_core::Error::Domain("boom".into()))
    });
    assert!(!r.passed());
    let mut buf = Vec::new();
    write_records(&mut buf, &[Record::from(&r)], Format::Json).unwrap();
    let v: Vec<serde_json::Value> = serde_json::from_slice(&buf).unwrap();
    assert!(v[0]["max_abs_residual"].is_null());
    assert_eq!(v[0]["status"], "fail");
}
