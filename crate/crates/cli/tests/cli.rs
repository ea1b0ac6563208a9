use std::io::Write;
use std::process::{Command, Output, Stdio};

use coaxial_cli::{parse_angles, parse_job, Report};
use coaxial_core::BasisContext;
use serde_json::{json, Value};

fn coaxial(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_coaxial"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    let mut input = child.stdin.take().unwrap();
    if let Some(text) = stdin {
        input.write_all(text.as_bytes()).unwrap();
    }
    drop(input);
    child.wait_with_output().unwrap()
}

fn report(out: &Output) -> Report {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn verify(out: &Output) -> Output {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    coaxial(&["verify"], Some(&text))
}

#[test]
fn four_equal_angles_are_rejected() {
    let out = coaxial(&["decide", "--json", r#"{"angles":["3/2","3/2","3/2","3/2","3"]}"#], None);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r.result["reason"], "inequality_fails");
    assert_eq!(r.result["b"], json!([1, 1, -1, -1]));
    let audit = &r.audit[0];
    assert_eq!((audit.lhs.clone(), audit.rhs.clone(), audit.holds), (json!(6), json!(4), false));
    assert!(stderr(&out).contains("6 > 4"), "{}", stderr(&out));
}

#[test]
fn doubled_pair_is_accepted() {
    let out = coaxial(&["decide", "--json", r#"{"angles":["t1","t1","2*t1","2*t1","3"]}"#], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out).result["b"], json!([1, -1, 2, -2]));
}

#[test]
fn realize_double_zero_is_verified() {
    let out = coaxial(&["realize", "--json", r#"{"residues":[2,-2,1,-1],"partition":[2],"seed":1}"#], None);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let cfg = &r.result["configuration"];
    assert!(cfg["residual"].as_f64().unwrap() < 1e-10);
    assert_eq!(cfg["positions"].as_array().unwrap().len(), 4);
    assert!(r.result["developing_map"].is_object());
}

#[test]
fn malformed_json_reports_line_and_column() {
    let out = coaxial(&["decide"], Some("{\n  \"angles\": [\"3/2\",, \"3\"]\n}"));
    assert_eq!(out.status.code(), Some(64));
    assert!(stderr(&out).contains("line 2, column"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
}

#[test]
fn schema_violations_are_input_errors() {
    for (cmd, payload) in [
        ("decide", r#"{"angles":["3/2"],"extra":1}"#),
        ("decide", r#"{"angles":"3/2"}"#),
        ("partition", r#"{"residues":[1,-1]}"#),
        ("realize", r#"{"residues":["a"],"partition":[]}"#),
        ("q4", r#"{"a":1,"b":1,"c":1}"#),
    ] {
        let out = coaxial(&[cmd, "--json", payload], None);
        assert_eq!(out.status.code(), Some(64), "{cmd} {payload}");
        assert!(stderr(&out).starts_with("input error"), "{}", stderr(&out));
    }
}

#[test]
fn invalid_angles_are_input_errors() {
    for (angles, needle) in [(r#"["1"]"#, "1"), (r#"["t1","-2"]"#, "-2"), (r#"["x/2"]"#, "x/2")] {
        let out = coaxial(&["decide", "--json", &format!(r#"{{"angles":{angles}}}"#)], None);
        assert_eq!(out.status.code(), Some(64), "{angles}");
        assert!(stderr(&out).contains(needle), "{}", stderr(&out));
    }
}

#[test]
fn usage_errors_exit_64_and_help_exits_0() {
    assert_eq!(coaxial(&["decide", "--no-such-flag"], None).status.code(), Some(64));
    assert_eq!(coaxial(&["frobnicate"], None).status.code(), Some(64));
    assert_eq!(coaxial(&["--help"], None).status.code(), Some(0));
    assert_eq!(coaxial(&["--version"], None).status.code(), Some(0));
}

#[test]
fn undecided_outcomes_exit_2() {
    let out = coaxial(&["hurwitz", "--json", r#"{"degree":8,"zeros":[4,4],"poles":[8],"extras":[2]}"#], None);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out).result["search"], "cap_exceeded");

    let out = coaxial(&["realize", "--restarts", "4", "--json", r#"{"residues":[1,1,-1,-1],"partition":[2]}"#], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(report(&out).result["note"].as_str().unwrap().contains("not a certificate"));
}

#[test]
fn hurwitz_witness_in_cycle_notation() {
    let out = coaxial(&["hurwitz", "--json", r#"{"b":[1,-1,2,-2],"partition":[2]}"#], None);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let witness = &r.result["witness"];
    assert!(witness["sigma_zero"].as_str().unwrap().starts_with('('));
    assert_eq!(r.result["certified"], true);

    let out = coaxial(&["hurwitz", "--json", r#"{"b":[1,1,-1,-1],"partition":[2]}"#], None);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn basis_flag_changes_numeric_values() {
    let payload = r#"{"angles":["t1","t2"]}"#;
    let out = coaxial(&["mp-classify", "--basis", "t1=0.3,t2=0.4", "--json", payload], None);
    assert_eq!(report(&out).result["gauss_bonnet_value"].as_f64().unwrap(), 0.3 + 0.4 - 2.0 + 2.0);
    let bad = coaxial(&["decide", "--basis", "t1=-2", "--json", payload], None);
    assert_eq!(bad.status.code(), Some(64));
}

#[test]
fn reports_verify_and_reproduce() {
    let cases: [&[&str]; 9] = [
        &["decide", "--json", r#"{"angles":["3/2","3/2","3/2","3/2","3"]}"#],
        &["decide", "--exhaustive", "--json", r#"{"angles":["5/2","5/2","5","5","3"]}"#],
        &["arrangements", "--json", r#"{"angles":["3/2","3/2","3/2","3/2","7"]}"#],
        &["mp-classify", "--json", r#"{"angles":["1/2","1/2","1/2","3/2"]}"#],
        &["partition", "--json", r#"{"residues":["t1","-t1","2*t1","-2*t1"],"partition":[2]}"#],
        &["hurwitz", "--json", r#"{"b":[3,-1,-1,-1],"partition":[1,1]}"#],
        &["realize", "--seed", "7", "--json", r#"{"residues":[3,1,-2,-2],"partition":[2]}"#],
        &["realize", "--json", r#"{"residues":[1,2,3,-1,-2,-3],"partition":[3,1]}"#],
        &["q4", "--json", r#"{"a":1.5,"b":1.5,"c":2,"d":1,"realize":true}"#],
    ];
    for args in cases {
        let first = coaxial(args, None);
        let second = coaxial(args, None);
        assert_eq!(first.stdout, second.stdout, "{args:?} is not reproducible");
        assert_eq!(first.status.code(), second.status.code());
        let checked = verify(&first);
        assert_eq!(checked.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&checked.stdout));
        let r = report(&checked);
        assert_eq!(r.result["reproduced"], true);
        assert_ne!(r.result["witness_valid"], false);
    }
}

#[test]
fn tampered_reports_fail_verification() {
    let out = coaxial(&["decide", "--compact", "--json", r#"{"angles":["3/2","3/2","3/2","3/2","3"]}"#], None);
    let mut value: Value = serde_json::from_slice(&out.stdout).unwrap();
    value["result"]["b"] = json!([1, -1, 1, -1]);
    let checked = coaxial(&["verify"], Some(&value.to_string()));
    assert_eq!(checked.status.code(), Some(1));

    let out = coaxial(&["hurwitz", "--json", r#"{"b":[1,-1,2,-2],"partition":[2]}"#], None);
    let mut value: Value = serde_json::from_slice(&out.stdout).unwrap();
    value["result"]["witness"]["taus"] = json!(["(1 2)(3)"]);
    let checked = coaxial(&["verify"], Some(&value.to_string()));
    assert_eq!(checked.status.code(), Some(1));
    assert_eq!(report(&checked).result["witness_valid"], false);
}

#[test]
fn run_accepts_job_documents() {
    let job = r#"{"command":"q4","payload":{"a":3,"b":1,"c":2,"d":2},"options":{"seed":3}}"#;
    let out = coaxial(&["run"], Some(job));
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r.options.seed, 3);
    assert_eq!(r.result["double_zero_exists"], true);

    let spec = parse_job(job).unwrap();
    assert_eq!(spec.options.restarts, 64);
    assert!(parse_job(r#"{"command":"nope","payload":{}}"#).is_err());
    let bad = coaxial(&["run"], Some(r#"{"command":"decide","payload":{"angles":["1"]}}"#));
    assert_eq!(bad.status.code(), Some(64));
}

#[test]
fn input_from_file() {
    let path = std::env::temp_dir().join(format!("coaxial-cli-test-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"residues":[1,1,-1,-1],"partition":[1,1]}"#).unwrap();
    let out = coaxial(&["partition", path.to_str().unwrap()], None);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(out.status.code(), Some(0));
    let missing = coaxial(&["partition", "/nonexistent/coaxial.json"], None);
    assert_eq!(missing.status.code(), Some(64));
}

#[test]
fn parse_angles_examples() {
    let ctx = BasisContext::default;
    assert_eq!(parse_angles(&["3/2", "3"], ctx()).unwrap().len(), 2);
    let err = parse_angles(&["1"], ctx()).unwrap_err();
    assert!(err.message.contains('1'), "{err}");
    let err = parse_angles(&["t1", "-2"], ctx()).unwrap_err();
    assert!(err.message.contains("-2"), "{err}");
}
