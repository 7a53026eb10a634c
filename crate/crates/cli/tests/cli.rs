use std::path::PathBuf;
use std::process::{Command, Output};

use mmtv_cli::{ReportFile, ResultBody};
use mmtv_core::{Mode, Num};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn mmtv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mmtv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fx(name: &str) -> String {
    fixture(name).display().to_string()
}

fn report(out: &Output) -> ReportFile {
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    ReportFile::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap()
}

fn exact(s: &str) -> Num {
    Num::Exact(s.into())
}

#[test]
fn risk_on_mean_separation() {
    let r = report(&mmtv(&["risk", &fx("mean_separation.json")]));
    assert_eq!(r.schema_version, 1);
    assert_eq!(r.mode, Mode::Rational);
    assert_eq!(r.command.name, "risk");
    match r.result {
        ResultBody::Risk {
            risk, tv, duality_gap, ..
        } => {
            assert_eq!(risk, exact("3/5"));
            assert_eq!(tv, exact("2/5"));
            assert_eq!(duality_gap, exact("0"));
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn tvdist_matches_risk() {
    let r = report(&mmtv(&["tvdist", &fx("mean_separation.json")]));
    assert!(matches!(r.result, ResultBody::TvDistance { tv, .. } if tv == exact("2/5")));
}

#[test]
fn demo_escaping_mass() {
    let r = report(&mmtv(&["demo", "escaping-mass", "--N", "8"]));
    match r.result {
        ResultBody::Experiment { steps, pass, .. } => {
            assert!(pass);
            assert_eq!(steps[0].tv, exact("5/8"));
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn sweep_reports_limit() {
    let r = report(&mmtv(&["sweep", "escaping-mass", "--sizes", "2,4,8"]));
    match r.result {
        ResultBody::Experiment {
            steps,
            limit_estimate,
            tv_trend,
            ..
        } => {
            assert_eq!(steps.len(), 3);
            assert_eq!(limit_estimate, Some(exact("1/2")));
            assert_eq!(tv_trend, "decreasing");
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn certificates() {
    let valid = report(&mmtv(&[
        "certify",
        &fx("mean_separation.json"),
        &fx("mean_separation_cert.json"),
    ]));
    assert!(matches!(valid.result, ResultBody::Certificate { valid: true, .. }));

    let out = mmtv(&["certify", &fx("mean_separation.json"), &fx("constant_cert.json")]);
    let r = report(&out);
    match r.result {
        ResultBody::Certificate { valid, risk_of_phi, .. } => {
            assert!(!valid);
            assert_eq!(risk_of_phi, exact("1"));
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn e_variable_for_bernoullis() {
    let r = report(&mmtv(&["evariable", &fx("bernoulli.json")]));
    match r.result {
        ResultBody::EVariable { z, inf_power, .. } => {
            assert_eq!(z, vec![exact("0"), exact("10/3")]);
            assert_eq!(inf_power, exact("7/3"));
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn effective_null_of_sub_probability() {
    let r = report(&mmtv(&["effnull", &fx("identical.json"), &fx("sub_measure.json")]));
    match r.result {
        ResultBody::EffectiveNull {
            total_mass,
            in_hull,
            dominated,
            polar,
        } => {
            assert_eq!(total_mass, exact("1/2"));
            assert_eq!(in_hull, None);
            assert!(dominated && polar.member && !polar.exhausted);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn float_mode_emits_numbers() {
    let r = report(&mmtv(&["--mode", "float", "risk", &fx("mean_separation.json")]));
    assert_eq!(r.mode, Mode::Float);
    match r.result {
        ResultBody::Risk {
            risk: Num::Float(x), ..
        } => assert!((x - 0.6).abs() < 1e-9),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let runs: [&[&str]; 3] = [
        &["risk", &fx("mean_separation.json")],
        &["sweep", "tv-balls", "--sizes", "0,10,20"],
        &["--mode", "float", "demo", "mean-separation", "--points", "11"],
    ];
    for args in runs {
        let a = mmtv(args);
        let b = mmtv(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn rational_reports_have_no_decimals() {
    let runs: [&[&str]; 5] = [
        &["risk", &fx("mean_separation.json")],
        &["evariable", &fx("bernoulli.json")],
        &["demo", "tv-balls"],
        &["demo", "mean-separation", "--points", "21"],
        &["sweep", "escaping-mass", "--sizes", "2,4"],
    ];
    for args in runs {
        let out = mmtv(args);
        let r = report(&out);
        let value: serde_json::Value = serde_json::to_value(&r.result).unwrap();
        let mut stack = vec![&value];
        while let Some(v) = stack.pop() {
            match v {
                serde_json::Value::Number(n) => assert!(n.is_u64(), "{args:?}: float {n}"),
                serde_json::Value::String(s) => {
                    if s.starts_with(|c: char| c.is_ascii_digit() || c == '-') && !s.contains(' ') {
                        assert!(!s.contains('.') && !s.contains('e'), "{args:?}: decimal {s}");
                    }
                }
                serde_json::Value::Array(a) => stack.extend(a),
                serde_json::Value::Object(o) => stack.extend(o.values()),
                _ => {}
            }
        }
    }
}

#[test]
fn out_flag_writes_file_and_keeps_stdout_empty() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = mmtv(&["--out", path.to_str().unwrap(), "risk", &fx("mean_separation.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let stdout = mmtv(&["risk", &fx("mean_separation.json")]).stdout;
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
}

#[test]
fn report_round_trips() {
    for args in [
        vec!["risk".to_string(), fx("mean_separation.json")],
        vec![
            "--mode".into(),
            "float".into(),
            "sweep".into(),
            "escaping-mass".into(),
            "--sizes".into(),
            "2,3".into(),
        ],
    ] {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = mmtv(&args);
        let r = report(&out);
        assert_eq!(r.to_json().as_bytes(), out.stdout.as_slice());
        assert_eq!(ReportFile::from_json(&r.to_json()).unwrap(), r);
    }
}

fn write_temp(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad_sum = write_temp(
        &dir,
        "bad.json",
        r#"{"space": {"atoms": ["a", "b"]},
            "hypotheses": {"P": {"generators": [[0.5, 0.4]]}, "Q": {"generators": [[0, 1]]}},
            "null": "P", "alternative": "Q"}"#,
    );
    let syntax = write_temp(&dir, "syntax.json", "{\"space\": ");
    let cases: [(&[&str], i32); 9] = [
        (&["risk", &bad_sum], 1),
        (&["risk", &syntax], 1),
        (&["risk", "/nonexistent/problem.json"], 1),
        (&["demo", "no-such-example"], 1),
        (&["demo", "escaping-mass", "--N", "eight"], 1),
        (&["--tolerance", "0.1", "demo", "half-split"], 1),
        (&["sweep", "escaping-mass"], 1),
        (&["tvdist", &fx("empty_null.json")], 2),
        (&["evariable", &fx("identical.json")], 2),
    ];
    for (args, code) in cases {
        let out = mmtv(args);
        assert_eq!(out.status.code(), Some(code), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error"), "{args:?}");
    }
}

#[test]
fn validation_errors_name_the_json_path() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_temp(
        &dir,
        "bad.json",
        r#"{"space": {"atoms": ["a", "b"]},
            "hypotheses": {"P": {"generators": [[0.5, 0.4]]}, "Q": {"generators": [[0, 1]]}},
            "null": "P", "alternative": "Q"}"#,
    );
    let out = mmtv(&["risk", &bad]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("hypotheses.P.generators[0]"));

    let bad = write_temp(
        &dir,
        "cert.json",
        r#"{"phi": [0, 0, 2], "mu": [1, 0, 0], "nu": [0, 0, 1]}"#,
    );
    let out = mmtv(&["certify", &fx("mean_separation.json"), &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`phi`"));
}
