use std::process::{Command, Output};

use qcalc::cli::{SuiteReport, SCHEMA_VERSION};
use qcalc::verify::Status;

fn qcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcalc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn report(args: &[&str]) -> (i32, SuiteReport) {
    let o = qcalc(args);
    (o.status.code().unwrap(), serde_json::from_str(&stdout(&o)).unwrap())
}

#[test]
fn normalize_prints_a_fixed_point() {
    let o = qcalc(&["normalize", "-e", "dr f+ + (q^4-1)/q^2 f+ f-"]);
    assert_eq!(o.status.code(), Some(0));
    let first = stdout(&o).trim().to_string();
    assert_eq!(first, "(1 - q^-4) f- f+ - (q^4 - q^2) f+^2 r df- + q f+ dr");
    let again = qcalc(&["normalize", "-e", &first]);
    assert_eq!(stdout(&again).trim(), first);
}

#[test]
fn normalize_zero_and_inverse_pair() {
    assert_eq!(stdout(&qcalc(&["normalize", "-e", "0"])).trim(), "0");
    assert_eq!(stdout(&qcalc(&["normalize", "-e", "r r^-1 - 1"])).trim(), "0");
}

#[test]
fn reduce_trace_ends_at_the_normal_form() {
    let e = "df+ r^-1 f-";
    let trace = stdout(&qcalc(&["reduce-trace", "-e", e]));
    let last = trace.lines().last().unwrap().trim();
    assert_eq!(last, stdout(&qcalc(&["normalize", "-e", e])).trim());
    assert!(trace.lines().any(|l| l.contains("[df+ r^-1 ->")));
}

#[test]
fn parse_errors_exit_with_two() {
    let o = qcalc(&["normalize", "-e", "f+ *\n  * r"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2, column 3"));
    assert_eq!(qcalc(&["normalize", "-e", "g f+"]).status.code(), Some(2));
    assert_eq!(qcalc(&["check", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(qcalc(&["check", "--suite", "coset", "--example", "4"]).status.code(), Some(2));
}

#[test]
fn exit_status_follows_failed_entries() {
    let (code, r) = report(&["check", "--suite", "cartan", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(r.schema_version, SCHEMA_VERSION);
    assert!(r.fingerprints.contains_key("group"));
    assert!(r.passed());

    let (code, r) = report(&["check", "--suite", "coset", "--example", "1", "--json"]);
    assert_eq!(code, 0);
    assert!(r.entries.iter().all(|e| !e.id.contains("example2")));

    let (code, r) = report(&["check", "--suite", "coset", "--example", "2", "--json"]);
    assert_eq!(code, 1);
    assert_eq!(r.get("coset.example2.c").unwrap().status, Status::Failed);
}

#[test]
fn informational_entries_do_not_fail_a_run() {
    let (code, r) = report(&["check", "--suite", "qplane", "--order", "8", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(r.get("qplane.unequal-time.printed-lambda").unwrap().status, Status::InformationalMismatch);
    assert_eq!(r.get("qplane.unequal-time.lambda").unwrap().status, Status::Verified);
}

#[test]
fn classical_specialization_from_the_command_line() {
    let (code, r) = report(&["check", "--suite", "cartan", "--q0", "1", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(r.q0.as_deref(), Some("1"));
}

#[test]
fn json_reports_are_deterministic() {
    let strip = |args: &[&str]| {
        let (_, r) = report(args);
        r.without_timing().to_json().unwrap()
    };
    let args = ["check", "--suite", "symops", "--seed", "7", "--json"];
    assert_eq!(strip(&args), strip(&args));
}
