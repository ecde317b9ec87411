use std::io::Write;
use std::process::{Command, Output};

use freetrace::report::{parse_json_lines, Report};
use freetrace_core::oracle::CountReport;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freetrace")).args(args).env_remove("FREETRACE_BUDGET").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn count_both_methods_agree() {
    let o = run(&["count", "--p", "3", "--s", "1", "--m", "4", "--N", "max", "--c", "0", "--method", "both", "--format", "json"]);
    assert!(o.status.success());
    let rows: Vec<Report> = parse_json_lines(&stdout(&o)).unwrap();
    assert_eq!(rows.len(), 2);
    for r in &rows {
        assert_eq!((r.value.as_str(), r.matched), ("8", Some(true)));
        let back = CountReport::try_from(r).unwrap();
        assert_eq!((back.p, back.s, back.m, back.n.to_string()), (3, 1, 4, "80".to_string()));
    }
}

#[test]
fn count_examples() {
    let o = run(&["count", "--p", "2", "--s", "2", "--m", "3", "--N", "21", "--c", "0", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("p,s,m,N,c,quantity,method,branch,value,match\n"));
    assert!(text.lines().nth(1).unwrap().ends_with(",0,"), "{text}");

    let o = run(&["count", "--p", "7", "--m", "4", "--quantity", "P", "--N", "800", "--c", "0", "--format", "json"]);
    let rows: Vec<Report> = parse_json_lines(&stdout(&o)).unwrap();
    assert_eq!(rows[0].value, "40");

    // a bare integer trace when s = 1
    let o = run(&["count", "--p", "3", "--m", "4", "--c", "2", "--method", "both", "--format", "json"]);
    let rows: Vec<Report> = parse_json_lines(&stdout(&o)).unwrap();
    assert_eq!(rows[0].value, "12");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["count", "--p", "3", "--m", "4", "--N", "7"]).status.code(), Some(2));
    assert_eq!(run(&["count", "--p", "4", "--m", "2"]).status.code(), Some(2));
    assert_eq!(run(&["count", "--p", "3", "--s", "2", "--m", "2", "--c", "1"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    let o = run(&["count", "--p", "3", "--m", "4", "--c", "pow:0", "--N", "5", "--method", "oracle", "--budget", "10"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(o.stdout.is_empty());
}

#[test]
fn budget_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_freetrace"))
        .args(["count", "--p", "3", "--m", "4", "--method", "oracle"])
        .env("FREETRACE_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn verify_small_and_fault_injection() {
    let o = run(&["verify", "--cap", "100", "--qs", "2,3", "--carlitz-cap", "100", "--period-cap", "100"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = run(&["verify", "--cap", "100", "--qs", "2,3", "--carlitz-cap", "100", "--period-cap", "100", "--inject-fault", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains(r#""kind":"failure","name":"z-general""#), "{text}");
    assert!(text.contains("q=2 m=2 N=3 c=0"), "{text}");
}

#[test]
fn verify_output_is_reproducible() {
    let args = ["verify", "--cap", "300", "--carlitz-cap", "300", "--period-cap", "300", "--format", "csv"];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
}

#[test]
fn table_with_hints_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "30 = 2 * 3 * 5").unwrap();
    let path = f.path().to_str().unwrap();
    let o = run(&["table", "--exponents", "2,3,5", "--hints", path, "--format", "json"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 3);

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "30 = 2 * 3 * 7").unwrap();
    let o = run(&["table", "--hints", bad.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn classify_and_periods() {
    let o = run(&["classify", "--q", "3", "--m", "4", "--format", "json"]);
    let text = stdout(&o);
    assert!(text.contains(r#""uniform":true"#) && text.contains(r#""j":2"#) && text.contains(r#""D":"2""#), "{text}");
    let o = run(&["periods", "--p", "3", "--m", "3", "--d", "13"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["integer"], true);
    assert_eq!(v["values"][0], serde_json::json!([2, 0]));
}
