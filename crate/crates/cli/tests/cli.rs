use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qps-casimir"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn fermion_suite_exits_zero() {
    let o = run(&["verify", "--suite", "fermion", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.len() >= 10);
    assert!(checks.iter().all(|c| c["passed"] == true));
    assert_eq!(v["passed"], true);
    for key in ["tool_version", "config", "conventions", "checks", "passed"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn boson_suite_reports_linear_spectrum() {
    let o = run(&["verify", "--suite", "boson", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let c = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "C_B1_spectrum")
        .expect("C_B1_spectrum present");
    assert!(c["max_residual"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn usage_errors_exit_two() {
    let o = run(&["verify", "--suite", "all", "--cutoff", "1"]);
    assert_eq!(code(&o), 2);
    assert_eq!(code(&run(&["verify", "--suite", "quark"])), 2);
    assert_eq!(code(&run(&["spectrum", "--rep", "quark"])), 2);
    assert_eq!(
        code(&run(&["spectrum", "--rep", "fermion", "--casimir", "3"])),
        2
    );
    assert_eq!(code(&run(&["verify", "--format", "xml"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["verify", "--tol", "1e-3"])), 2);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn flipped_convention_fails_with_exit_one() {
    let o = run(&[
        "verify",
        "--suite",
        "boson",
        "--z-star",
        "minus-eta",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    let line = out
        .lines()
        .find(|l| l.starts_with("C_B1_spectrum,"))
        .unwrap();
    assert!(line.contains(",false,"), "{line}");
}

#[test]
fn config_file_precedence_and_rejection() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("run.conf");
    std::fs::write(&good, "# defaults\ncutoff = 4\nformat = csv\n").unwrap();
    let o = run(&[
        "spectrum",
        "--rep",
        "boson",
        "--config",
        good.to_str().unwrap(),
        "--cutoff",
        "2",
        "--safe-margin",
        "1",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).starts_with("eigenvalue_num,eigenvalue_den,multiplicity,label_class\n"));

    let bad = dir.path().join("bad.conf");
    std::fs::write(&bad, "cutof = 4\n").unwrap();
    let o = run(&[
        "verify",
        "--suite",
        "fermion",
        "--config",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("cutof"));
    assert!(stderr(&o).contains("line 1"));

    let missing = dir.path().join("absent.conf");
    assert_eq!(
        code(&run(&["classify", "--config", missing.to_str().unwrap()])),
        2
    );
}

#[test]
fn spectrum_csv_tables() {
    let o = run(&[
        "spectrum",
        "--rep",
        "fermion",
        "--casimir",
        "1",
        "--format",
        "csv",
    ]);
    assert_eq!(
        stdout(&o),
        "eigenvalue_num,eigenvalue_den,multiplicity,label_class\n\
         -5,2,1,F=0\n-3,2,5,F=1\n-1,2,10,F=2\n1,2,10,F=3\n3,2,5,F=4\n5,2,1,F=5\n"
    );
    let o = run(&[
        "spectrum",
        "--rep",
        "fermion",
        "--casimir",
        "2",
        "--format",
        "csv",
    ]);
    let out = stdout(&o);
    let rows: Vec<&str> = out
        .lines()
        .skip(1)
        .map(|l| l.rsplit_once(',').unwrap().0)
        .collect();
    assert_eq!(rows, vec!["5,4,32"]);
    let o = run(&[
        "spectrum",
        "--rep",
        "boson",
        "--casimir",
        "2",
        "--format",
        "csv",
    ]);
    assert_eq!(
        stdout(&o),
        "eigenvalue_num,eigenvalue_den,multiplicity,label_class\n5,4,1,N=0\n29,4,5,N=1\n"
    );
    let o = run(&[
        "spectrum",
        "--rep",
        "hybrid",
        "--casimir",
        "2",
        "--format",
        "csv",
        "--max-total",
        "2",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("17,2,"), "{}", stdout(&o));
}

#[test]
fn classification_csv() {
    let o = run(&["classify", "--format", "csv"]);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "f0,f1,f2,f3,f4,ftotal,i3_sixths,yw_sixths,q_sixths,sterile_flag"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 32);
    assert_eq!(rows.iter().filter(|r| r[9] == "true").count(), 2);
    let find = |bits: [&str; 5]| rows.iter().find(|r| r[..5] == bits).unwrap();
    assert_eq!(
        &find(["0", "0", "0", "0", "1"])[6..],
        &["0", "0", "0", "true"]
    );
    assert_eq!(&find(["1", "1", "0", "0", "1"])[6..9], &["3", "2", "4"]);
}

#[test]
fn conventions_outputs() {
    let o = run(&["conventions", "--format", "md"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let table: Vec<&str> = out
        .lines()
        .filter(|l| l.starts_with("| ") && l.chars().nth(2).is_some_and(|c| c.is_ascii_digit()))
        .collect();
    assert_eq!(table.len(), 16);
    let default_rows: Vec<&&str> = table.iter().filter(|l| l.contains("| default |")).collect();
    assert_eq!(default_rows.len(), 1);
    assert!(default_rows[0].contains("10/10"));
    let flipped = table
        .iter()
        .find(|l| l.starts_with("| 5 | +eta | -eta | literal | transposed"))
        .unwrap();
    assert!(flipped.contains("C_B1_spectrum: FAIL"));
    // every table carries the convention header
    assert_eq!(out.matches("Conventions: `").count(), 2);

    let o = run(&["conventions", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["sweep"]["deviations"].as_array().unwrap().len(), 5);
    assert_eq!(v["default_is_best"], true);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    for args in [
        &["verify", "--suite", "all", "--format", "json"][..],
        &["classify", "--format", "csv"],
        &["spectrum", "--rep", "hybrid", "--format", "csv"],
        &["conventions", "--format", "csv"],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(code(&a), code(&b));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn report_combines_sections() {
    let o = run(&["report", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["classification"].as_array().unwrap().len(), 32);
    assert_eq!(v["spectra"]["fermion_2"][0]["multiplicity"], 32);
    let o = run(&["report", "--suite", "fermion", "--format", "md"]);
    let md = stdout(&o);
    assert!(md.starts_with("# qps-casimir report: PASS"));
    assert_eq!(
        md.matches("\n## ").count(),
        md.matches("Conventions: `").count()
    );
}
