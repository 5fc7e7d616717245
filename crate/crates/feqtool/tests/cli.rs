use std::path::Path;
use std::process::{Command, Output};

use feq_core::feq::{recheck, Verdict};
use feqtool::report::{ReportFile, Summary};

fn feqtool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_feqtool")).args(args).output().expect("spawn feqtool")
}

fn read(p: &Path) -> Vec<u8> {
    std::fs::read(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

#[test]
fn list_shows_the_registry() {
    let out = feqtool(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert!(rows.len() >= 20);
    let delta = rows.iter().find(|r| r.starts_with("ex4.delta ")).unwrap();
    assert!(delta.contains("ratio_k") && delta.contains(" 12 "));
}

#[test]
fn single_case_writes_one_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = feqtool(&["run", "--cases", "ex3.1", "--out", dir.path().to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut names: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["ex3.1.json", "summary.json"]);
    let file: ReportFile = serde_json::from_slice(&read(&dir.path().join("ex3.1.json"))).unwrap();
    assert_eq!(file.report.verdict, Verdict::Pass);
    assert!(file.generated_unix.is_some());
}

#[test]
fn unknown_id_exits_2_before_writing() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("reports");
    let out = feqtool(&["run", "--cases", "ex3.1,no-such-case", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no-such-case"));
    assert!(!out_dir.exists());
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(feqtool(&["run", "--mode", "sideways"]).status.code(), Some(2));
    assert_eq!(feqtool(&["run", "--tol", "-1", "--cases", "ex3.1"]).status.code(), Some(2));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, b"x").unwrap();
    let out = feqtool(&["run", "--cases", "ex3.1", "--out", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn reports_are_deterministic_across_thread_counts() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let cases = "ex1.8,ex3.2,ex3.43a,ex4.theta,ex4.twist";
    for (dir, jobs) in [(&a, "1"), (&b, "3")] {
        let out = feqtool(&["run", "--cases", cases, "--out", dir.path().to_str().unwrap(), "--jobs", jobs, "--no-timestamp"]);
        assert_eq!(out.status.code(), Some(0));
    }
    for name in std::fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()) {
        assert_eq!(read(&a.path().join(&name)), read(&b.path().join(&name)), "{name:?}");
    }
}

#[test]
fn stored_reports_recheck_to_their_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let out = feqtool(&["run", "--cases", "ex1.5,ex3.4,ex3.6neg,ex4.eta11", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let summary: Summary = serde_json::from_slice(&read(&dir.path().join("summary.json"))).unwrap();
    for row in &summary.cases {
        let file: ReportFile = serde_json::from_slice(&read(&dir.path().join(format!("{}.json", row.case_id)))).unwrap();
        assert_eq!(recheck(&file.report), file.report.verdict, "{}", row.case_id);
        let mode = file.report.modes.iter().find(|m| format!("{:?}", m.mode).to_lowercase() == row.mode).unwrap();
        assert_eq!(mode.verdict, row.verdict);
    }
    let csv = String::from_utf8(read(&dir.path().join("ex3.4.csv"))).unwrap();
    assert!(csv.starts_with("mode,s_re,s_im,lhs_re"));
    assert!(csv.lines().count() > 1);
}

#[test]
fn config_file_values_yield_to_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let file_out = dir.path().join("from-file");
    let flag_out = dir.path().join("from-flag");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"cases": ["ex3.3"], "out": {:?}, "format": "csv", "no-timestamp": true, "quadrature": {{"level-max": 11}}}}"#,
            file_out.to_str().unwrap()
        ),
    )
    .unwrap();
    let out = feqtool(&["run", "--config", cfg.to_str().unwrap(), "--out", flag_out.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!file_out.exists());
    assert!(flag_out.join("ex3.3.csv").exists());
    assert!(!flag_out.join("ex3.3.json").exists());

    std::fs::write(&cfg, r#"{"cases": ["ex3.3"], "colour": "blue"}"#).unwrap();
    assert_eq!(feqtool(&["run", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn coefficient_and_character_dumps() {
    let out = feqtool(&["coeffs", "delta", "--n", "12"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().last().unwrap(), "12,-370944.0,0.0");

    let out = feqtool(&["characters", "--modulus", "12"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 4);
}
