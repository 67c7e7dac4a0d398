use std::process::{Command, Output};

use zdpic::document::DiagramDocument;
use zdpic::report::{CheckReport, ReportFile};

fn zdpic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zdpic")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn eval_default_circle_is_delta() {
    let o = zdpic(&["eval", "--d", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("value = δ"), "{s}");
    assert!(s.contains("1.732050807568877"), "{s}");
}

#[test]
fn eval_reads_a_document_file() {
    let dir = std::env::temp_dir().join(format!("zdpic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("circle.json");
    let mut doc = DiagramDocument::neutral_circle(4).unwrap();
    doc.terms[0].loops = 2;
    std::fs::write(&path, doc.to_json()).unwrap();
    let o = zdpic(&["eval", path.to_str().unwrap()]);
    std::fs::write(&path, "{ not json").unwrap();
    let bad = zdpic(&["eval", path.to_str().unwrap()]);
    let _ = std::fs::remove_dir_all(&dir);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("value = 4"), "{}", stdout(&o));
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["frobnicate"],
        vec!["qfa"],
        vec!["qfa", "nope"],
        vec!["sft", "--d", "1"],
        vec!["sixj", "--d", "4"],
        vec!["gates", "--tol", "-1"],
        vec!["sft", "--samples", "0"],
        vec!["rp", "--d", "many"],
    ] {
        assert_eq!(zdpic(&args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(zdpic(&["--help"]).status.code(), Some(0));
}

#[test]
fn hausdorff_young_slack_is_nonnegative() {
    let o = zdpic(&["qfa", "hy", "--d", "4", "--samples", "500", "--seed", "1", "--json", "-", "--quiet"]);
    assert_eq!(o.status.code(), Some(0));
    let reports: Vec<CheckReport> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let hy: Vec<_> = reports.iter().filter(|r| r.check_id == "qfa.hausdorff-young").collect();
    assert!(!hy.is_empty());
    for r in hy {
        assert_eq!(r.params.samples, 500);
        assert!(r.metrics.slack_min.unwrap() >= -1e-8, "{}", r.summary_line());
    }
}

#[test]
fn impossible_tolerance_fails_with_exit_one() {
    let o = zdpic(&["sft", "--d", "3", "--tol", "0"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    let failing: CheckReport = serde_json::from_str(err.lines().next().unwrap()).unwrap();
    assert!(!failing.pass);
}

#[test]
fn report_files_are_deterministic() {
    let dir = std::env::temp_dir().join(format!("zdpic-det-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let run = |name: &str| {
        let p = dir.join(name);
        let o = zdpic(&["states", "--seed", "9", "--quiet", "--json", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        assert!(o.stdout.is_empty());
        std::fs::read(&p).unwrap()
    };
    let (a, b) = (run("a.json"), run("b.json"));
    let _ = std::fs::remove_dir_all(&dir);
    assert_eq!(a, b);
    let f: ReportFile = serde_json::from_slice(&a).unwrap();
    assert_eq!((f.format.as_str(), f.version, f.command.as_str(), f.seed), ("zdpic.report", 1, "states", 9));
    assert!(f.pass);
}

#[test]
fn seeds_change_sampled_metrics() {
    let metrics = |seed: &str| {
        let o = zdpic(&["qfa", "schur", "--d", "3", "--samples", "20", "--seed", seed, "--json", "-", "--quiet"]);
        stdout(&o)
    };
    assert_eq!(metrics("5"), metrics("5"));
    assert_ne!(metrics("5"), metrics("6"));
}
