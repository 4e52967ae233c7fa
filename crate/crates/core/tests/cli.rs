use std::path::Path;
use std::process::{Command, Output};

use nilcone_lab::report::{Report, Status, PLUMBING};
use proptest::prelude::*;
use serde_json::json;

fn nilcone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilcone-lab")).args(args).output().expect("binary runs")
}

fn report_at(path: &Path) -> Report {
    Report::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn unknown_subcommand_is_usage_error() {
    assert_eq!(nilcone(&["bogus"]).status.code(), Some(2));
    assert_eq!(nilcone(&[]).status.code(), Some(2));
    assert_eq!(nilcone(&["cone", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(nilcone(&["cone", "--p", "4"]).status.code(), Some(2));
    assert_eq!(nilcone(&["sweep", "--types", "E"]).status.code(), Some(2));
    assert_eq!(nilcone(&["sweep", "--max-rank", "61"]).status.code(), Some(2));
    assert_eq!(nilcone(&["classify", "--format", "csv"]).status.code(), Some(2));
    assert_eq!(nilcone(&["--help"]).status.code(), Some(0));
}

#[test]
fn classify_g2_marks_three_special() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let run = nilcone(&["classify", "--type", "G2", "--primes", "2,3,5", "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0));
    let report = report_at(&out);
    let rows = report.tables["classification"].as_array().unwrap();
    let g2_3 = rows.iter().find(|r| r["p"] == 3).unwrap();
    assert_eq!(g2_3["special"], json!(true));
    assert_eq!(g2_3["bad"], json!(true));
    assert_eq!(rows.iter().find(|r| r["p"] == 5).unwrap()["bad"], json!(false));
    assert!(String::from_utf8(run.stdout).unwrap().contains("| classify[G2] | pass |"));
}

#[test]
fn cone_count_729() {
    let run = nilcone(&["cone", "--n", "3", "--p", "3", "--checks", "count", "--format", "json"]);
    assert_eq!(run.status.code(), Some(0));
    let report = Report::from_json(&String::from_utf8(run.stdout).unwrap()).unwrap();
    assert_eq!(report.checks.len(), 1);
    let c = &report.checks[0];
    assert_eq!((c.status, &c.expected, &c.actual), (Status::Pass, &json!(729), &json!(729)));
}

#[test]
fn injected_failure_sets_exit_code() {
    for args in [
        vec!["classify", "--type", "A2"],
        vec!["invariants", "--n", "3", "--p", "3"],
        vec!["cone", "--n", "2", "--p", "2"],
        vec!["springer", "--n", "2", "--p", "2"],
        vec!["sweep", "--max-rank", "6"],
    ] {
        assert_eq!(nilcone(&args).status.code(), Some(0), "{args:?}");
        let mut forced = args.clone();
        forced.push("--inject-failure");
        assert_eq!(nilcone(&forced).status.code(), Some(1), "{forced:?}");
    }
}

#[test]
fn config_file_handling() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.cfg");
    std::fs::write(&good, "threads = 2\nseed = 5 # comment\n").unwrap();
    let out = dir.path().join("r.json");
    let run =
        nilcone(&["sweep", "--max-rank", "4", "--config", good.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0));
    let report = report_at(&out);
    assert_eq!(report.params["config"]["threads"], json!(2));
    assert_eq!(report.seed, 5);

    // flags override the file
    let run = nilcone(&[
        "sweep",
        "--max-rank",
        "4",
        "--config",
        good.to_str().unwrap(),
        "--seed",
        "9",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(0));
    assert_eq!(report_at(&out).seed, 9);

    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "degree_cap = -1\n").unwrap();
    let run = nilcone(&["sweep", "--config", bad.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8(run.stderr).unwrap().contains("line 1"));

    std::fs::write(&bad, "seed = 1\nwarp = 3\n").unwrap();
    let run = nilcone(&["sweep", "--config", bad.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8(run.stderr).unwrap().contains("warp"));

    let missing = dir.path().join("missing.cfg");
    assert_eq!(nilcone(&["sweep", "--config", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn sweep_csv_rows() {
    let run = nilcone(&["sweep", "--types", "C", "--max-rank", "5", "--format", "csv"]);
    assert_eq!(run.status.code(), Some(0));
    let text = String::from_utf8(run.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("type,rank,partition,bound_dim_z,lhs,r_min_orbit,passes"));
    // partitions of 2..=5 without the all-ones one
    assert_eq!(lines.clone().count(), 1 + 2 + 4 + 6);
    assert!(lines.all(|l| l.ends_with(",true")));
}

#[test]
fn sample_mode_is_flagged() {
    let run = nilcone(&["cone", "--n", "5", "--p", "2", "--sample", "20000", "--seed", "1", "--format", "json"]);
    assert_eq!(run.status.code(), Some(0));
    let report = Report::from_json(&String::from_utf8(run.stdout).unwrap()).unwrap();
    assert_eq!(report.checks[0].status, Status::Pass);
    assert!(report.checks[0].notes.starts_with("non-exhaustive"));
    assert!(report.checks[1..].iter().all(|c| c.status == Status::Skipped));
}

#[test]
fn every_check_has_an_anchor() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["invariants", "--family", "g2-weyl", "--p", "2"],
        vec!["cone", "--n", "3", "--p", "3"],
        vec!["springer", "--n", "3", "--p", "3", "--two-q"],
        vec!["springer", "--n", "3", "--p", "3", "--partition", "2,1"],
        vec!["sweep", "--types", "A,B,C,D", "--max-rank", "8"],
    ] {
        let out = dir.path().join("r.json");
        let mut full = args.clone();
        full.extend(["--out", out.to_str().unwrap()]);
        let run = nilcone(&full);
        assert_eq!(run.status.code(), Some(0), "{args:?}");
        let report = report_at(&out);
        assert!(!report.checks.is_empty());
        for c in &report.checks {
            assert!(!c.anchor.is_empty(), "{}", c.name);
            if c.status == Status::Pass {
                assert_eq!(c.expected, c.actual, "{}", c.name);
            }
        }
    }
}

#[test]
fn repeated_runs_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for name in ["a.json", "b.json"] {
        let out = dir.path().join(name);
        let run = nilcone(&["springer", "--n", "3", "--p", "3", "--seed", "7", "--out", out.to_str().unwrap()]);
        assert_eq!(run.status.code(), Some(0));
        let mut r = report_at(&out);
        r.duration_ms = 0;
        texts.push(r.to_json());
    }
    assert_eq!(texts[0], texts[1]);
}

fn status_strategy() -> impl Strategy<Value = Status> {
    prop_oneof![Just(Status::Pass), Just(Status::Fail), Just(Status::Anomaly), Just(Status::Skipped)]
}

proptest! {
    #[test]
    fn report_json_round_trips(
        seed in any::<u64>(),
        duration in any::<u64>(),
        checks in prop::collection::vec(("[a-z.]{1,12}", status_strategy(), any::<i64>(), "[ -~]{0,20}"), 0..6),
    ) {
        let mut r = Report::new("prop", json!({"n": 3}), seed);
        r.duration_ms = duration;
        for (name, status, v, notes) in &checks {
            r.checks.push(
                nilcone_lab::report::CheckResult::new(name, *status, json!(v), json!([v, name]), PLUMBING)
                    .with_notes(notes),
            );
        }
        let back = Report::from_json(&r.to_json()).unwrap();
        prop_assert_eq!(&back, &r);
        prop_assert_eq!(r.exit_code() == 1, checks.iter().any(|c| c.1 == Status::Fail));
    }
}
