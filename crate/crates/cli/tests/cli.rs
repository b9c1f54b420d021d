use std::process::{Command, Output};
use std::time::{Duration, Instant};

fn sqsearch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sqsearch"))
        .args(args)
        .env_remove("SQSEARCH_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn validate_default_grid() {
    let start = Instant::now();
    let o = sqsearch(&["validate"]);
    assert!(start.elapsed() < Duration::from_secs(5));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.ends_with(" ok")).count(), 48);
    assert!(out.lines().last().unwrap().starts_with("48 cases, 0 failed"));
}

#[test]
fn validate_single_case_and_cap() {
    let o = sqsearch(&["validate", "--n", "2", "--eta", "1", "--marked", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("N=2 eta=1 marked={0}"));

    let o = sqsearch(&["validate", "--cap", "63"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("resource"));

    let o = Command::new(env!("CARGO_BIN_EXE_sqsearch"))
        .args(["validate", "--n", "4", "--eta", "3"])
        .env("SQSEARCH_CAP", "32")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn run_degenerate_case() {
    let o = sqsearch(&["run", "--n", "4", "--marked", "2", "--eta", "10", "--trials", "20", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let row = out.lines().nth(1).unwrap();
    assert_eq!(row, "4,1,10,20,3,1,0,10,1,2.25,1,2,0,1");
    // k >= N/4 warning goes to stderr only.
    assert!(stderr(&o).contains("N/4"));
    assert_eq!(out.lines().count(), 2);
}

#[test]
fn output_is_reproducible_across_threads() {
    let base = ["sweep", "--n", "8,16,32", "--k", "1,2", "--trials", "40", "--seed", "17"];
    let run = |extra: &[&str], fmt: &str| {
        let mut args: Vec<&str> = base.to_vec();
        args.extend_from_slice(&["--format", fmt]);
        args.extend_from_slice(extra);
        let o = sqsearch(&args);
        assert_eq!(o.status.code(), Some(0));
        o.stdout
    };
    for fmt in ["csv", "json"] {
        let a = run(&[], fmt);
        assert_eq!(a, run(&[], fmt));
        assert_eq!(a, run(&["--threads", "1"], fmt));
        assert_eq!(a, run(&["--threads", "4"], fmt));
        assert_eq!(a, run(&["--sequential"], fmt));
    }
}

#[test]
fn json_report_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = sqsearch(&[
        "run", "--n", "16", "--k", "8", "--eta", "712", "--trials", "50", "--format", "json", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let saved = std::fs::read_to_string(&path).unwrap();
    assert!(saved.contains("\"warnings\""));
    assert!(saved.contains("\"classical_queries\": null"));

    let o = sqsearch(&["report", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("warning: k=8 >= N/4"));

    let o = sqsearch(&["report", "--format", "json", path.to_str().unwrap()]);
    assert_eq!(stdout(&o), saved);

    let o = sqsearch(&["report", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sweep_edge_cases() {
    let o = sqsearch(&["sweep", "--n"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());

    let o = sqsearch(&["sweep", "--n", "16", "--k", "1,2,3,4,5,6,7,8", "--eta", "50", "--trials", "5"]);
    let gaps: Vec<f64> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(gaps.len(), 8);
    assert!(gaps.windows(2).all(|w| w[1] < w[0]));
    assert_eq!(gaps[7], 0.0);
}

#[test]
fn exit_codes_for_bad_input() {
    assert_eq!(sqsearch(&["run", "--n", "6", "--marked", "1"]).status.code(), Some(2));
    assert_eq!(sqsearch(&["run", "--n", "8", "--marked", "9"]).status.code(), Some(2));
    assert_eq!(sqsearch(&["run", "--n", "8", "--k", "8"]).status.code(), Some(2));
    assert_eq!(sqsearch(&["sweep", "--n", "8", "--eta-mult", "-1"]).status.code(), Some(2));
}

#[test]
fn timing_is_opt_in() {
    let args = ["run", "--n", "1024", "--marked", "777", "--eta-mult", "4", "--trials", "3"];
    let o = sqsearch(&args);
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    let cols: Vec<&str> = row.split(',').collect();
    assert_eq!(cols[2], "28392");
    assert_eq!(cols[8], "0.008766189218");
    assert_eq!(cols[9], "0.0087890625");
    assert_eq!(cols[11], "10");
    assert_eq!(cols[12], "0");
    let mut timed = args.to_vec();
    timed.push("--timing");
    assert_eq!(sqsearch(&timed).status.code(), Some(0));
}
