use std::path::Path;
use std::process::{Command, Output};

use fairkc::io::read_instance;
use fairkc::MetricSpace;
use fairkc_bench::records::{read_records, Record};

fn fairkc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fairkc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn trials(path: &Path) -> Vec<fairkc_bench::records::TrialRecord> {
    read_records(path)
        .unwrap()
        .into_iter()
        .filter_map(|r| match r {
            Record::Trial(t) => Some(t),
            Record::Aggregate(_) => None,
        })
        .collect()
}

#[test]
fn gen_line_gives_the_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("line.json");
    let o = fairkc(&[
        "gen",
        "--kind",
        "line",
        "--n",
        "4",
        "--k",
        "2",
        "--groups",
        "2",
        "--out",
        path_str(&out),
    ]);
    assert!(o.status.success());
    let inst = read_instance(&out).unwrap().to_instance().unwrap();
    assert_eq!(
        inst.metric(),
        &MetricSpace::from_line(&[0.0, 1.0, 3.0, 7.0]).unwrap()
    );
    assert_eq!(inst.groups(), &[vec![0, 2], vec![1, 3]]);
    assert_eq!(inst.requirements(), &[1, 1]);
}

#[test]
fn gen_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = fairkc(&[
            "gen",
            "--kind",
            "random-metric-closure",
            "--n",
            "30",
            "--k",
            "5",
            "--groups",
            "3",
            "--seed",
            "11",
            "--out",
            path_str(p),
        ]);
        assert!(o.status.success());
    }
    let (ba, bb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ba, bb);
    let file = read_instance(&a).unwrap();
    let inst = file.to_instance().unwrap();
    let again = fairkc::io::InstanceFile::from_instance(&inst, None, file.meta.clone());
    assert_eq!(again, file);
}

#[test]
fn gen_balanced_groups_and_multiple_trials() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("many");
    let o = fairkc(&[
        "gen",
        "--kind",
        "euclidean-uniform",
        "--n",
        "100",
        "--k",
        "8",
        "--groups",
        "4",
        "--trials",
        "3",
        "--seed",
        "5",
        "--out",
        path_str(&out),
    ]);
    assert!(o.status.success());
    for seed in 5..8 {
        let inst = read_instance(&out.join(format!("instance-{seed}.json")))
            .unwrap()
            .to_instance()
            .unwrap();
        let mut all: Vec<usize> = inst.groups().concat();
        all.sort_unstable();
        assert_eq!(all, (0..100).collect::<Vec<_>>());
        assert!(inst.groups().iter().all(|g| g.len() == 25));
        assert_eq!(inst.requirements(), &[2, 2, 2, 2]);
    }
}

#[test]
fn run_three_on_fixture_is_verified() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("line.json");
    let report = dir.path().join("r.jsonl");
    fairkc(&[
        "gen",
        "--kind",
        "line",
        "--n",
        "4",
        "--k",
        "2",
        "--groups",
        "2",
        "--out",
        path_str(&inst),
    ]);
    let o = fairkc(&[
        "run",
        "--algo",
        "three",
        "--input",
        path_str(&inst),
        "--out",
        path_str(&report),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let t = trials(&report);
    assert_eq!(t.len(), 1);
    assert_eq!(t[0].report.opt_cost, Some(3.0));
    assert!(t[0].report.distortion.unwrap() <= 3.0);
}

#[test]
fn run_five_unverified_on_large_instance() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.jsonl");
    let o = fairkc(&[
        "run",
        "--algo",
        "five",
        "--no-verify",
        "--n",
        "2000",
        "--k",
        "32",
        "--groups",
        "4",
        "--out",
        path_str(&report),
    ]);
    assert!(o.status.success());
    let t = trials(&report);
    assert_eq!(t[0].report.distortion, None);
    assert!(t[0].report.achieved_cost.is_some());
    assert!(t[0].report.queries_distinct > 0);
}

#[test]
fn budget_errors_are_recorded_and_the_run_continues() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.jsonl");
    let o = fairkc(&[
        "run",
        "--algo",
        "three,five",
        "--n",
        "12",
        "--k",
        "3",
        "--trials",
        "4",
        "--budget",
        "3",
        "--out",
        path_str(&report),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let t = trials(&report);
    assert_eq!(t.len(), 8);
    assert!(t.iter().any(|r| r
        .report
        .error
        .as_deref()
        .is_some_and(|e| e.contains("budget"))));
    assert_eq!(t.iter().map(|r| r.seed.unwrap()).max(), Some(3));
}

#[test]
fn csv_reports_append_with_one_header() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.csv");
    for seed in ["1", "2"] {
        let o = fairkc(&[
            "run",
            "--n",
            "10",
            "--k",
            "2",
            "--seed",
            seed,
            "--format",
            "csv",
            "--out",
            path_str(&report),
        ]);
        assert!(o.status.success());
    }
    let text = std::fs::read_to_string(&report).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("record,")).count(), 1);
    // Two runs, each with two trials and two aggregates.
    assert_eq!(text.lines().count(), 1 + 8);
}

#[test]
fn report_summarizes_per_algo_and_size() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.jsonl");
    for n in ["10", "14"] {
        fairkc(&[
            "run",
            "--algo",
            "three,five",
            "--n",
            n,
            "--k",
            "3",
            "--trials",
            "2",
            "--out",
            path_str(&report),
        ]);
    }
    let summary = dir.path().join("s.csv");
    let o = fairkc(&["report", path_str(&report), "--out", path_str(&summary)]);
    assert!(o.status.success());
    let mut rdr = csv::Reader::from_path(&summary).unwrap();
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, fairkc_bench::records::SUMMARY_HEADER);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 4);
    for row in &rows {
        let k: f64 = row[1].parse().unwrap();
        let bound: f64 = row[6].parse().unwrap();
        let q: f64 = row[5].parse().unwrap();
        if &row[3] == "three" {
            assert_eq!(bound, 2.0 * k * k);
        }
        assert_eq!(&row[7] == "true", q <= bound);
    }
}

#[test]
fn report_on_empty_input_is_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.jsonl");
    std::fs::write(&empty, "").unwrap();
    let o = fairkc(&["report", path_str(&empty)]);
    assert!(o.status.success());
    assert_eq!(
        String::from_utf8(o.stdout).unwrap().trim(),
        "n,k,t,algo,distortion_max,queries_distinct_max,budget_bound,bound_satisfied"
    );
}

#[test]
fn bad_arguments_fail() {
    assert!(!fairkc(&["run", "--kind", "sphere"]).status.success());
    assert!(!fairkc(&["run", "--algo", "seven"]).status.success());
    let o = fairkc(&["run", "--n", "3", "--k", "5"]);
    assert_eq!(o.status.code(), Some(2));
}
