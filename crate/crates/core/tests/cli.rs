mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use common::sha256_hex;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dispatchgen"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn case14_text() -> &'static str {
    dispatchgen::grid::bundled::text("case14").unwrap()
}

/// Golden digests in `sha256sum` format, keyed by file name.
fn golden_digests() -> Vec<(String, String)> {
    include_str!("fixtures/golden/case14_seed7_dataset.sha256")
        .lines()
        .map(|l| {
            let (hash, name) = l.split_once("  ").unwrap();
            (name.to_string(), hash.to_string())
        })
        .collect()
}

#[test]
fn solve_pf_reports_convergence() {
    let o = run(&["solve-pf", "--case", "case14"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("converged: true"));
}

#[test]
fn solve_pf_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("case14.m");
    fs::write(&path, case14_text()).unwrap();
    let o = run(&["solve-pf", "--case", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        fs::read_to_string(&path).unwrap(),
        case14_text(),
        "input file untouched"
    );
}

#[test]
fn heavy_load_diverges_with_exit_2() {
    let o = run(&["solve-pf", "--case", "case14", "--scale-loads", "20"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_case_file_is_exit_1() {
    let o = run(&["solve-pf", "--case", "/nonexistent/case.m"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!stderr(&o).is_empty());
}

#[test]
fn usage_errors_are_exit_1() {
    assert_eq!(run(&["solve-pf", "--bogus"]).status.code(), Some(1));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn gen_dataset_is_reproducible_and_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let mut digests = Vec::new();
    for run_index in 0..2 {
        let out = dir.path().join(format!("run{run_index}"));
        let o = run(&[
            "gen-dataset",
            "--case",
            "case14",
            "--seed",
            "7",
            "--samples",
            "100",
            "--knowledge",
            "bundled",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let files: Vec<(String, String)> = ["dataset.jsonl", "manifest.yaml"]
            .iter()
            .map(|n| (n.to_string(), sha256_hex(&fs::read(out.join(n)).unwrap())))
            .collect();
        assert_eq!(
            fs::read_to_string(out.join("dataset.jsonl"))
                .unwrap()
                .lines()
                .count(),
            100
        );
        digests.push(files);
    }
    assert_eq!(digests[0], digests[1]);
    assert_eq!(digests[0], golden_digests());
}

#[test]
fn zero_samples_without_knowledge_is_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ds");
    let o = run(&[
        "gen-dataset",
        "--case",
        "case14",
        "--samples",
        "0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("nothing to emit"));
    assert!(!out.join("dataset.jsonl").exists());
}

#[test]
fn config_file_values_yield_to_flags() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("grid.m"), case14_text()).unwrap();
    fs::write(
        dir.path().join("run.toml"),
        "cases = [\"grid.m\"]\n\n[scenario]\nseed = 3\nsamples = 4\n",
    )
    .unwrap();
    let config = dir.path().join("run.toml");
    let a = run(&["gen-scenarios", "--config", config.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(stdout(&a).lines().count(), 4);
    let b = run(&[
        "gen-scenarios",
        "--config",
        config.to_str().unwrap(),
        "--samples",
        "2",
    ]);
    assert_eq!(stdout(&b).lines().count(), 2);
    assert_eq!(
        stdout(&b).lines().collect::<Vec<_>>(),
        stdout(&a).lines().take(2).collect::<Vec<_>>()
    );

    fs::write(dir.path().join("bad.toml"), "no_such_key = 1\n").unwrap();
    let c = run(&[
        "gen-scenarios",
        "--config",
        dir.path().join("bad.toml").to_str().unwrap(),
    ]);
    assert_eq!(c.status.code(), Some(1));
}

#[test]
fn case30_plan_energizes_thirty_buses() {
    let o = run(&["plan-blackstart", "--case", "case30"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).matches("event: energize_bus").count(), 30);
}

#[test]
fn case14_seed7_plan_matches_golden() {
    let o = run(&["plan-blackstart", "--case", "case14", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        include_str!("fixtures/golden/case14_seed7_plan.yaml")
    );
}

#[test]
fn case_without_generators_is_exit_1() {
    let text: String = case14_text()
        .lines()
        .map(|l| {
            let cols: Vec<&str> = l.split('\t').collect();
            if cols.len() == 22 && cols[1].parse::<u32>().is_ok() && cols[7] == "100" {
                let mut cols = cols.clone();
                cols[8] = "0";
                cols.join("\t")
            } else {
                l.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join("\n");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dark.m");
    fs::write(&path, text).unwrap();
    let o = run(&["plan-blackstart", "--case", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(
        stderr(&o).contains("no online generator can start the restoration"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn stats_summarizes_a_dataset_without_touching_it() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ds");
    let o = run(&[
        "gen-dataset",
        "--case",
        "case14",
        "--samples",
        "20",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let data = out.join("dataset.jsonl");
    let before = fs::read(&data).unwrap();
    let s = run(&["stats", data.to_str().unwrap()]);
    assert_eq!(s.status.code(), Some(0), "{}", stderr(&s));
    assert!(stdout(&s).contains("20"));
    assert_eq!(fs::read(&data).unwrap(), before);
    assert!(Path::new(&data).exists());
}
