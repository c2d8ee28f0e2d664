//! End-to-end runs of the `ecp` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ecp::core::calibration::{bin_by_power, run_powers, BinSpec};
use ecp::core::field::FieldMetric;
use ecp::core::stats::spearman;
use ecp::core::strategy::EffectiveSampleRule;
use ecp::io::{load_embeddings, load_params, load_tasks, Encoding, Parsing};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn ecp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ecp")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Value of `key=` in the first line that has it.
fn stat(text: &str, key: &str) -> f64 {
    text.split_whitespace()
        .find_map(|tok| tok.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .parse()
        .unwrap()
}

struct Synth {
    _dir: tempfile::TempDir,
    tasks: PathBuf,
    embeddings: PathBuf,
    truth: PathBuf,
    dir: PathBuf,
}

fn synth() -> Synth {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path().to_path_buf();
    let s = Synth {
        tasks: root.join("tasks.jsonl"),
        embeddings: root.join("emb.bin"),
        truth: root.join("truth.json"),
        dir: root,
        _dir: dir,
    };
    let out = ecp(&[
        "synth",
        "--out-tasks",
        p(&s.tasks),
        "--out-embeddings",
        p(&s.embeddings),
        "--binary",
        "--truth",
        p(&s.truth),
    ]);
    assert!(out.status.success(), "{out:?}");
    s
}

#[test]
fn fit_on_bundled_synthetic_data() {
    let s = synth();
    let params = s.dir.join("params.json");
    let out = ecp(&[
        "fit",
        "--tasks",
        p(&s.tasks),
        "--embeddings",
        p(&s.embeddings),
        "--out",
        p(&params),
        "--gauge-model",
        "ref",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(params.exists());
    assert!(stat(&stdout(&out), "r") >= 0.95, "{}", stdout(&out));
    let fitted = load_params(&params).unwrap();
    assert_eq!(fitted.emf_model["ref"], 1.0);
}

#[test]
fn missing_tasks_path_is_a_usage_error() {
    let out = ecp(&["fit", "--tasks", "/nonexistent/tasks.jsonl", "--out", "/tmp/unused.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    let out = ecp(&["fit", "--out", "/tmp/unused.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn all_equal_powers_exit_degenerate() {
    let dir = tempfile::tempdir().unwrap();
    let out = ecp(&[
        "fit",
        "--tasks",
        p(&fixture("constant_tasks.jsonl")),
        "--out",
        p(&dir.path().join("p.json")),
    ]);
    assert_eq!(out.status.code(), Some(3), "{out:?}");
}

#[test]
fn malformed_input_exits_format_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.jsonl");
    std::fs::write(&bad, "{\"task_id\": \"x\"}\n").unwrap();
    let out = ecp(&["fit", "--tasks", p(&bad), "--out", p(&dir.path().join("p.json"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

#[test]
fn coverage_sweep_is_monotone() {
    let out = ecp(&["simulate", "--strategy-file", p(&fixture("coverage.json")), "--sweep", "n=1..100"]);
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,resistance,power"));
    let rows: Vec<(u64, f64, f64)> = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 100);
    assert_eq!(rows.iter().map(|r| r.0).collect::<Vec<_>>(), (1..=100).collect::<Vec<_>>());
    assert!(rows.windows(2).all(|w| w[1].1 <= w[0].1 && w[1].2 >= w[0].2));
    // base total 3, r0 1: R(1) = 4, R(100) = 1.03
    assert!((rows[0].1 - 4.0).abs() < 1e-12 && (rows[99].1 - 1.03).abs() < 1e-12);
}

#[test]
fn single_path_strategies_cannot_be_swept() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("zs.json");
    std::fs::write(&spec, r#"{"strategy":{"kind":"zero_shot"},"base":{"plan":1,"operation":1,"domain":0,"calculate":0}}"#)
        .unwrap();
    let out = ecp(&["simulate", "--strategy-file", p(&spec)]);
    assert_eq!(stdout(&out), "n,resistance,power\n1,3,0.1111111111111111\n");
    assert_eq!(ecp(&["simulate", "--strategy-file", p(&spec), "--sweep", "n=1..3"]).status.code(), Some(1));
}

#[test]
fn retrieve_reproduces_the_field_ordering() {
    let pool = fixture("field_pool.jsonl");
    let out = ecp(&["retrieve", "--embeddings", p(&pool), "--query-id", "q", "--policy", "top_k", "--k", "2"]);
    assert_eq!(stdout(&out), "rank,id\n1,a\n2,b\n");
    let out = ecp(&["retrieve", "--embeddings", p(&pool), "--query-id", "q", "--policy", "bottom_k", "--k", "1"]);
    assert_eq!(stdout(&out), "rank,id\n1,c\n");
    let random = ["retrieve", "--embeddings", p(&pool), "--query-id", "q", "--policy", "random", "--k", "3", "--seed", "5"];
    assert_eq!(stdout(&ecp(&random)), stdout(&ecp(&random)));
    let out = ecp(&["retrieve", "--embeddings", p(&pool), "--query-id", "q", "--k", "4"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn validate_matches_direct_statistics() {
    let s = synth();
    let bins_path = s.dir.join("bins.csv");
    let out = ecp(&[
        "validate",
        "--tasks",
        p(&s.tasks),
        "--embeddings",
        p(&s.embeddings),
        "--params",
        p(&s.truth),
        "--bin-width",
        "0.5",
        "--out",
        p(&bins_path),
    ]);
    assert!(out.status.success(), "{out:?}");
    let rho = stat(&stdout(&out), "rho");

    let tasks = load_tasks(&s.tasks, Parsing::Strict).unwrap().tasks;
    let pool = load_embeddings(&s.embeddings, Encoding::Auto).unwrap();
    let params = load_params(&s.truth).unwrap();
    let records: Vec<(f64, bool)> =
        run_powers(&tasks, Some(&pool), &params, FieldMetric::Projection, EffectiveSampleRule::Independent)
            .unwrap()
            .iter()
            .map(|r| (r.power, r.correct))
            .collect();
    let bins = bin_by_power(&records, &BinSpec::new(0.5, 10).unwrap()).unwrap();
    let xs: Vec<f64> = bins.iter().map(|b| b.power_mid).collect();
    let ys: Vec<f64> = bins.iter().map(|b| b.accuracy).collect();
    assert!((rho - spearman(&xs, &ys).unwrap()).abs() <= 0.02);

    let written = ecp::report::read_csv(std::fs::File::open(&bins_path).unwrap()).unwrap();
    assert_eq!(written.len(), bins.len());

    let svg = s.dir.join("bins.svg");
    let out = ecp(&["report", "--bins", p(&bins_path), "--format", "svg-scatter", "--params", p(&s.truth), "--out", p(&svg)]);
    assert!(out.status.success(), "{out:?}");
    assert!(roxmltree::Document::parse(&std::fs::read_to_string(&svg).unwrap()).is_ok());
}

#[test]
fn predict_per_run_and_per_task() {
    let s = synth();
    let base = ["--tasks", p(&s.tasks), "--embeddings", p(&s.embeddings), "--params", p(&s.truth)];
    let out = ecp(&[&["predict"][..], &base].concat());
    assert!(out.status.success(), "{out:?}");
    assert_eq!(stdout(&out).lines().count(), 1 + 5000);

    let out = ecp(&[&["predict"][..], &base, &["--model", "big", "--k", "4"]].concat());
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1 + 100);
    assert!(text.lines().nth(1).unwrap().starts_with("t000,,big,zero_shot,"));

    let out = ecp(&[&["predict"][..], &base, &["--model", "nobody"]].concat());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn annotate_rationales() {
    let out = ecp(&["annotate", "--rationales", p(&fixture("rationales.jsonl"))]);
    assert_eq!(stdout(&out), "id,plan_steps,local_ops\nempty,0,0\nmarkers,2,0\nparagraphs,2,0\n");
}

#[test]
fn thread_count_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_ecp"))
        .args(["annotate", "--rationales", p(&fixture("rationales.jsonl"))])
        .env("ECP_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = Command::new(env!("CARGO_BIN_EXE_ecp"))
        .args(["annotate", "--rationales", p(&fixture("rationales.jsonl"))])
        .env("ECP_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
