use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_shapelet");

fn data(split: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/ItalyPowerDemand")
        .join(format!("ItalyPowerDemand_{split}.txt"))
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn gen(dir: &TempDir, name: &str, seed: u64) -> String {
    let path = dir.path().join(name);
    let p = path.to_str().unwrap().to_string();
    let out = run(&[
        "gen",
        "--n",
        "20",
        "--m",
        "64",
        "--sigma",
        "0.5",
        "--seed",
        &seed.to_string(),
        "--out",
        &p,
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    p
}

#[test]
fn discover_writes_document_and_summary() {
    let dir = TempDir::new().unwrap();
    let res = dir.path().join("res.txt");
    let train = data("TRAIN");
    let out = run(&[
        "discover",
        "--train",
        train.to_str().unwrap(),
        "--r",
        "0.5",
        "--p",
        "25",
        "--seed",
        "7",
        "--out",
        res.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let line = stdout(&out);
    assert_eq!(line.lines().count(), 1);
    for key in ["epsilon=", "shapelets=", "refused=", "train_accuracy="] {
        assert!(line.contains(key), "{line}");
    }
    let doc = shapelet_core::read_result(&res).unwrap();
    assert_eq!(doc.config.seed, 7);
    assert_eq!(doc.compressed_len, 12);
}

#[test]
fn p0_summary_reports_no_refusals() {
    let dir = TempDir::new().unwrap();
    let res = dir.path().join("res.txt");
    let out = run(&[
        "discover",
        "--train",
        data("TRAIN").to_str().unwrap(),
        "--r",
        "0.5",
        "--p",
        "0",
        "--out",
        res.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let line = stdout(&out);
    assert!(
        line.contains("epsilon=off") && line.contains("refused=0.0%"),
        "{line}"
    );
}

#[test]
fn usage_errors_exit_2() {
    let train = data("TRAIN");
    let t = train.to_str().unwrap();
    let out = run(&["discover", "--train", t, "--p", "101", "--out", "x"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("p must be in [0,100]"));

    assert_eq!(run(&["evaluate", "--train", t]).status.code(), Some(2));
    assert_eq!(
        run(&["gen", "--n", "20", "--m", "8", "--out", "x"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["discover", "--train", t, "--phi", "1.5", "--out", "x"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["discover", "--train", t, "--r", "2", "--out", "x"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["bench", "--train", t, "--test", t, "--variants", "bogus"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_1() {
    let dir = TempDir::new().unwrap();
    let out = run(&[
        "discover",
        "--train",
        "/nonexistent/train.txt",
        "--out",
        "x",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("/nonexistent/train.txt"));

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "1,0.5,0.25\n2,0.5\n").unwrap();
    let out = run(&["discover", "--train", bad.to_str().unwrap(), "--out", "x"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("ragged line 2"));
}

#[test]
fn evaluate_single_row() {
    let out = run(&[
        "evaluate",
        "--train",
        data("TRAIN").to_str().unwrap(),
        "--test",
        data("TEST").to_str().unwrap(),
        "--r",
        "1",
        "--p",
        "25",
        "--seed",
        "7",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(header[0], "kind");
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], "single");
    let test_acc: f64 = rows[0][10].parse().unwrap();
    assert!((0.0..=1.0).contains(&test_acc));
}

#[test]
fn evaluate_grid_rows() {
    let out = run(&[
        "evaluate",
        "--grid",
        "--train",
        data("TRAIN").to_str().unwrap(),
        "--test",
        data("TEST").to_str().unwrap(),
        "--seed",
        "7",
        "--threads",
        "2",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (_, rows) = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 13);
    assert!(rows[..12].iter().all(|r| r[0] == "cell"));
    assert_eq!(rows[12][0], "selected");
    let best: f64 = rows[..12]
        .iter()
        .map(|r| r[9].parse::<f64>().unwrap())
        .fold(0.0, f64::max);
    assert_eq!(rows[12][9].parse::<f64>().unwrap(), best);
}

#[test]
fn bench_variant_sets() {
    let dir = TempDir::new().unwrap();
    let train = gen(&dir, "train.txt", 1);
    let test = gen(&dir, "test.txt", 2);
    let out = run(&[
        "bench",
        "--train",
        &train,
        "--test",
        &test,
        "--variants",
        "pruning-only",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(header.len(), 16);
    let names: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(names, ["neither", "prune"]);
    let evals: Vec<u64> = rows.iter().map(|r| r[9].parse().unwrap()).collect();
    assert!(evals[1] < evals[0]);
}

#[test]
fn gen_is_reproducible_and_loadable() {
    let dir = TempDir::new().unwrap();
    let a = gen(&dir, "a.txt", 1);
    let b = gen(&dir, "b.txt", 1);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let ds = shapelet_core::load_dataset(&shapelet_core::DatasetFileSpec::new(&a)).unwrap();
    assert_eq!((ds.n_series(), ds.series_len()), (40, 64));
}

#[test]
fn help_documents_csv_headers() {
    let out = run(&["bench", "--help"]);
    assert!(stdout(&out).contains("window_evals"));
    let out = run(&["evaluate", "--help"]);
    assert!(stdout(&out).contains("seconds_total"));
}
