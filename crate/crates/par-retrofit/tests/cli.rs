//! Exit-code and diagnostic contracts of the `par` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn par(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_par"))
        .args(args)
        .output()
        .expect("par binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

const CORPUS: &str = "1\tthe cat sat down\tthe cat rested down\n\
                      0\tthe cat sat down\ta dog barked loudly\n\
                      1\ta dog barked loudly\ta dog yelped loudly\n\
                      0\ta dog barked loudly\tbirds sang all day\n";

fn quick_config(dir: &Path, corpus: &Path) -> PathBuf {
    write(
        dir,
        "run.cfg",
        &format!(
            "corpus = {}\nembedding_dim = 6\nencoder.kind = window-mean\nseed = 7\n\
             heldout_fraction = 0.5\ntrain.max_epochs = 2\ntrain.patience = 2\n\
             train.batch_size = 8\ntrain.mlp_epochs = 4\ntrain.mlp_hidden = 8\n\
             gradcheck.trials = 5\n",
            corpus.display()
        ),
    )
}

#[test]
fn missing_config_flag_fails() {
    let out = par(&["train"]);
    assert!(!out.status.success());
}

#[test]
fn missing_config_file_names_path() {
    let out = par(&["train", "--config", "/nonexistent/run.cfg"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("/nonexistent/run.cfg"), "{}", stderr(&out));
}

#[test]
fn unknown_config_key_reports_file_and_line() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(
        tmp.path(),
        "bad.cfg",
        "embedding_dim = 4\nencoder.kind = birnn\nmystery = 1\n",
    );
    let out = par(&["train", "--config", cfg.to_str().unwrap()]);
    assert!(!out.status.success());
    let err = stderr(&out);
    assert!(err.contains("unknown key mystery"), "{}", err);
    assert!(err.contains("bad.cfg:3"), "{}", err);
}

#[test]
fn train_missing_corpus_names_path() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(
        tmp.path(),
        "run.cfg",
        "corpus = ghost.tsv\nembedding_dim = 6\nencoder.kind = window-mean\n",
    );
    let out = par(&["train", "--config", cfg.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("ghost.tsv"), "{}", stderr(&out));
}

#[test]
fn train_zero_epochs_writes_identity_and_succeeds() {
    let tmp = tempfile::tempdir().unwrap();
    let corpus = write(tmp.path(), "pairs.tsv", CORPUS);
    let cfg = write(
        tmp.path(),
        "run.cfg",
        &format!(
            "corpus = {}\nembedding_dim = 6\nencoder.kind = window-mean\n\
             heldout_fraction = 0.5\ntrain.max_epochs = 0\n",
            corpus.display()
        ),
    );
    let out_dir = tmp.path().join("out");
    let out = par(&[
        "train",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = fs::read_to_string(out_dir.join("matrix.txt")).unwrap();
    assert!(text.starts_with("6\n"));
    let first_row: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split_whitespace()
        .map(|x| x.parse().unwrap())
        .collect();
    assert_eq!(first_row[0], 1.0);
    assert!(first_row[1..].iter().all(|&x| x == 0.0));
}

#[test]
fn seed_flag_overrides_config_seed() {
    let tmp = tempfile::tempdir().unwrap();
    let corpus = write(tmp.path(), "pairs.tsv", CORPUS);
    let cfg = quick_config(tmp.path(), &corpus);
    let run = |out: &Path, seed: &str| {
        let out = par(&[
            "train",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--seed",
            seed,
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
    };
    let (a, b, c) = (
        tmp.path().join("a"),
        tmp.path().join("b"),
        tmp.path().join("c"),
    );
    run(&a, "100");
    run(&b, "100");
    run(&c, "101");
    let read = |d: &Path| fs::read(d.join("matrix.txt")).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_ne!(read(&a), read(&c));
    let snapshot = fs::read_to_string(a.join("config.resolved.txt")).unwrap();
    assert!(snapshot.contains("seed = 100"), "{}", snapshot);
}

#[test]
fn report_dimension_mismatch_fails() {
    let tmp = tempfile::tempdir().unwrap();
    let corpus = write(tmp.path(), "pairs.tsv", CORPUS);
    let cfg = quick_config(tmp.path(), &corpus);
    let matrix = write(tmp.path(), "m8.txt", &make_identity_text(8));
    let out = par(&[
        "report",
        "--config",
        cfg.to_str().unwrap(),
        "--matrix",
        matrix.to_str().unwrap(),
        "--out",
        tmp.path().join("rep").to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("dimension mismatch"), "{}", stderr(&out));
}

fn make_identity_text(k: usize) -> String {
    let mut out = format!("{}\n", k);
    for r in 0..k {
        let row: Vec<String> = (0..k)
            .map(|c| if r == c { "1.0".into() } else { "0.0".into() })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[test]
fn report_writes_csv_and_table() {
    let tmp = tempfile::tempdir().unwrap();
    let corpus = write(tmp.path(), "pairs.tsv", CORPUS);
    let cfg = quick_config(tmp.path(), &corpus);
    let rep = tmp.path().join("rep");
    let out = par(&[
        "report",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        rep.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("paraphrase"));
    let csv = fs::read_to_string(rep.join("distance_report.csv")).unwrap();
    assert!(csv.starts_with("pair_id,word,label,l2,cosine"));
}

#[test]
fn gradcheck_clean_passes_perturbed_fails() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(
        tmp.path(),
        "gc.cfg",
        "embedding_dim = 4\nencoder.kind = window-mean\nseed = 3\ngradcheck.trials = 5\n",
    );
    let clean = par(&["gradcheck", "--config", cfg.to_str().unwrap()]);
    assert!(clean.status.success());
    assert!(String::from_utf8_lossy(&clean.stdout).contains("max relative error"));
    let broken = par(&[
        "gradcheck",
        "--config",
        cfg.to_str().unwrap(),
        "--perturb",
        "0.01",
    ]);
    assert!(!broken.status.success());
}

#[test]
fn gridsearch_all_cells_failing_exits_nonzero() {
    let tmp = tempfile::tempdir().unwrap();
    let corpus = write(
        tmp.path(),
        "pairs.tsv",
        "1\talpha beta\tgamma delta\n0\talpha beta\tepsilon zeta\n",
    );
    let cfg = write(
        tmp.path(),
        "run.cfg",
        &format!(
            "corpus = {}\nembedding_dim = 6\nencoder.kind = window-mean\n\
             heldout_fraction = 0.5\ntrain.max_epochs = 1\ngrid.gamma = 1,2\ngrid.lambda = 1\n",
            corpus.display()
        ),
    );
    let out = par(&[
        "gridsearch",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        tmp.path().join("grid").to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(!stderr(&out).is_empty());
}

#[test]
fn gridsearch_writes_cells_and_winner_config() {
    let tmp = tempfile::tempdir().unwrap();
    let corpus = write(tmp.path(), "pairs.tsv", CORPUS);
    let cfg = quick_config(tmp.path(), &corpus);
    let grid = tmp.path().join("grid");
    let out = par(&[
        "gridsearch",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        grid.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = fs::read_to_string(grid.join("grid_results.csv")).unwrap();
    assert!(csv.starts_with("gamma,lambda,heldout_acc,epochs,status"));
    assert_eq!(csv.lines().count(), 1 + 4 * 4);
    assert!(grid.join("winner.config.txt").is_file());
}
