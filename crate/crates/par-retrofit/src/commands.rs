//! Command implementations behind the `par` binary. Each validates its
//! input paths before doing any work and reports failures as errors;
//! the binary maps those to stderr plus a nonzero exit.

use std::fs;
use std::path::{Path, PathBuf};

use crate::config::{EncoderConfig, RunConfig};
use crate::corpus::{load_corpus, split};
use crate::error::{Error, Result};
use crate::metrics::distance_report;
use crate::train::{
    grad_check, grid_cells_csv, grid_search, train, CheckEncoder, GradCheckReport,
};
use crate::transform::TransformMatrix;

/// Acceptance threshold for the finite-difference gradient audit.
pub const GRAD_TOLERANCE: f64 = 1e-4;

fn require_file(path: &Path) -> Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(Error::io(
            path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "no such file"),
        ))
    }
}

fn check_input_paths(cfg: &RunConfig, needs_corpus: bool) -> Result<()> {
    if needs_corpus {
        require_file(cfg.corpus_path()?)?;
    }
    if let Some(table) = &cfg.embedding_table {
        require_file(table)?;
    }
    Ok(())
}

fn write_out(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Error::io(path.clone(), e))?;
    Ok(path)
}

pub fn cmd_train(cfg: &RunConfig, out_dir: &Path) -> Result<()> {
    check_input_paths(cfg, true)?;
    let pairs = load_corpus(cfg.corpus_path()?)?;
    let (train_pairs, heldout) = split(&pairs, cfg.heldout_fraction, cfg.split_seed())?;
    let enc = cfg.build_encoder()?;
    let embedder = cfg.build_embedder()?;
    let (m, report) = train(&train_pairs, &heldout, &enc, &embedder, &cfg.train)?;
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    m.save(&out_dir.join("matrix.txt"))?;
    write_out(out_dir, "train_report.csv", &report.to_csv())?;
    write_out(out_dir, "config.resolved.txt", &cfg.serialize())?;
    println!(
        "train: {} epochs, best {}, stop {}",
        report.epochs.len(),
        report.best_epoch,
        report.stop_reason.as_str()
    );
    Ok(())
}

pub fn cmd_report(cfg: &RunConfig, matrix_path: Option<&Path>, out_dir: &Path) -> Result<()> {
    check_input_paths(cfg, true)?;
    if let Some(path) = matrix_path {
        require_file(path)?;
    }
    let pairs = load_corpus(cfg.corpus_path()?)?;
    let enc = cfg.build_encoder()?;
    let embedder = cfg.build_embedder()?;
    let m = match matrix_path {
        Some(path) => TransformMatrix::load(path)?,
        None => TransformMatrix::identity(cfg.embedding_dim),
    };
    if m.dim() != cfg.embedding_dim {
        return Err(Error::DimMismatch {
            expected: cfg.embedding_dim,
            actual: m.dim(),
            context: "transform matrix vs embedding_dim",
        });
    }
    let report = distance_report(&pairs, &enc, &m, &embedder, cfg.train.occurrence)?;
    write_out(out_dir, "distance_report.csv", &report.to_csv())?;
    let table = report.render_table();
    write_out(out_dir, "distance_table.txt", &table)?;
    print!("{}", table);
    Ok(())
}

pub fn cmd_gradcheck(cfg: &RunConfig, perturbation: f64) -> Result<GradCheckReport> {
    let kind = match cfg.encoder {
        EncoderConfig::WindowMean { .. } => CheckEncoder::WindowMean,
        EncoderConfig::BiRnn { .. } => CheckEncoder::BiRnn,
    };
    let report = grad_check(kind, cfg.gradcheck_trials, cfg.seed, perturbation)?;
    let verdict = if report.max_rel_error <= GRAD_TOLERANCE {
        "ok"
    } else {
        "FAILED"
    };
    println!(
        "gradcheck {}: max relative error {:.3e} over {} trials",
        verdict, report.max_rel_error, report.trials
    );
    Ok(report)
}

pub fn cmd_gridsearch(cfg: &RunConfig, out_dir: &Path) -> Result<()> {
    check_input_paths(cfg, true)?;
    let pairs = load_corpus(cfg.corpus_path()?)?;
    let (train_pairs, heldout) = split(&pairs, cfg.heldout_fraction, cfg.split_seed())?;
    let enc = cfg.build_encoder()?;
    let embedder = cfg.build_embedder()?;
    let (winner, cells) = grid_search(
        &train_pairs,
        &heldout,
        &enc,
        &embedder,
        &cfg.train,
        &cfg.grid_gamma,
        &cfg.grid_lambda,
    )?;
    write_out(out_dir, "grid_results.csv", &grid_cells_csv(&cells))?;
    let mut resolved = cfg.clone();
    resolved.train = winner;
    write_out(out_dir, "winner.config.txt", &resolved.serialize())?;
    println!(
        "gridsearch: winner gamma {} lambda {}",
        resolved.train.gamma, resolved.train.lambda
    );
    Ok(())
}
