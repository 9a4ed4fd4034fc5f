//! Run configuration: a flat key = value file that resolves every knob
//! of a run. Parsing is strict (unknown or duplicate keys are errors)
//! and serialization is total, so a resolved snapshot reparses to the
//! same configuration.

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::corpus::Occurrence;
use crate::embed::InputEmbedder;
use crate::encoder::{EncoderModel, LayerMode};
use crate::error::{Error, Result};
use crate::rng::sub_seed;
use crate::train::TrainConfig;

#[derive(Clone, Debug, PartialEq)]
pub enum EncoderConfig {
    WindowMean { radius: usize },
    BiRnn { layers: usize, hidden_dim: usize, layer_mode: LayerMode },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub corpus: Option<PathBuf>,
    pub heldout_fraction: f64,
    pub embedding_dim: usize,
    pub embedding_table: Option<PathBuf>,
    pub encoder: EncoderConfig,
    pub train: TrainConfig,
    pub seed: u64,
    pub grid_gamma: Vec<f64>,
    pub grid_lambda: Vec<f64>,
    pub gradcheck_trials: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            corpus: None,
            heldout_fraction: 0.25,
            embedding_dim: 16,
            embedding_table: None,
            encoder: EncoderConfig::BiRnn {
                layers: 1,
                hidden_dim: 16,
                layer_mode: LayerMode::TopLayer,
            },
            train: TrainConfig::default(),
            seed: 0,
            grid_gamma: vec![0.5, 1.0, 2.0, 4.0],
            grid_lambda: vec![0.1, 0.5, 1.0, 2.0],
            gradcheck_trials: 30,
        }
    }
}

fn parse_num<T: FromStr>(file: &str, line: usize, key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| {
        Error::parse(
            file,
            line,
            format!("invalid value {:?} for {}", value, key),
        )
    })
}

fn parse_list(file: &str, line: usize, key: &str, value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|part| parse_num(file, line, key, part.trim()))
        .collect()
}

impl RunConfig {
    /// Replaces the master seed; named sub-seeds derive from it.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self.train.seed = seed;
        self
    }

    pub fn parse_str(text: &str, file: &str) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        let mut seen: HashSet<String> = HashSet::new();
        let mut kind: Option<&str> = None;
        let mut radius: Option<usize> = None;
        let mut layers: Option<usize> = None;
        let mut hidden: Option<usize> = None;
        let mut layer_mode: Option<LayerMode> = None;
        let mut saw_dim = false;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::parse(file, line_no, format!("expected key = value, got {:?}", line))
            })?;
            let key = key.trim();
            let value = value.trim();
            if !seen.insert(key.to_string()) {
                return Err(Error::parse(file, line_no, format!("duplicate key {}", key)));
            }
            match key {
                "corpus" => cfg.corpus = Some(PathBuf::from(value)),
                "heldout_fraction" => {
                    cfg.heldout_fraction = parse_num(file, line_no, key, value)?
                }
                "embedding_dim" => {
                    cfg.embedding_dim = parse_num(file, line_no, key, value)?;
                    saw_dim = true;
                }
                "embedding_table" => cfg.embedding_table = Some(PathBuf::from(value)),
                "seed" => {
                    cfg.seed = parse_num(file, line_no, key, value)?;
                    cfg.train.seed = cfg.seed;
                }
                "encoder.kind" => match value {
                    "window-mean" | "birnn" => kind = Some(if value == "birnn" { "birnn" } else { "window-mean" }),
                    other => {
                        return Err(Error::parse(
                            file,
                            line_no,
                            format!("unknown encoder kind {:?}", other),
                        ))
                    }
                },
                "encoder.radius" => radius = Some(parse_num(file, line_no, key, value)?),
                "encoder.layers" => layers = Some(parse_num(file, line_no, key, value)?),
                "encoder.hidden_dim" => hidden = Some(parse_num(file, line_no, key, value)?),
                "encoder.layer_mode" => {
                    layer_mode = Some(value.parse().map_err(|e: Error| {
                        Error::parse(file, line_no, e.to_string())
                    })?)
                }
                "train.gamma" => cfg.train.gamma = parse_num(file, line_no, key, value)?,
                "train.lambda" => cfg.train.lambda = parse_num(file, line_no, key, value)?,
                "train.learning_rate" => {
                    cfg.train.learning_rate = parse_num(file, line_no, key, value)?
                }
                "train.batch_size" => {
                    cfg.train.batch_size = parse_num(file, line_no, key, value)?
                }
                "train.max_epochs" => {
                    cfg.train.max_epochs = parse_num(file, line_no, key, value)?
                }
                "train.patience" => cfg.train.patience = parse_num(file, line_no, key, value)?,
                "train.occurrence" => {
                    cfg.train.occurrence =
                        Occurrence::from_str(value).map_err(|e| {
                            Error::parse(file, line_no, e.to_string())
                        })?
                }
                "train.aggregation" => {
                    cfg.train.aggregation = value.parse().map_err(|e: Error| {
                        Error::parse(file, line_no, e.to_string())
                    })?
                }
                "train.scope" => {
                    cfg.train.scope = value.parse().map_err(|e: Error| {
                        Error::parse(file, line_no, e.to_string())
                    })?
                }
                "train.stopword_filter" => {
                    cfg.train.stopword_filter = parse_num(file, line_no, key, value)?
                }
                "train.mlp_hidden" => {
                    cfg.train.mlp.hidden_dim = parse_num(file, line_no, key, value)?
                }
                "train.mlp_epochs" => {
                    cfg.train.mlp.epochs = parse_num(file, line_no, key, value)?
                }
                "train.mlp_batch" => {
                    cfg.train.mlp.batch_size = parse_num(file, line_no, key, value)?
                }
                "train.mlp_learning_rate" => {
                    cfg.train.mlp.learning_rate = parse_num(file, line_no, key, value)?
                }
                "grid.gamma" => cfg.grid_gamma = parse_list(file, line_no, key, value)?,
                "grid.lambda" => cfg.grid_lambda = parse_list(file, line_no, key, value)?,
                "gradcheck.trials" => {
                    cfg.gradcheck_trials = parse_num(file, line_no, key, value)?
                }
                other => {
                    return Err(Error::parse(file, line_no, format!("unknown key {}", other)))
                }
            }
        }
        if !saw_dim {
            return Err(Error::parse(file, 0, "missing required key embedding_dim"));
        }
        if cfg.embedding_dim == 0 {
            return Err(Error::parse(file, 0, "embedding_dim must be positive"));
        }
        if !(cfg.heldout_fraction > 0.0 && cfg.heldout_fraction < 1.0) {
            return Err(Error::parse(
                file,
                0,
                format!("heldout_fraction must be in (0, 1), got {}", cfg.heldout_fraction),
            ));
        }
        cfg.encoder = match kind {
            None => return Err(Error::parse(file, 0, "missing required key encoder.kind")),
            Some("window-mean") => {
                if layers.is_some() || hidden.is_some() || layer_mode.is_some() {
                    return Err(Error::parse(
                        file,
                        0,
                        "encoder.layers/hidden_dim/layer_mode require encoder.kind = birnn",
                    ));
                }
                EncoderConfig::WindowMean {
                    radius: radius.unwrap_or(2),
                }
            }
            Some(_) => {
                if radius.is_some() {
                    return Err(Error::parse(
                        file,
                        0,
                        "encoder.radius requires encoder.kind = window-mean",
                    ));
                }
                EncoderConfig::BiRnn {
                    layers: layers.unwrap_or(1),
                    hidden_dim: hidden.unwrap_or(16),
                    layer_mode: layer_mode.unwrap_or(LayerMode::TopLayer),
                }
            }
        };
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_str(&text, &path.display().to_string())
    }

    /// Canonical resolved snapshot; parses back to an equal config.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        if let Some(corpus) = &self.corpus {
            out.push_str(&format!("corpus = {}\n", corpus.display()));
        }
        out.push_str(&format!("heldout_fraction = {}\n", self.heldout_fraction));
        out.push_str(&format!("embedding_dim = {}\n", self.embedding_dim));
        if let Some(table) = &self.embedding_table {
            out.push_str(&format!("embedding_table = {}\n", table.display()));
        }
        out.push_str(&format!("seed = {}\n", self.seed));
        match &self.encoder {
            EncoderConfig::WindowMean { radius } => {
                out.push_str("encoder.kind = window-mean\n");
                out.push_str(&format!("encoder.radius = {}\n", radius));
            }
            EncoderConfig::BiRnn {
                layers,
                hidden_dim,
                layer_mode,
            } => {
                out.push_str("encoder.kind = birnn\n");
                out.push_str(&format!("encoder.layers = {}\n", layers));
                out.push_str(&format!("encoder.hidden_dim = {}\n", hidden_dim));
                out.push_str(&format!("encoder.layer_mode = {}\n", layer_mode.as_str()));
            }
        }
        let t = &self.train;
        out.push_str(&format!("train.gamma = {}\n", t.gamma));
        out.push_str(&format!("train.lambda = {}\n", t.lambda));
        out.push_str(&format!("train.learning_rate = {}\n", t.learning_rate));
        out.push_str(&format!("train.batch_size = {}\n", t.batch_size));
        out.push_str(&format!("train.max_epochs = {}\n", t.max_epochs));
        out.push_str(&format!("train.patience = {}\n", t.patience));
        out.push_str(&format!("train.occurrence = {}\n", t.occurrence.as_str()));
        out.push_str(&format!("train.aggregation = {}\n", t.aggregation.as_str()));
        out.push_str(&format!("train.scope = {}\n", t.scope.as_str()));
        out.push_str(&format!("train.stopword_filter = {}\n", t.stopword_filter));
        out.push_str(&format!("train.mlp_hidden = {}\n", t.mlp.hidden_dim));
        out.push_str(&format!("train.mlp_epochs = {}\n", t.mlp.epochs));
        out.push_str(&format!("train.mlp_batch = {}\n", t.mlp.batch_size));
        out.push_str(&format!(
            "train.mlp_learning_rate = {}\n",
            t.mlp.learning_rate
        ));
        let join = |xs: &[f64]| {
            xs.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        out.push_str(&format!("grid.gamma = {}\n", join(&self.grid_gamma)));
        out.push_str(&format!("grid.lambda = {}\n", join(&self.grid_lambda)));
        out.push_str(&format!("gradcheck.trials = {}\n", self.gradcheck_trials));
        out
    }

    pub fn build_encoder(&self) -> Result<EncoderModel> {
        match &self.encoder {
            EncoderConfig::WindowMean { radius } => {
                EncoderModel::window_mean(self.embedding_dim, *radius)
            }
            EncoderConfig::BiRnn {
                layers,
                hidden_dim,
                layer_mode,
            } => EncoderModel::birnn(
                self.embedding_dim,
                self.embedding_dim,
                *layers,
                *hidden_dim,
                sub_seed(self.seed, "weights"),
                *layer_mode,
            ),
        }
    }

    pub fn build_embedder(&self) -> Result<InputEmbedder> {
        let hash_seed = sub_seed(self.seed, "embed");
        match &self.embedding_table {
            Some(path) => {
                let (dim, table) = crate::embed::load_table(path)?;
                if dim != self.embedding_dim {
                    return Err(Error::DimMismatch {
                        expected: self.embedding_dim,
                        actual: dim,
                        context: "embedding table vs embedding_dim",
                    });
                }
                InputEmbedder::with_table(dim, table, hash_seed)
            }
            None => Ok(InputEmbedder::hashed(self.embedding_dim, hash_seed)),
        }
    }

    pub fn corpus_path(&self) -> Result<&Path> {
        self.corpus
            .as_deref()
            .ok_or_else(|| Error::InvalidInput("config does not set a corpus path".into()))
    }

    /// Per-run sub-seeds, named so partial reruns stay aligned.
    pub fn split_seed(&self) -> u64 {
        sub_seed(self.seed, "split")
    }
}
