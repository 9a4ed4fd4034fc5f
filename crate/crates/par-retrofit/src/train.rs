//! The retrofitting objective and its optimizer: contextual distance,
//! hinge loss over negative-sampled triplets, the orthogonality
//! regularizer, exact gradients with respect to the transform, and the
//! SGD loop with paraphrase-identification early stopping.

use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha12Rng;

use crate::corpus::{
    build_shared_index, sentence_by_id, Occurrence, ParaphrasePair, Sentence, SharedEntry,
    SharedWordIndex,
};
use crate::embed::InputEmbedder;
use crate::encoder::EncoderModel;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::paraid::{heldout_accuracy, MlpConfig};
use crate::rng::{epoch_seed, rng_from_seed, sub_seed};
use crate::transform::{ortho_defect, ortho_residual, TransformMatrix};

/// How per-batch hinge terms combine into the batch loss.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Aggregation {
    Mean,
    Sum,
}

impl Aggregation {
    pub fn as_str(&self) -> &'static str {
        match self {
            Aggregation::Mean => "mean",
            Aggregation::Sum => "sum",
        }
    }
}

impl FromStr for Aggregation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean" => Ok(Aggregation::Mean),
            "sum" => Ok(Aggregation::Sum),
            other => Err(Error::InvalidInput(format!(
                "unknown aggregation {:?} (expected mean or sum)",
                other
            ))),
        }
    }
}

/// Whether the transform is applied to every token or only to the shared
/// word (ablation).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransformScope {
    All,
    WordOnly,
}

impl TransformScope {
    pub fn as_str(&self) -> &'static str {
        match self {
            TransformScope::All => "all",
            TransformScope::WordOnly => "word-only",
        }
    }
}

impl FromStr for TransformScope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(TransformScope::All),
            "word-only" => Ok(TransformScope::WordOnly),
            other => Err(Error::InvalidInput(format!(
                "unknown transform scope {:?} (expected all or word-only)",
                other
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub gamma: f64,
    pub lambda: f64,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub max_epochs: usize,
    pub patience: usize,
    pub seed: u64,
    pub occurrence: Occurrence,
    pub aggregation: Aggregation,
    pub scope: TransformScope,
    pub stopword_filter: bool,
    pub mlp: MlpConfig,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            gamma: 2.0,
            lambda: 1.0,
            learning_rate: 0.005,
            batch_size: 128,
            max_epochs: 30,
            patience: 3,
            seed: 0,
            occurrence: Occurrence::First,
            aggregation: Aggregation::Mean,
            scope: TransformScope::All,
            stopword_filter: false,
            mlp: MlpConfig::default(),
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0) {
            return Err(Error::InvalidInput(format!(
                "gamma must be positive, got {}",
                self.gamma
            )));
        }
        if !(self.lambda > 0.0) {
            return Err(Error::InvalidInput(format!(
                "lambda must be positive, got {}",
                self.lambda
            )));
        }
        if !(self.learning_rate > 0.0) {
            return Err(Error::InvalidInput(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidInput("batch size must be positive".into()));
        }
        if self.patience == 0 {
            return Err(Error::InvalidInput("patience must be at least 1".into()));
        }
        Ok(())
    }
}

/// Which side of the positive pair the negative sample replaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    S1,
    S2,
}

/// One training example: a shared word in a paraphrase pair plus a
/// corrupted pair that differs in exactly one side. The replacement
/// sentence is referenced by corpus sentence id and always contains the
/// word; neg_pos is its first occurrence there.
#[derive(Clone, Debug)]
pub struct TripletInstance {
    pub word: String,
    pub pair_id: usize,
    pub pos1: usize,
    pub pos2: usize,
    pub side: Side,
    pub neg_id: usize,
    pub neg_pos: usize,
}

fn transformed_inputs(
    tokens: &[String],
    m: &TransformMatrix,
    embedder: &InputEmbedder,
    scope: TransformScope,
    word_pos: usize,
) -> Result<(Vec<Vector>, Vec<Vector>)> {
    let raw = embedder.embed_tokens(tokens)?;
    let inputs = match scope {
        TransformScope::All => raw.iter().map(|x| m.apply(x)).collect::<Result<Vec<_>>>()?,
        TransformScope::WordOnly => {
            let mut inputs = raw.clone();
            inputs[word_pos] = m.apply(&raw[word_pos])?;
            inputs
        }
    };
    Ok((raw, inputs))
}

/// d_{S1,S2}(w): L2 distance between the contextual vectors of `word` at
/// the stated positions after the transform is applied to the inputs.
#[allow(clippy::too_many_arguments)]
pub fn context_distance(
    word: &str,
    s1: &Sentence,
    pos1: usize,
    s2: &Sentence,
    pos2: usize,
    enc: &EncoderModel,
    m: &TransformMatrix,
    embedder: &InputEmbedder,
    scope: TransformScope,
) -> Result<f64> {
    for (s, pos, which) in [(s1, pos1, "first"), (s2, pos2, "second")] {
        if s.tokens().get(pos).map(String::as_str) != Some(word) {
            return Err(Error::InvalidInput(format!(
                "word {:?} not at position {} of the {} sentence",
                word, pos, which
            )));
        }
    }
    let (_, in1) = transformed_inputs(s1.tokens(), m, embedder, scope, pos1)?;
    let (_, in2) = transformed_inputs(s2.tokens(), m, embedder, scope, pos2)?;
    let e1 = enc.encode(&in1)?;
    let e2 = enc.encode(&in2)?;
    Ok(e1.get(pos1).l2_distance(e2.get(pos2)))
}

/// max(d_pos + gamma - d_neg, 0)
pub fn hinge_term(d_pos: f64, d_neg: f64, gamma: f64) -> f64 {
    debug_assert!(d_pos >= 0.0 && d_neg >= 0.0 && gamma > 0.0);
    (d_pos + gamma - d_neg).max(0.0)
}

/// Negative sampling: a fair coin picks the side to replace, then a
/// uniform draw over pool(word) minus the two original sentences picks
/// the replacement. Returns None (a skip) when no candidate exists; no
/// randomness is consumed in that case.
pub fn sample_negative(
    pairs: &[ParaphrasePair],
    entry: &SharedEntry,
    index: &SharedWordIndex,
    rng: &mut ChaCha12Rng,
) -> Option<TripletInstance> {
    let own1 = entry.pair_id * 2;
    let own2 = own1 + 1;
    let eligible: Vec<usize> = index
        .pool(&entry.word)
        .iter()
        .copied()
        .filter(|&id| id != own1 && id != own2)
        .collect();
    if eligible.is_empty() {
        return None;
    }
    let side = if rng.gen_range(0..2u32) == 0 {
        Side::S1
    } else {
        Side::S2
    };
    let neg_id = eligible[rng.gen_range(0..eligible.len())];
    let neg_pos = sentence_by_id(pairs, neg_id)
        .position_of(&entry.word)
        .expect("pool invariant: sentence contains the word");
    Some(TripletInstance {
        word: entry.word.clone(),
        pair_id: entry.pair_id,
        pos1: entry.pos1,
        pos2: entry.pos2,
        side,
        neg_id,
        neg_pos,
    })
}

fn instance_distances(
    inst: &TripletInstance,
    pairs: &[ParaphrasePair],
    enc: &EncoderModel,
    m: &TransformMatrix,
    embedder: &InputEmbedder,
    scope: TransformScope,
) -> Result<(f64, f64)> {
    let pair = &pairs[inst.pair_id];
    let d_pos = context_distance(
        &inst.word, &pair.s1, inst.pos1, &pair.s2, inst.pos2, enc, m, embedder, scope,
    )?;
    let neg = sentence_by_id(pairs, inst.neg_id);
    let d_neg = match inst.side {
        Side::S1 => context_distance(
            &inst.word, neg, inst.neg_pos, &pair.s2, inst.pos2, enc, m, embedder, scope,
        )?,
        Side::S2 => context_distance(
            &inst.word, &pair.s1, inst.pos1, neg, inst.neg_pos, enc, m, embedder, scope,
        )?,
    };
    Ok((d_pos, d_neg))
}

/// (hinge aggregate, ortho residual). Total objective is
/// first + lambda * second.
pub fn batch_loss(
    batch: &[TripletInstance],
    pairs: &[ParaphrasePair],
    enc: &EncoderModel,
    m: &TransformMatrix,
    embedder: &InputEmbedder,
    cfg: &TrainConfig,
) -> Result<(f64, f64)> {
    if batch.is_empty() {
        return Err(Error::InvalidInput("empty batch".into()));
    }
    let mut hinge_sum = 0.0;
    for inst in batch {
        let (d_pos, d_neg) = instance_distances(inst, pairs, enc, m, embedder, cfg.scope)?;
        hinge_sum += hinge_term(d_pos, d_neg, cfg.gamma);
    }
    let hinge = match cfg.aggregation {
        Aggregation::Mean => hinge_sum / batch.len() as f64,
        Aggregation::Sum => hinge_sum,
    };
    Ok((hinge, ortho_residual(m.matrix())))
}

/// Adds coeff * d(distance)/dM for one sentence pair to `grad`. The
/// subgradient at zero distance is zero.
#[allow(clippy::too_many_arguments)]
fn accumulate_distance_grad(
    grad: &mut Matrix,
    word_sentences: [(&Sentence, usize); 2],
    enc: &EncoderModel,
    m: &TransformMatrix,
    embedder: &InputEmbedder,
    scope: TransformScope,
    coeff: f64,
) -> Result<()> {
    let [(s1, pos1), (s2, pos2)] = word_sentences;
    let (raw1, in1) = transformed_inputs(s1.tokens(), m, embedder, scope, pos1)?;
    let (raw2, in2) = transformed_inputs(s2.tokens(), m, embedder, scope, pos2)?;
    let e1 = enc.encode(&in1)?;
    let e2 = enc.encode(&in2)?;
    let diff = e1.get(pos1).sub(e2.get(pos2));
    let d = diff.norm();
    if d < 1e-12 {
        return Ok(());
    }
    let u = diff.scale(1.0 / d);
    for (sign, inputs, raw, pos) in [(1.0, &in1, &raw1, pos1), (-1.0, &in2, &raw2, pos2)] {
        let g = enc.encode_grad(inputs, pos, &u)?;
        match scope {
            TransformScope::All => {
                for (gj, xj) in g.iter().zip(raw) {
                    grad.add_outer(gj, xj, coeff * sign);
                }
            }
            TransformScope::WordOnly => {
                grad.add_outer(&g[pos], &raw[pos], coeff * sign);
            }
        }
    }
    Ok(())
}

fn instance_grad_and_hinge(
    inst: &TripletInstance,
    pairs: &[ParaphrasePair],
    enc: &EncoderModel,
    m: &TransformMatrix,
    embedder: &InputEmbedder,
    cfg: &TrainConfig,
    grad: &mut Matrix,
) -> Result<f64> {
    let (d_pos, d_neg) = instance_distances(inst, pairs, enc, m, embedder, cfg.scope)?;
    let h = hinge_term(d_pos, d_neg, cfg.gamma);
    if h > 0.0 {
        let pair = &pairs[inst.pair_id];
        accumulate_distance_grad(
            grad,
            [(&pair.s1, inst.pos1), (&pair.s2, inst.pos2)],
            enc,
            m,
            embedder,
            cfg.scope,
            1.0,
        )?;
        let neg = sentence_by_id(pairs, inst.neg_id);
        let neg_pair = match inst.side {
            Side::S1 => [(neg, inst.neg_pos), (&pair.s2, inst.pos2)],
            Side::S2 => [(&pair.s1, inst.pos1), (neg, inst.neg_pos)],
        };
        accumulate_distance_grad(grad, neg_pair, enc, m, embedder, cfg.scope, -1.0)?;
    }
    Ok(h)
}

/// (gradient of the batch objective w.r.t. M, hinge aggregate). One pass:
/// inactive hinge terms contribute no gradient work beyond the forward
/// distances.
fn batch_grad_and_hinge(
    batch: &[TripletInstance],
    pairs: &[ParaphrasePair],
    enc: &EncoderModel,
    m: &TransformMatrix,
    embedder: &InputEmbedder,
    cfg: &TrainConfig,
) -> Result<(Matrix, f64)> {
    if batch.is_empty() {
        return Err(Error::InvalidInput("empty batch".into()));
    }
    let k = m.dim();
    let mut grad = Matrix::zeros(k, k);
    let mut hinge_sum = 0.0;
    for inst in batch {
        hinge_sum += instance_grad_and_hinge(inst, pairs, enc, m, embedder, cfg, &mut grad)?;
    }
    let hinge = match cfg.aggregation {
        Aggregation::Mean => {
            grad.scale_in_place(1.0 / batch.len() as f64);
            hinge_sum / batch.len() as f64
        }
        Aggregation::Sum => hinge_sum,
    };
    // d(residual)/dM = -2 M (I - M^T M) / residual; zero subgradient on
    // the orthogonal manifold itself.
    let residual = ortho_residual(m.matrix());
    if residual > 1e-12 {
        let defect = ortho_defect(m.matrix());
        let mut reg = m.matrix().matmul(&defect);
        reg.scale_in_place(-2.0 / residual);
        grad.add_scaled(&reg, cfg.lambda);
    }
    Ok((grad, hinge))
}

/// Exact gradient of batch_loss.0 + lambda * batch_loss.1 w.r.t. M.
pub fn grad_objective(
    batch: &[TripletInstance],
    pairs: &[ParaphrasePair],
    enc: &EncoderModel,
    m: &TransformMatrix,
    embedder: &InputEmbedder,
    cfg: &TrainConfig,
) -> Result<Matrix> {
    Ok(batch_grad_and_hinge(batch, pairs, enc, m, embedder, cfg)?.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    MaxEpochs,
    EarlyStopped,
}

impl StopReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            StopReason::MaxEpochs => "max-epochs",
            StopReason::EarlyStopped => "early-stopped",
        }
    }
}

#[derive(Clone, Debug)]
pub struct EpochRecord {
    pub epoch: usize,
    pub hinge_mean: f64,
    pub ortho_residual: f64,
    pub heldout_acc: f64,
    pub skipped: usize,
}

#[derive(Clone, Debug)]
pub struct TrainReport {
    pub epochs: Vec<EpochRecord>,
    pub best_epoch: usize,
    pub stop_reason: StopReason,
}

impl TrainReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epoch,hinge_mean,ortho_residual,heldout_acc\n");
        for r in &self.epochs {
            out.push_str(&format!(
                "{},{:.16e},{:.16e},{:.16e}\n",
                r.epoch, r.hinge_mean, r.ortho_residual, r.heldout_acc
            ));
        }
        out
    }

    pub fn skipped_total(&self) -> usize {
        self.epochs.iter().map(|r| r.skipped).sum()
    }
}

/// Full training loop. M starts at identity; every epoch reshuffles the
/// shared-word entries and draws fresh negatives from epoch-derived
/// seeds, so a rerun truncated at any epoch replays bit-identically.
/// Returns the transform snapshot from the best held-out epoch.
///
/// The observer sees (epoch, M after that epoch's updates).
pub fn train_with_observer(
    train_pairs: &[ParaphrasePair],
    heldout_pairs: &[ParaphrasePair],
    enc: &EncoderModel,
    embedder: &InputEmbedder,
    cfg: &TrainConfig,
    mut observer: impl FnMut(usize, &Matrix),
) -> Result<(TransformMatrix, TrainReport)> {
    cfg.validate()?;
    let k = enc.input_dim();
    if embedder.dim() != k {
        return Err(Error::DimMismatch {
            expected: k,
            actual: embedder.dim(),
            context: "embedder vs encoder input",
        });
    }
    let index = build_shared_index(train_pairs, cfg.occurrence, cfg.stopword_filter);
    if index.entries().is_empty() {
        return Err(Error::NoTriplets);
    }
    let mlp_cfg = MlpConfig {
        seed: sub_seed(cfg.seed, "mlp"),
        ..cfg.mlp
    };
    let mut m = TransformMatrix::identity(k);
    let mut records: Vec<EpochRecord> = Vec::new();
    let mut best: Option<(f64, usize, TransformMatrix)> = None;
    let mut stop_reason = StopReason::MaxEpochs;
    for epoch in 1..=cfg.max_epochs {
        let mut order: Vec<usize> = (0..index.entries().len()).collect();
        order.shuffle(&mut rng_from_seed(epoch_seed(cfg.seed, "shuffle", epoch)));
        let mut neg_rng = rng_from_seed(epoch_seed(cfg.seed, "negatives", epoch));
        let instances: Vec<TripletInstance> = order
            .iter()
            .filter_map(|&i| sample_negative(train_pairs, &index.entries()[i], &index, &mut neg_rng))
            .collect();
        let skipped = order.len() - instances.len();
        if instances.is_empty() {
            return Err(Error::NoTriplets);
        }
        let mut hinge_sum = 0.0;
        for batch in instances.chunks(cfg.batch_size) {
            let (grad, hinge) = batch_grad_and_hinge(batch, train_pairs, enc, &m, embedder, cfg)?;
            hinge_sum += match cfg.aggregation {
                Aggregation::Mean => hinge * batch.len() as f64,
                Aggregation::Sum => hinge,
            };
            m.matrix_mut().add_scaled(&grad, -cfg.learning_rate);
        }
        let acc = heldout_accuracy(train_pairs, heldout_pairs, enc, &m, embedder, &mlp_cfg)?;
        observer(epoch, m.matrix());
        records.push(EpochRecord {
            epoch,
            hinge_mean: hinge_sum / instances.len() as f64,
            ortho_residual: ortho_residual(m.matrix()),
            heldout_acc: acc,
            skipped,
        });
        let improved = best.as_ref().map_or(true, |(b, _, _)| acc > *b);
        if improved {
            best = Some((acc, epoch, m.clone()));
        }
        let best_epoch = best.as_ref().map(|(_, e, _)| *e).unwrap_or(0);
        if epoch - best_epoch >= cfg.patience {
            stop_reason = StopReason::EarlyStopped;
            break;
        }
    }
    let (best_epoch, final_m) = match best {
        Some((_, e, snapshot)) => (e, snapshot),
        None => (0, m),
    };
    Ok((
        final_m,
        TrainReport {
            epochs: records,
            best_epoch,
            stop_reason,
        },
    ))
}

pub fn train(
    train_pairs: &[ParaphrasePair],
    heldout_pairs: &[ParaphrasePair],
    enc: &EncoderModel,
    embedder: &InputEmbedder,
    cfg: &TrainConfig,
) -> Result<(TransformMatrix, TrainReport)> {
    train_with_observer(train_pairs, heldout_pairs, enc, embedder, cfg, |_, _| {})
}

#[derive(Clone, Debug)]
pub struct GridCell {
    pub gamma: f64,
    pub lambda: f64,
    pub heldout_acc: Option<f64>,
    pub epochs_run: usize,
    pub error: Option<String>,
}

/// Trains one run per (gamma, lambda) cell and picks the best held-out
/// accuracy; ties prefer smaller gamma, then smaller lambda.
pub fn grid_search(
    train_pairs: &[ParaphrasePair],
    heldout_pairs: &[ParaphrasePair],
    enc: &EncoderModel,
    embedder: &InputEmbedder,
    base: &TrainConfig,
    gamma_grid: &[f64],
    lambda_grid: &[f64],
) -> Result<(TrainConfig, Vec<GridCell>)> {
    if gamma_grid.is_empty() || lambda_grid.is_empty() {
        return Err(Error::InvalidInput("empty hyperparameter grid".into()));
    }
    let mut gammas = gamma_grid.to_vec();
    let mut lambdas = lambda_grid.to_vec();
    gammas.sort_by(|a, b| a.total_cmp(b));
    lambdas.sort_by(|a, b| a.total_cmp(b));
    let mut cells = Vec::with_capacity(gammas.len() * lambdas.len());
    let mut winner: Option<(f64, TrainConfig)> = None;
    let mut first_error: Option<Error> = None;
    for &gamma in &gammas {
        for &lambda in &lambdas {
            let cfg = TrainConfig {
                gamma,
                lambda,
                ..base.clone()
            };
            match train(train_pairs, heldout_pairs, enc, embedder, &cfg) {
                Ok((_, report)) if report.best_epoch > 0 => {
                    let acc = report.epochs[report.best_epoch - 1].heldout_acc;
                    cells.push(GridCell {
                        gamma,
                        lambda,
                        heldout_acc: Some(acc),
                        epochs_run: report.epochs.len(),
                        error: None,
                    });
                    if winner.as_ref().map_or(true, |(b, _)| acc > *b) {
                        winner = Some((acc, cfg));
                    }
                }
                Ok((_, report)) => {
                    cells.push(GridCell {
                        gamma,
                        lambda,
                        heldout_acc: None,
                        epochs_run: report.epochs.len(),
                        error: Some("no epochs ran".into()),
                    });
                }
                Err(e) => {
                    cells.push(GridCell {
                        gamma,
                        lambda,
                        heldout_acc: None,
                        epochs_run: 0,
                        error: Some(e.to_string()),
                    });
                    first_error.get_or_insert(e);
                }
            }
        }
    }
    match winner {
        Some((_, cfg)) => Ok((cfg, cells)),
        None => Err(first_error.unwrap_or_else(|| {
            Error::InvalidInput("no grid cell produced a usable run".into())
        })),
    }
}

pub fn grid_cells_csv(cells: &[GridCell]) -> String {
    let mut out = String::from("gamma,lambda,heldout_acc,epochs,status\n");
    for c in cells {
        let acc = c
            .heldout_acc
            .map(|a| format!("{:.16e}", a))
            .unwrap_or_default();
        let status = match &c.error {
            None => "ok".to_string(),
            Some(e) => format!("error: {}", e.replace(',', ";")),
        };
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            c.gamma, c.lambda, acc, c.epochs_run, status
        ));
    }
    out
}

/// Encoder family exercised by the gradient checker.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckEncoder {
    WindowMean,
    BiRnn,
}

#[derive(Clone, Copy, Debug)]
pub struct GradCheckReport {
    pub trials: usize,
    pub max_rel_error: f64,
}

/// Compares grad_objective against central finite differences over
/// randomized (encoder, corpus, batch, M) configurations. `perturbation`
/// is a detector-sanity hook: it is added to one entry of the analytic
/// gradient before comparison and must be 0.0 for real checks.
pub fn grad_check(
    kind: CheckEncoder,
    trials: usize,
    seed: u64,
    perturbation: f64,
) -> Result<GradCheckReport> {
    let mut worst: f64 = 0.0;
    for trial in 0..trials {
        let mut rng = rng_from_seed(epoch_seed(seed, "gradcheck", trial));
        let k = 2 + trial % 3;
        let enc = match kind {
            CheckEncoder::WindowMean => EncoderModel::window_mean(k, trial % 3)?,
            CheckEncoder::BiRnn => EncoderModel::birnn(
                k,
                k,
                1 + trial % 2,
                2 + trial % 3,
                sub_seed(seed, "gradcheck-weights") ^ trial as u64,
                if trial % 2 == 0 {
                    crate::encoder::LayerMode::AllLayersMean
                } else {
                    crate::encoder::LayerMode::TopLayer
                },
            )?,
        };
        let embedder = InputEmbedder::hashed(k, sub_seed(seed, "gradcheck-embed") ^ trial as u64);
        let pairs = check_fixture_pairs(trial);
        let scope = if trial % 2 == 0 {
            TransformScope::All
        } else {
            TransformScope::WordOnly
        };
        let mut cfg = TrainConfig {
            gamma: 1.0 + (trial % 4) as f64,
            lambda: [0.1, 0.5, 1.0, 2.0][trial % 4],
            occurrence: Occurrence::First,
            scope,
            ..TrainConfig::default()
        };
        let index = build_shared_index(&pairs, cfg.occurrence, false);
        let mut neg_rng = rng_from_seed(epoch_seed(seed, "gradcheck-neg", trial));
        let instances: Vec<TripletInstance> = index
            .entries()
            .iter()
            .filter_map(|e| sample_negative(&pairs, e, &index, &mut neg_rng))
            .take(3)
            .collect();
        if instances.is_empty() {
            return Err(Error::NoTriplets);
        }
        let mut m = TransformMatrix::identity(k);
        for r in 0..k {
            for c in 0..k {
                let jitter = (rng.gen::<f64>() * 2.0 - 1.0) * 0.1;
                let base = m.matrix().get(r, c);
                m.matrix_mut().set(r, c, base + jitter);
            }
        }
        // Finite differences are only valid away from the hinge and norm
        // kinks; batches are filtered accordingly, falling back to a large
        // margin that keeps every term active.
        let mut batch = filter_smooth(&instances, &pairs, &enc, &m, &embedder, &cfg)?;
        if batch.is_empty() {
            cfg.gamma = 10.0;
            batch = filter_smooth(&instances, &pairs, &enc, &m, &embedder, &cfg)?;
        }
        if batch.is_empty() {
            continue;
        }
        let mut analytic = grad_objective(&batch, &pairs, &enc, &m, &embedder, &cfg)?;
        if perturbation != 0.0 {
            analytic.set(0, 0, analytic.get(0, 0) + perturbation);
        }
        let objective = |mat: &TransformMatrix| -> Result<f64> {
            let (hinge, residual) = batch_loss(&batch, &pairs, &enc, mat, &embedder, &cfg)?;
            Ok(hinge + cfg.lambda * residual)
        };
        let step = 1e-5;
        for r in 0..k {
            for c in 0..k {
                let base = m.matrix().get(r, c);
                let mut plus = m.clone();
                plus.matrix_mut().set(r, c, base + step);
                let mut minus = m.clone();
                minus.matrix_mut().set(r, c, base - step);
                let fd = (objective(&plus)? - objective(&minus)?) / (2.0 * step);
                let an = analytic.get(r, c);
                let rel = (fd - an).abs() / fd.abs().max(an.abs()).max(1.0);
                worst = worst.max(rel);
            }
        }
    }
    Ok(GradCheckReport {
        trials,
        max_rel_error: worst,
    })
}

fn filter_smooth(
    instances: &[TripletInstance],
    pairs: &[ParaphrasePair],
    enc: &EncoderModel,
    m: &TransformMatrix,
    embedder: &InputEmbedder,
    cfg: &TrainConfig,
) -> Result<Vec<TripletInstance>> {
    let mut keep = Vec::new();
    for inst in instances {
        let (d_pos, d_neg) = instance_distances(inst, pairs, enc, m, embedder, cfg.scope)?;
        let h = d_pos + cfg.gamma - d_neg;
        if h.abs() > 1e-3 && d_pos > 1e-6 && d_neg > 1e-6 {
            keep.push(inst.clone());
        }
    }
    Ok(keep)
}

/// Six small sentences over a trial-specific vocabulary; every sentence
/// contains the shared pivot word so negatives always exist.
fn check_fixture_pairs(trial: usize) -> Vec<ParaphrasePair> {
    let w = |i: usize| format!("w{}t{}", i, trial);
    let pivot = format!("pivot{}", trial);
    let mk = |tokens: Vec<String>| crate::corpus::tokenize(&tokens.join(" ")).unwrap();
    let pair = |a: Vec<String>, b: Vec<String>| ParaphrasePair {
        s1: mk(a),
        s2: mk(b),
        label: crate::corpus::Label::Paraphrase,
    };
    vec![
        pair(
            vec![pivot.clone(), w(1), w(2)],
            vec![w(3), pivot.clone(), w(4)],
        ),
        pair(
            vec![w(5), pivot.clone()],
            vec![pivot.clone(), w(6), w(7)],
        ),
        pair(
            vec![w(8), pivot.clone(), w(9)],
            vec![w(2), w(5), pivot.clone()],
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{parse_corpus, tokenize};
    use crate::encoder::LayerMode;
    use std::collections::HashMap;

    fn hashed_setup(k: usize) -> (TransformMatrix, InputEmbedder) {
        (TransformMatrix::identity(k), InputEmbedder::hashed(k, 77))
    }

    #[test]
    fn hinge_arithmetic() {
        assert_eq!(hinge_term(1.0, 5.0, 2.0), 0.0);
        assert_eq!(hinge_term(3.0, 4.0, 2.0), 1.0);
        assert_eq!(hinge_term(0.0, 0.0, 3.0), 3.0);
    }

    #[test]
    fn identical_sentences_have_zero_distance() {
        let enc = EncoderModel::birnn(4, 4, 2, 3, 9, LayerMode::AllLayersMean).unwrap();
        let (m, embedder) = hashed_setup(4);
        let s = tokenize("alpha beta gamma").unwrap();
        let d = context_distance(
            "beta", &s, 1, &s, 1, &enc, &m, &embedder, TransformScope::All,
        )
        .unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn degenerate_window_ignores_context() {
        let enc = EncoderModel::window_mean(4, 0).unwrap();
        let (m, embedder) = hashed_setup(4);
        let s1 = tokenize("red apple pie").unwrap();
        let s2 = tokenize("we ate the apple").unwrap();
        let d = context_distance(
            "apple", &s1, 1, &s2, 3, &enc, &m, &embedder, TransformScope::All,
        )
        .unwrap();
        assert_eq!(d, 0.0);
    }

    /// Straight-line single-layer recurrence, written independently of the
    /// encoder module's loops.
    fn oracle_distance_birnn(
        enc: &EncoderModel,
        in1: &[Vector],
        pos1: usize,
        in2: &[Vector],
        pos2: usize,
    ) -> f64 {
        let layer = &enc.layers_for_tests()[0];
        let step = |w: &Matrix, u: &Matrix, b: &Vector, z: &Vector, prev: &Vector| {
            let mut a = w.matvec(z);
            a.add_scaled(&u.matvec(prev), 1.0);
            a.add_scaled(b, 1.0);
            Vector::new(a.as_slice().iter().map(|x| x.tanh()).collect()).unwrap()
        };
        let encode_one = |z: &[Vector], pos: usize| -> Vector {
            let h = layer.bf.dim();
            let mut hf = Vec::new();
            let mut prev = Vector::zeros(h);
            for zt in z {
                let ht = step(&layer.wf, &layer.uf, &layer.bf, zt, &prev);
                hf.push(ht.clone());
                prev = ht;
            }
            let mut hb = vec![Vector::zeros(h); z.len()];
            let mut next = Vector::zeros(h);
            for t in (0..z.len()).rev() {
                let ht = step(&layer.wb, &layer.ub, &layer.bb, &z[t], &next);
                hb[t] = ht.clone();
                next = ht;
            }
            let mut cat = hf[pos].as_slice().to_vec();
            cat.extend_from_slice(hb[pos].as_slice());
            layer.proj.matvec(&Vector::new(cat).unwrap())
        };
        encode_one(in1, pos1).l2_distance(&encode_one(in2, pos2))
    }

    #[test]
    fn context_distance_matches_recurrence_oracle() {
        let enc = EncoderModel::birnn(3, 3, 1, 4, 31, LayerMode::TopLayer).unwrap();
        let (mut m, embedder) = hashed_setup(3);
        m.matrix_mut().set(0, 1, 0.2);
        m.matrix_mut().set(2, 0, -0.1);
        let s1 = tokenize("storm over harbor").unwrap();
        let s2 = tokenize("the storm passed").unwrap();
        let d = context_distance(
            "storm", &s1, 0, &s2, 1, &enc, &m, &embedder, TransformScope::All,
        )
        .unwrap();
        let tx = |s: &crate::corpus::Sentence| -> Vec<Vector> {
            s.tokens()
                .iter()
                .map(|t| m.apply(&embedder.embed(t).unwrap()).unwrap())
                .collect()
        };
        let expected = oracle_distance_birnn(&enc, &tx(&s1), 0, &tx(&s2), 1);
        assert!((d - expected).abs() <= 1e-12, "{} vs {}", d, expected);
    }

    #[test]
    fn wrong_position_is_rejected() {
        let enc = EncoderModel::window_mean(4, 1).unwrap();
        let (m, embedder) = hashed_setup(4);
        let s1 = tokenize("a b c").unwrap();
        let s2 = tokenize("c d e").unwrap();
        let err = context_distance(
            "c", &s1, 0, &s2, 0, &enc, &m, &embedder, TransformScope::All,
        )
        .unwrap_err();
        assert!(err.to_string().contains("not at position"));
    }

    fn indexed(pairs: &[ParaphrasePair]) -> SharedWordIndex {
        build_shared_index(pairs, Occurrence::First, false)
    }

    #[test]
    fn negative_sampling_forced_choice() {
        let pairs = parse_corpus("1\tq a\tq b\n0\tq z\tr s\n", "f").unwrap();
        let index = indexed(&pairs);
        let entry = &index.entries()[0];
        assert_eq!(entry.word, "q");
        let mut rng = rng_from_seed(5);
        let inst = sample_negative(&pairs, entry, &index, &mut rng).unwrap();
        assert_eq!(inst.neg_id, 2);
        assert_eq!(inst.neg_pos, 0);
        assert!(sentence_by_id(&pairs, inst.neg_id).contains("q"));
    }

    #[test]
    fn exhausted_pool_is_a_skip() {
        let pairs = parse_corpus("1\tlone a\tlone b\n", "f").unwrap();
        let index = indexed(&pairs);
        let entry = index.entries().iter().find(|e| e.word == "lone").unwrap();
        let mut rng = rng_from_seed(5);
        assert!(sample_negative(&pairs, entry, &index, &mut rng).is_none());
    }

    #[test]
    fn negative_sampling_is_deterministic_and_covers_pool() {
        let pairs = parse_corpus(
            "1\tq a\tq b\n1\tq c\tq d\n0\tq e\tq f\n",
            "f",
        )
        .unwrap();
        let index = indexed(&pairs);
        let entry = &index.entries()[0];
        let mut counts: HashMap<usize, usize> = HashMap::new();
        let mut rng = rng_from_seed(42);
        for _ in 0..200 {
            let inst = sample_negative(&pairs, entry, &index, &mut rng).unwrap();
            assert!(inst.neg_id > 1, "own sentences excluded");
            *counts.entry(inst.neg_id).or_default() += 1;
        }
        assert_eq!(counts.len(), 4);
        assert!(counts.values().all(|&c| c >= 20));
        let mut r1 = rng_from_seed(7);
        let mut r2 = rng_from_seed(7);
        let a = sample_negative(&pairs, entry, &index, &mut r1).unwrap();
        let b = sample_negative(&pairs, entry, &index, &mut r2).unwrap();
        assert_eq!((a.side, a.neg_id), (b.side, b.neg_id));
    }

    /// Window means over the full sentence with planted table embeddings,
    /// so distances are hand-computable.
    fn planted_fixture() -> (Vec<ParaphrasePair>, InputEmbedder, EncoderModel) {
        let mut table = HashMap::new();
        let v = |a: f64, b: f64| Vector::new(vec![a, b]).unwrap();
        table.insert("w".into(), v(0.4, 0.2));
        table.insert("a".into(), v(0.2, -0.4));
        table.insert("b".into(), v(-0.2, 0.6));
        table.insert("z".into(), v(-0.8, -0.8));
        let embedder = InputEmbedder::with_table(2, table, 1).unwrap();
        let pairs = parse_corpus("1\tw a\tw b\n1\tw z\tz w\n", "f").unwrap();
        let enc = EncoderModel::window_mean(2, 5).unwrap();
        (pairs, embedder, enc)
    }

    fn planted_instance(side: Side) -> TripletInstance {
        TripletInstance {
            word: "w".into(),
            pair_id: 0,
            pos1: 0,
            pos2: 0,
            side,
            neg_id: 2,
            neg_pos: 0,
        }
    }

    #[test]
    fn batch_loss_matches_hand_computation() {
        let (pairs, embedder, enc) = planted_fixture();
        let m = TransformMatrix::identity(2);
        let cfg = TrainConfig {
            gamma: 2.0,
            ..TrainConfig::default()
        };
        let batch = vec![planted_instance(Side::S1)];
        let (hinge, residual) = batch_loss(&batch, &pairs, &enc, &m, &embedder, &cfg).unwrap();
        // Window means: s1 = (0.3, -0.1), s2 = (0.1, 0.4), neg = (-0.2, -0.3).
        let d_pos = ((0.3f64 - 0.1).powi(2) + (-0.1f64 - 0.4).powi(2)).sqrt();
        let d_neg = ((-0.2f64 - 0.1).powi(2) + (-0.3f64 - 0.4).powi(2)).sqrt();
        let expected = (d_pos + 2.0 - d_neg).max(0.0);
        assert!(expected > 0.0, "fixture should be active");
        assert!((hinge - expected).abs() <= 1e-12, "{} vs {}", hinge, expected);
        assert!(residual.abs() <= 1e-15);
    }

    #[test]
    fn satisfied_margin_and_scaled_identity_residual() {
        let (pairs, embedder, enc) = planted_fixture();
        let cfg = TrainConfig {
            gamma: 0.05,
            ..TrainConfig::default()
        };
        let batch = vec![planted_instance(Side::S1)];
        let m = TransformMatrix::identity(2);
        let (hinge, residual) = batch_loss(&batch, &pairs, &enc, &m, &embedder, &cfg).unwrap();
        assert_eq!(hinge, 0.0);
        assert_eq!(residual, 0.0);
        let mut m3 = Matrix::identity(3);
        m3.scale_in_place(2.0);
        let r3 = ortho_residual(&m3);
        assert!((r3 - 3.0 * 3.0f64.sqrt()).abs() <= 1e-12);
    }

    #[test]
    fn sum_aggregation_scales_mean() {
        let (pairs, embedder, enc) = planted_fixture();
        let m = TransformMatrix::identity(2);
        let batch = vec![planted_instance(Side::S1), planted_instance(Side::S2)];
        let mean_cfg = TrainConfig::default();
        let sum_cfg = TrainConfig {
            aggregation: Aggregation::Sum,
            ..TrainConfig::default()
        };
        let (mean, _) = batch_loss(&batch, &pairs, &enc, &m, &embedder, &mean_cfg).unwrap();
        let (sum, _) = batch_loss(&batch, &pairs, &enc, &m, &embedder, &sum_cfg).unwrap();
        assert!((sum - 2.0 * mean).abs() <= 1e-12);
    }

    #[test]
    fn empty_batch_is_an_error() {
        let (pairs, embedder, enc) = planted_fixture();
        let m = TransformMatrix::identity(2);
        assert!(batch_loss(&[], &pairs, &enc, &m, &embedder, &TrainConfig::default()).is_err());
        assert!(grad_objective(&[], &pairs, &enc, &m, &embedder, &TrainConfig::default()).is_err());
    }

    #[test]
    fn inactive_batch_with_orthogonal_m_has_zero_gradient() {
        let (pairs, embedder, enc) = planted_fixture();
        let m = TransformMatrix::identity(2);
        let cfg = TrainConfig {
            gamma: 0.05,
            ..TrainConfig::default()
        };
        let batch = vec![planted_instance(Side::S1)];
        let grad = grad_objective(&batch, &pairs, &enc, &m, &embedder, &cfg).unwrap();
        assert!(grad.as_slice().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn active_window_mean_gradient_matches_closed_form() {
        let (pairs, embedder, enc) = planted_fixture();
        let m = TransformMatrix::identity(2);
        let cfg = TrainConfig {
            gamma: 2.0,
            ..TrainConfig::default()
        };
        let batch = vec![planted_instance(Side::S1)];
        let grad = grad_objective(&batch, &pairs, &enc, &m, &embedder, &cfg).unwrap();
        // Closed form for full-window means under identity M:
        // (1/d)(xbar1 - xbar2)(xbar1 - xbar2)^T per pair, negative pair
        // subtracted. The residual term vanishes at exact orthogonality.
        let xb1 = Vector::new(vec![0.3, -0.1]).unwrap();
        let xb2 = Vector::new(vec![0.1, 0.4]).unwrap();
        let xbn = Vector::new(vec![-0.2, -0.3]).unwrap();
        let mut expected = Matrix::zeros(2, 2);
        let dpos = xb1.l2_distance(&xb2);
        let dneg = xbn.l2_distance(&xb2);
        let upos = xb1.sub(&xb2);
        let uneg = xbn.sub(&xb2);
        expected.add_outer(&upos, &upos, 1.0 / dpos);
        expected.add_outer(&uneg, &uneg, -1.0 / dneg);
        for (g, e) in grad.as_slice().iter().zip(expected.as_slice()) {
            assert!((g - e).abs() <= 1e-12, "{} vs {}", g, e);
        }
    }

    #[test]
    fn gradients_match_finite_differences_window_mean() {
        let report = grad_check(CheckEncoder::WindowMean, 25, 123, 0.0).unwrap();
        assert!(report.max_rel_error <= 1e-4, "{}", report.max_rel_error);
    }

    #[test]
    fn gradients_match_finite_differences_birnn() {
        let report = grad_check(CheckEncoder::BiRnn, 25, 321, 0.0).unwrap();
        assert!(report.max_rel_error <= 1e-4, "{}", report.max_rel_error);
    }

    #[test]
    fn perturbed_gradient_is_detected() {
        let report = grad_check(CheckEncoder::WindowMean, 5, 123, 1e-2).unwrap();
        assert!(report.max_rel_error > 1e-4, "{}", report.max_rel_error);
    }

    fn tiny_corpus() -> (Vec<ParaphrasePair>, Vec<ParaphrasePair>) {
        let text = "\
1\tships sail the sea\tships cross the sea
1\tbirds fly so high\tbirds soar so high
1\tred fox runs fast\tred fox sprints fast
0\tships sail the sea\tbirds fly so high
0\tred fox runs fast\tships cross the sea
0\tbirds soar so high\tred fox sprints fast
";
        let pairs = parse_corpus(text, "tiny").unwrap();
        let train: Vec<_> = pairs.iter().take(4).cloned().collect();
        let held: Vec<_> = pairs.iter().skip(4).cloned().collect();
        (train, held)
    }

    fn tiny_cfg() -> TrainConfig {
        TrainConfig {
            max_epochs: 3,
            batch_size: 8,
            mlp: MlpConfig {
                epochs: 5,
                ..MlpConfig::default()
            },
            ..TrainConfig::default()
        }
    }

    #[test]
    fn zero_epochs_returns_identity() {
        let (train_pairs, held) = tiny_corpus();
        let enc = EncoderModel::window_mean(4, 1).unwrap();
        let embedder = InputEmbedder::hashed(4, 3);
        let cfg = TrainConfig {
            max_epochs: 0,
            ..tiny_cfg()
        };
        let (m, report) = train(&train_pairs, &held, &enc, &embedder, &cfg).unwrap();
        assert!(report.epochs.is_empty());
        assert_eq!(report.best_epoch, 0);
        assert_eq!(m.matrix(), &Matrix::identity(4));
    }

    #[test]
    fn training_is_bit_deterministic() {
        let (train_pairs, held) = tiny_corpus();
        let enc = EncoderModel::birnn(4, 4, 1, 3, 17, LayerMode::TopLayer).unwrap();
        let embedder = InputEmbedder::hashed(4, 3);
        let cfg = tiny_cfg();
        let (m1, r1) = train(&train_pairs, &held, &enc, &embedder, &cfg).unwrap();
        let (m2, r2) = train(&train_pairs, &held, &enc, &embedder, &cfg).unwrap();
        for (a, b) in m1.matrix().as_slice().iter().zip(m2.matrix().as_slice()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        assert_eq!(r1.best_epoch, r2.best_epoch);
        assert_eq!(r1.to_csv(), r2.to_csv());
    }

    #[test]
    fn early_stop_halts_within_patience_and_returns_best_snapshot() {
        let (train_pairs, held) = tiny_corpus();
        let enc = EncoderModel::birnn(4, 4, 1, 3, 17, LayerMode::TopLayer).unwrap();
        let embedder = InputEmbedder::hashed(4, 3);
        let cfg = TrainConfig {
            max_epochs: 20,
            patience: 2,
            ..tiny_cfg()
        };
        let mut snapshots: Vec<Matrix> = Vec::new();
        let (m, report) = train_with_observer(&train_pairs, &held, &enc, &embedder, &cfg, |_, mat| {
            snapshots.push(mat.clone())
        })
        .unwrap();
        assert!(report.best_epoch >= 1);
        let last = report.epochs.last().unwrap().epoch;
        assert!(last - report.best_epoch <= cfg.patience);
        if last < cfg.max_epochs {
            assert_eq!(report.stop_reason, StopReason::EarlyStopped);
        }
        let best = &snapshots[report.best_epoch - 1];
        for (a, b) in m.matrix().as_slice().iter().zip(best.as_slice()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn corpus_without_shared_words_cannot_train() {
        let pairs = parse_corpus("1\ta b\tc d\n0\te f\tg h\n", "f").unwrap();
        let enc = EncoderModel::window_mean(4, 1).unwrap();
        let embedder = InputEmbedder::hashed(4, 3);
        let err = train(&pairs, &pairs, &enc, &embedder, &tiny_cfg()).unwrap_err();
        assert!(matches!(err, Error::NoTriplets));
    }

    #[test]
    fn train_report_csv_shape() {
        let report = TrainReport {
            epochs: vec![EpochRecord {
                epoch: 1,
                hinge_mean: 0.5,
                ortho_residual: 0.01,
                heldout_acc: 0.75,
                skipped: 2,
            }],
            best_epoch: 1,
            stop_reason: StopReason::MaxEpochs,
        };
        let csv = report.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("epoch,hinge_mean,ortho_residual,heldout_acc"));
        assert_eq!(csv.lines().count(), 2);
        assert_eq!(report.skipped_total(), 2);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let bad = [
            TrainConfig { gamma: 0.0, ..TrainConfig::default() },
            TrainConfig { lambda: -1.0, ..TrainConfig::default() },
            TrainConfig { learning_rate: 0.0, ..TrainConfig::default() },
            TrainConfig { batch_size: 0, ..TrainConfig::default() },
            TrainConfig { patience: 0, ..TrainConfig::default() },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err());
        }
        assert!(TrainConfig::default().validate().is_ok());
    }

    #[test]
    fn grid_search_single_cell_and_determinism() {
        let (train_pairs, held) = tiny_corpus();
        let enc = EncoderModel::window_mean(4, 1).unwrap();
        let embedder = InputEmbedder::hashed(4, 3);
        let base = TrainConfig {
            max_epochs: 2,
            ..tiny_cfg()
        };
        let (winner, cells) =
            grid_search(&train_pairs, &held, &enc, &embedder, &base, &[3.0], &[0.5]).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!((winner.gamma, winner.lambda), (3.0, 0.5));
        let (w2, _) =
            grid_search(&train_pairs, &held, &enc, &embedder, &base, &[3.0], &[0.5]).unwrap();
        assert_eq!((winner.gamma, winner.lambda), (w2.gamma, w2.lambda));
    }

    #[test]
    fn grid_search_ties_prefer_smaller_gamma_then_lambda() {
        let (train_pairs, held) = tiny_corpus();
        // Window-mean at radius 0 is context-free: every distance is 0, so
        // all cells tie exactly and the tie-break must pick the smallest.
        let enc = EncoderModel::window_mean(4, 0).unwrap();
        let embedder = InputEmbedder::hashed(4, 3);
        let base = TrainConfig {
            max_epochs: 1,
            ..tiny_cfg()
        };
        let (winner, cells) = grid_search(
            &train_pairs,
            &held,
            &enc,
            &embedder,
            &base,
            &[4.0, 1.0],
            &[2.0, 0.1],
        )
        .unwrap();
        assert_eq!(cells.len(), 4);
        let accs: Vec<f64> = cells.iter().map(|c| c.heldout_acc.unwrap()).collect();
        assert!(accs.iter().all(|&a| a == accs[0]));
        assert_eq!((winner.gamma, winner.lambda), (1.0, 0.1));
    }

    #[test]
    fn empty_grid_is_rejected() {
        let (train_pairs, held) = tiny_corpus();
        let enc = EncoderModel::window_mean(4, 1).unwrap();
        let embedder = InputEmbedder::hashed(4, 3);
        assert!(grid_search(
            &train_pairs,
            &held,
            &enc,
            &embedder,
            &TrainConfig::default(),
            &[],
            &[1.0]
        )
        .is_err());
    }
}
