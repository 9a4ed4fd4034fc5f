//! Paraphrase identification over sentence embeddings: the early-stopping
//! criterion for training and a small standalone classifier. This is the
//! only place an adaptive-moment optimizer appears; the transform trainer
//! itself is plain SGD.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::corpus::ParaphrasePair;
use crate::embed::InputEmbedder;
use crate::encoder::EncoderModel;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::rng::{epoch_seed, rng_from_seed};
use crate::transform::TransformMatrix;

/// Mean over positions of the contextual vectors of the transformed
/// sentence.
pub fn sentence_embedding(
    tokens: &[String],
    enc: &EncoderModel,
    m: &TransformMatrix,
    embedder: &InputEmbedder,
) -> Result<Vector> {
    if tokens.is_empty() {
        return Err(Error::EmptySentence);
    }
    let inputs = embedder
        .embed_tokens(tokens)?
        .iter()
        .map(|x| m.apply(x))
        .collect::<Result<Vec<_>>>()?;
    let encoding = enc.encode(&inputs)?;
    Ok(Vector::mean(encoding.vectors()))
}

/// [|u - v| ; u element-wise v]; symmetric in its arguments, first half
/// nonnegative.
pub fn featurize(u: &Vector, v: &Vector) -> Result<Vector> {
    if u.dim() != v.dim() {
        return Err(Error::DimMismatch {
            expected: u.dim(),
            actual: v.dim(),
            context: "pair featurization",
        });
    }
    let mut data = Vec::with_capacity(2 * u.dim());
    for (a, b) in u.as_slice().iter().zip(v.as_slice()) {
        data.push((a - b).abs());
    }
    for (a, b) in u.as_slice().iter().zip(v.as_slice()) {
        data.push(a * b);
    }
    Ok(Vector::from_raw(data))
}

pub fn pair_features(
    pair: &ParaphrasePair,
    enc: &EncoderModel,
    m: &TransformMatrix,
    embedder: &InputEmbedder,
) -> Result<Vector> {
    let u = sentence_embedding(pair.s1.tokens(), enc, m, embedder)?;
    let v = sentence_embedding(pair.s2.tokens(), enc, m, embedder)?;
    featurize(&u, &v)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MlpConfig {
    pub hidden_dim: usize,
    pub batch_size: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
}

impl Default for MlpConfig {
    fn default() -> Self {
        MlpConfig {
            hidden_dim: 50,
            batch_size: 64,
            epochs: 60,
            learning_rate: 0.01,
            seed: 0,
        }
    }
}

/// Single hidden layer, relu activation, sigmoid output.
pub struct MlpModel {
    pub(crate) w1: Matrix,
    pub(crate) b1: Vector,
    pub(crate) w2: Vector,
    pub(crate) b2: f64,
}

impl MlpModel {
    pub fn input_dim(&self) -> usize {
        self.w1.cols()
    }

    /// Probability that the pair is a paraphrase.
    pub fn predict(&self, features: &Vector) -> f64 {
        let (_, _, p) = self.forward(features);
        p
    }

    fn forward(&self, x: &Vector) -> (Vector, Vector, f64) {
        let mut z1 = self.w1.matvec(x);
        z1.add_scaled(&self.b1, 1.0);
        let a1 = Vector::from_raw(z1.as_slice().iter().map(|v| v.max(0.0)).collect());
        let z2 = self.w2.dot(&a1) + self.b2;
        (z1, a1, sigmoid(z2))
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// First-order moment estimates for one parameter tensor.
struct AdamState {
    m: Vec<f64>,
    v: Vec<f64>,
}

impl AdamState {
    fn new(len: usize) -> Self {
        AdamState {
            m: vec![0.0; len],
            v: vec![0.0; len],
        }
    }

    fn step(&mut self, params: &mut [f64], grads: &[f64], t: i32, lr: f64) {
        const B1: f64 = 0.9;
        const B2: f64 = 0.999;
        const EPS: f64 = 1e-8;
        let c1 = 1.0 - B1.powi(t);
        let c2 = 1.0 - B2.powi(t);
        for i in 0..params.len() {
            self.m[i] = B1 * self.m[i] + (1.0 - B1) * grads[i];
            self.v[i] = B2 * self.v[i] + (1.0 - B2) * grads[i] * grads[i];
            let mhat = self.m[i] / c1;
            let vhat = self.v[i] / c2;
            params[i] -= lr * mhat / (vhat.sqrt() + EPS);
        }
    }
}

/// Train the classifier with binary cross-entropy. Requires at least two
/// examples and both classes present.
pub fn mlp_train(features: &[Vector], labels: &[bool], cfg: &MlpConfig) -> Result<MlpModel> {
    if features.len() != labels.len() {
        return Err(Error::InvalidInput(format!(
            "{} feature vectors vs {} labels",
            features.len(),
            labels.len()
        )));
    }
    if features.len() < 2 {
        return Err(Error::InvalidInput(
            "classifier needs at least two examples".into(),
        ));
    }
    if labels.iter().all(|&l| l) || labels.iter().all(|&l| !l) {
        return Err(Error::InvalidInput(
            "classifier needs both classes present".into(),
        ));
    }
    let dim = features[0].dim();
    for f in features {
        if f.dim() != dim {
            return Err(Error::DimMismatch {
                expected: dim,
                actual: f.dim(),
                context: "classifier features",
            });
        }
    }
    let h = cfg.hidden_dim;
    let mut rng = rng_from_seed(cfg.seed);
    let bound1 = 1.0 / (dim as f64).sqrt();
    let w1 = Matrix::new(
        h,
        dim,
        (0..h * dim)
            .map(|_| (rng.gen::<f64>() * 2.0 - 1.0) * bound1)
            .collect(),
    )
    .expect("finite by construction");
    let bound2 = 1.0 / (h as f64).sqrt();
    let w2 = Vector::from_raw(
        (0..h)
            .map(|_| (rng.gen::<f64>() * 2.0 - 1.0) * bound2)
            .collect(),
    );
    let mut model = MlpModel {
        w1,
        b1: Vector::zeros(h),
        w2,
        b2: 0.0,
    };
    let mut adam_w1 = AdamState::new(h * dim);
    let mut adam_b1 = AdamState::new(h);
    let mut adam_w2 = AdamState::new(h);
    let mut adam_b2 = AdamState::new(1);
    let mut t = 0;
    let mut order: Vec<usize> = (0..features.len()).collect();
    for epoch in 0..cfg.epochs {
        let mut shuffle_rng = rng_from_seed(epoch_seed(cfg.seed, "mlp-shuffle", epoch));
        order.shuffle(&mut shuffle_rng);
        for batch in order.chunks(cfg.batch_size) {
            let mut gw1 = Matrix::zeros(h, dim);
            let mut gb1 = Vector::zeros(h);
            let mut gw2 = Vector::zeros(h);
            let mut gb2 = 0.0;
            let scale = 1.0 / batch.len() as f64;
            for &i in batch {
                let x = &features[i];
                let y = if labels[i] { 1.0 } else { 0.0 };
                let (z1, a1, p) = model.forward(x);
                let dz2 = (p - y) * scale;
                gw2.add_scaled(&a1, dz2);
                gb2 += dz2;
                let dz1 = Vector::from_raw(
                    model
                        .w2
                        .as_slice()
                        .iter()
                        .zip(z1.as_slice())
                        .map(|(w, z)| if *z > 0.0 { w * dz2 } else { 0.0 })
                        .collect(),
                );
                gw1.add_outer(&dz1, x, 1.0);
                gb1.add_scaled(&dz1, 1.0);
            }
            t += 1;
            adam_w1.step(model.w1.as_mut_slice(), gw1.as_slice(), t, cfg.learning_rate);
            adam_b1.step(model.b1.as_mut_slice(), gb1.as_slice(), t, cfg.learning_rate);
            adam_w2.step(model.w2.as_mut_slice(), gw2.as_slice(), t, cfg.learning_rate);
            let mut b2 = [model.b2];
            adam_b2.step(&mut b2, &[gb2], t, cfg.learning_rate);
            model.b2 = b2[0];
        }
    }
    Ok(model)
}

/// Fraction of examples whose 0.5-thresholded prediction matches the label.
pub fn accuracy(model: &MlpModel, features: &[Vector], labels: &[bool]) -> f64 {
    debug_assert_eq!(features.len(), labels.len());
    let hits = features
        .iter()
        .zip(labels)
        .filter(|(f, &l)| (model.predict(f) >= 0.5) == l)
        .count();
    hits as f64 / features.len() as f64
}

/// Accuracy of `mlp` over corpus pairs under the transform `m`.
pub fn paraid_accuracy(
    pairs: &[ParaphrasePair],
    enc: &EncoderModel,
    m: &TransformMatrix,
    embedder: &InputEmbedder,
    mlp: &MlpModel,
) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::InvalidInput("no pairs to evaluate".into()));
    }
    let mut hits = 0usize;
    for pair in pairs {
        let f = pair_features(pair, enc, m, embedder)?;
        if (mlp.predict(&f) >= 0.5) == pair.label.is_paraphrase() {
            hits += 1;
        }
    }
    Ok(hits as f64 / pairs.len() as f64)
}

/// The early-stopping criterion: retrain the classifier from scratch on
/// the training pairs under the current transform, report held-out
/// accuracy. Retraining from the same seed each call keeps the criterion
/// a function of the embedding space alone.
pub fn heldout_accuracy(
    train_pairs: &[ParaphrasePair],
    heldout_pairs: &[ParaphrasePair],
    enc: &EncoderModel,
    m: &TransformMatrix,
    embedder: &InputEmbedder,
    mlp_cfg: &MlpConfig,
) -> Result<f64> {
    let features: Vec<Vector> = train_pairs
        .iter()
        .map(|p| pair_features(p, enc, m, embedder))
        .collect::<Result<_>>()?;
    let labels: Vec<bool> = train_pairs.iter().map(|p| p.label.is_paraphrase()).collect();
    let mlp = mlp_train(&features, &labels, mlp_cfg)?;
    paraid_accuracy(heldout_pairs, enc, m, embedder, &mlp)
}
