//! Distance analytics over a trained transform: per-word distance
//! records for shared words, per-class means, and the reference-pair
//! exceedance statistic.

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use crate::corpus::{shared_word_positions, Label, Occurrence, ParaphrasePair, Sentence};
use crate::embed::InputEmbedder;
use crate::encoder::{ContextualEncoding, EncoderModel};
use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::transform::TransformMatrix;

/// 1 - cos(u, v), small when the vectors point the same way.
pub fn cosine_distance(u: &Vector, v: &Vector) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimMismatch {
            expected: u.dim(),
            actual: v.dim(),
            context: "cosine distance",
        });
    }
    let nu = u.norm();
    let nv = v.norm();
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::InvalidInput(
            "cosine distance is undefined for a zero vector".into(),
        ));
    }
    Ok((1.0 - u.dot(v) / (nu * nv)).clamp(0.0, 2.0))
}

#[derive(Clone, Debug)]
pub struct WordDistanceRecord {
    pub pair_id: usize,
    pub word: String,
    pub label: Label,
    pub l2: f64,
    pub cosine: f64,
}

#[derive(Clone, Debug)]
pub struct DistanceReport {
    pub records: Vec<WordDistanceRecord>,
    pub mean_paraphrase_l2: f64,
    pub mean_nonparaphrase_l2: f64,
    pub paraphrase_count: usize,
    pub nonparaphrase_count: usize,
}

impl DistanceReport {
    /// Full-precision rows plus a comment footer with the class means.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("pair_id,word,label,l2,cosine\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{:.16e},{:.16e}\n",
                r.pair_id,
                r.word,
                r.label.as_tsv(),
                r.l2,
                r.cosine
            ));
        }
        out.push_str(&format!(
            "# mean_paraphrase_l2,{:.16e},count,{}\n",
            self.mean_paraphrase_l2, self.paraphrase_count
        ));
        out.push_str(&format!(
            "# mean_nonparaphrase_l2,{:.16e},count,{}\n",
            self.mean_nonparaphrase_l2, self.nonparaphrase_count
        ));
        out
    }

    /// Two-row summary table; this is the only place values are rounded.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<16} {:>8} {:>10}\n",
            "context type", "words", "mean l2"
        ));
        out.push_str(&format!(
            "{:<16} {:>8} {:>10.2}\n",
            "paraphrase", self.paraphrase_count, self.mean_paraphrase_l2
        ));
        out.push_str(&format!(
            "{:<16} {:>8} {:>10.2}\n",
            "non-paraphrase", self.nonparaphrase_count, self.mean_nonparaphrase_l2
        ));
        out
    }
}

fn contextual_vectors(
    s: &Sentence,
    enc: &EncoderModel,
    m: &TransformMatrix,
    embedder: &InputEmbedder,
) -> Result<ContextualEncoding> {
    let inputs = embedder
        .embed_tokens(s.tokens())?
        .iter()
        .map(|x| m.apply(x))
        .collect::<Result<Vec<_>>>()?;
    enc.encode(&inputs)
}

fn class_mean(records: &[WordDistanceRecord], label: Label) -> (f64, usize) {
    let dists: Vec<f64> = records
        .iter()
        .filter(|r| r.label == label)
        .map(|r| r.l2)
        .collect();
    if dists.is_empty() {
        (0.0, 0)
    } else {
        (dists.iter().sum::<f64>() / dists.len() as f64, dists.len())
    }
}

/// Per-word L2 and cosine distances for every shared word of every pair
/// (both label classes), ordered by (pair_id, word). A class with no
/// records reports mean 0 with count 0.
pub fn distance_report(
    pairs: &[ParaphrasePair],
    enc: &EncoderModel,
    m: &TransformMatrix,
    embedder: &InputEmbedder,
    occurrence: Occurrence,
) -> Result<DistanceReport> {
    if pairs.is_empty() {
        return Err(Error::InvalidInput("empty corpus".into()));
    }
    let mut records = Vec::new();
    for (pair_id, pair) in pairs.iter().enumerate() {
        let shared = shared_word_positions(&pair.s1, &pair.s2, occurrence, false);
        if shared.is_empty() {
            continue;
        }
        let e1 = contextual_vectors(&pair.s1, enc, m, embedder)?;
        let e2 = contextual_vectors(&pair.s2, enc, m, embedder)?;
        for (word, pos1, pos2) in shared {
            let a = e1.get(pos1);
            let b = e2.get(pos2);
            records.push(WordDistanceRecord {
                pair_id,
                word,
                label: pair.label,
                l2: a.l2_distance(b),
                cosine: cosine_distance(a, b)?,
            });
        }
    }
    if records.is_empty() {
        return Err(Error::InvalidInput(
            "no pair shares a word; nothing to report".into(),
        ));
    }
    let (mean_paraphrase_l2, paraphrase_count) = class_mean(&records, Label::Paraphrase);
    let (mean_nonparaphrase_l2, nonparaphrase_count) = class_mean(&records, Label::NonParaphrase);
    Ok(DistanceReport {
        records,
        mean_paraphrase_l2,
        mean_nonparaphrase_l2,
        paraphrase_count,
        nonparaphrase_count,
    })
}

#[derive(Clone, Debug)]
pub struct ReferencePairStat {
    pub word_a: String,
    pub word_b: String,
    pub reference_mean: f64,
    pub exceedance_fraction: f64,
    pub sample_count: usize,
}

/// Mean distance between two reference words across sampled random
/// context pairings, and the fraction of shared-word paraphrase
/// distances strictly exceeding it. Contexts are drawn uniformly from
/// all corpus sentences containing the word.
#[allow(clippy::too_many_arguments)]
pub fn reference_exceedance(
    pairs: &[ParaphrasePair],
    enc: &EncoderModel,
    m: &TransformMatrix,
    embedder: &InputEmbedder,
    word_a: &str,
    word_b: &str,
    context_sample: usize,
    rng: &mut ChaCha12Rng,
) -> Result<ReferencePairStat> {
    if context_sample == 0 {
        return Err(Error::InvalidInput("context sample must be positive".into()));
    }
    let contexts_of = |word: &str| -> Vec<(&Sentence, usize)> {
        pairs
            .iter()
            .flat_map(|p| [&p.s1, &p.s2])
            .filter_map(|s| s.position_of(word).map(|pos| (s, pos)))
            .collect()
    };
    let ctx_a = contexts_of(word_a);
    let ctx_b = contexts_of(word_b);
    if ctx_a.is_empty() || ctx_b.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no corpus sentence contains the reference word {:?}",
            if ctx_a.is_empty() { word_a } else { word_b }
        )));
    }
    let vector_at = |s: &Sentence, pos: usize| -> Result<Vector> {
        Ok(contextual_vectors(s, enc, m, embedder)?.get(pos).clone())
    };
    let mut total = 0.0;
    for _ in 0..context_sample {
        let (sa, pa) = ctx_a[rng.gen_range(0..ctx_a.len())];
        let (sb, pb) = ctx_b[rng.gen_range(0..ctx_b.len())];
        total += vector_at(sa, pa)?.l2_distance(&vector_at(sb, pb)?);
    }
    let reference_mean = total / context_sample as f64;
    let mut shared_total = 0usize;
    let mut exceed = 0usize;
    for pair in pairs.iter().filter(|p| p.label.is_paraphrase()) {
        let shared = shared_word_positions(&pair.s1, &pair.s2, Occurrence::First, false);
        if shared.is_empty() {
            continue;
        }
        let e1 = contextual_vectors(&pair.s1, enc, m, embedder)?;
        let e2 = contextual_vectors(&pair.s2, enc, m, embedder)?;
        for (_, pos1, pos2) in shared {
            shared_total += 1;
            if e1.get(pos1).l2_distance(e2.get(pos2)) > reference_mean {
                exceed += 1;
            }
        }
    }
    if shared_total == 0 {
        return Err(Error::InvalidInput(
            "no paraphrase pair shares a word; exceedance undefined".into(),
        ));
    }
    Ok(ReferencePairStat {
        word_a: word_a.to_string(),
        word_b: word_b.to_string(),
        reference_mean,
        exceedance_fraction: exceed as f64 / shared_total as f64,
        sample_count: context_sample,
    })
}
