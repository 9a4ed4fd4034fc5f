//! Paraphrase corpus ingestion: tokenization, the TSV pair format, shared
//! word extraction, negative-sampling pools, and the train/held-out split.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Tokens are non-empty and lowercased; raw keeps the original text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sentence {
    tokens: Vec<String>,
    raw: String,
}

#[allow(clippy::len_without_is_empty)]
impl Sentence {
    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn raw(&self) -> &str {
        &self.raw
    }

    /// Always at least 1: empty sentences cannot be constructed.
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    /// First position of `word`, if present.
    pub fn position_of(&self, word: &str) -> Option<usize> {
        self.tokens.iter().position(|t| t == word)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.position_of(word).is_some()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Label {
    Paraphrase,
    NonParaphrase,
}

impl Label {
    pub fn is_paraphrase(&self) -> bool {
        matches!(self, Label::Paraphrase)
    }

    pub fn as_tsv(&self) -> &'static str {
        match self {
            Label::Paraphrase => "1",
            Label::NonParaphrase => "0",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParaphrasePair {
    pub s1: Sentence,
    pub s2: Sentence,
    pub label: Label,
}

/// Which occurrences of a shared word produce loss terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Occurrence {
    First,
    All,
}

impl Occurrence {
    pub fn as_str(&self) -> &'static str {
        match self {
            Occurrence::First => "first",
            Occurrence::All => "all",
        }
    }
}

impl FromStr for Occurrence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first" => Ok(Occurrence::First),
            "all" => Ok(Occurrence::All),
            other => Err(Error::InvalidInput(format!(
                "unknown occurrence mode {:?} (expected first or all)",
                other
            ))),
        }
    }
}

/// Lowercase, split on whitespace, strip leading and trailing ASCII
/// punctuation per token, drop tokens that become empty.
pub fn tokenize(text: &str) -> Result<Sentence> {
    let tokens: Vec<String> = text
        .to_lowercase()
        .split_whitespace()
        .map(|t| t.trim_matches(|c: char| c.is_ascii_punctuation()).to_string())
        .filter(|t| !t.is_empty())
        .collect();
    if tokens.is_empty() {
        return Err(Error::EmptySentence);
    }
    Ok(Sentence {
        tokens,
        raw: text.trim().to_string(),
    })
}

/// Sentences are numbered 2*pair_id (side 1) and 2*pair_id + 1 (side 2).
pub fn sentence_by_id(pairs: &[ParaphrasePair], id: usize) -> &Sentence {
    let pair = &pairs[id / 2];
    if id % 2 == 0 {
        &pair.s1
    } else {
        &pair.s2
    }
}

pub fn parse_corpus(text: &str, file: &str) -> Result<Vec<ParaphrasePair>> {
    let mut pairs = Vec::new();
    let mut columns: Option<usize> = None;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let ncols = *columns.get_or_insert(fields.len());
        if ncols != 2 && ncols != 3 {
            return Err(Error::parse(
                file,
                lineno,
                format!("expected 2 or 3 tab-separated columns, got {}", ncols),
            ));
        }
        if fields.len() != ncols {
            return Err(Error::parse(
                file,
                lineno,
                format!("expected {} columns, got {}", ncols, fields.len()),
            ));
        }
        let (label, c1, c2) = if ncols == 3 {
            let label = match fields[0] {
                "1" => Label::Paraphrase,
                "0" => Label::NonParaphrase,
                other => {
                    return Err(Error::parse(
                        file,
                        lineno,
                        format!("unknown label {:?} (expected 0 or 1)", other),
                    ))
                }
            };
            (label, fields[1], fields[2])
        } else {
            (Label::Paraphrase, fields[0], fields[1])
        };
        let s1 = tokenize(c1)
            .map_err(|_| Error::parse(file, lineno, "first sentence has no tokens"))?;
        let s2 = tokenize(c2)
            .map_err(|_| Error::parse(file, lineno, "second sentence has no tokens"))?;
        pairs.push(ParaphrasePair { s1, s2, label });
    }
    if pairs.is_empty() {
        return Err(Error::InvalidInput(format!("{}: corpus has no pairs", file)));
    }
    Ok(pairs)
}

pub fn load_corpus(path: &Path) -> Result<Vec<ParaphrasePair>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_corpus(&text, &path.display().to_string())
}

/// Three-column TSV; tabs inside raw text are flattened to spaces so the
/// output always round-trips through parse_corpus.
pub fn serialize_corpus(pairs: &[ParaphrasePair]) -> String {
    let clean = |raw: &str| raw.replace(['\t', '\n'], " ");
    let mut out = String::new();
    for p in pairs {
        out.push_str(p.label.as_tsv());
        out.push('\t');
        out.push_str(&clean(p.s1.raw()));
        out.push('\t');
        out.push_str(&clean(p.s2.raw()));
        out.push('\n');
    }
    out
}

/// One loss instance: `word` appears at pos1 in s1 and pos2 in s2 of the
/// paraphrase pair `pair_id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharedEntry {
    pub pair_id: usize,
    pub word: String,
    pub pos1: usize,
    pub pos2: usize,
}

pub struct SharedWordIndex {
    entries: Vec<SharedEntry>,
    pool: HashMap<String, Vec<usize>>,
}

impl SharedWordIndex {
    pub fn entries(&self) -> &[SharedEntry] {
        &self.entries
    }

    /// Ids of all corpus sentences containing `word`, in corpus order.
    pub fn pool(&self, word: &str) -> &[usize] {
        self.pool.get(word).map(|v| v.as_slice()).unwrap_or(&[])
    }
}

const STOPWORDS: &[&str] = &[
    "a", "an", "and", "are", "as", "at", "be", "but", "by", "can", "do", "does", "for", "from",
    "had", "has", "have", "he", "her", "his", "how", "i", "if", "in", "is", "it", "its", "my",
    "no", "not", "of", "on", "or", "she", "so", "that", "the", "their", "they", "this", "to",
    "was", "we", "were", "what", "when", "where", "which", "who", "why", "will", "with", "you",
    "your",
];

pub fn is_stopword(word: &str) -> bool {
    STOPWORDS.contains(&word)
}

/// Entries come from paraphrase pairs only; the negative-sampling pool
/// covers every sentence in the corpus regardless of label.
pub fn build_shared_index(
    pairs: &[ParaphrasePair],
    occurrence: Occurrence,
    stopword_filter: bool,
) -> SharedWordIndex {
    let mut entries = Vec::new();
    for (pair_id, pair) in pairs.iter().enumerate() {
        if !pair.label.is_paraphrase() {
            continue;
        }
        for (word, pos1, pos2) in
            shared_word_positions(&pair.s1, &pair.s2, occurrence, stopword_filter)
        {
            entries.push(SharedEntry {
                pair_id,
                word,
                pos1,
                pos2,
            });
        }
    }
    let mut pool: HashMap<String, Vec<usize>> = HashMap::new();
    for (pair_id, pair) in pairs.iter().enumerate() {
        for (side, sentence) in [&pair.s1, &pair.s2].into_iter().enumerate() {
            let id = pair_id * 2 + side;
            let types: BTreeSet<&str> = sentence.tokens().iter().map(|s| s.as_str()).collect();
            for word in types {
                pool.entry(word.to_string()).or_default().push(id);
            }
        }
    }
    SharedWordIndex { entries, pool }
}

/// Words present in both sentences with the positions dictated by the
/// occurrence mode, sorted by word. First yields one (pos1, pos2) per
/// word; All yields the full position cross product.
pub fn shared_word_positions(
    s1: &Sentence,
    s2: &Sentence,
    occurrence: Occurrence,
    stopword_filter: bool,
) -> Vec<(String, usize, usize)> {
    let t1: BTreeSet<&str> = s1.tokens().iter().map(|s| s.as_str()).collect();
    let t2: BTreeSet<&str> = s2.tokens().iter().map(|s| s.as_str()).collect();
    let mut out = Vec::new();
    for word in t1.intersection(&t2) {
        if stopword_filter && is_stopword(word) {
            continue;
        }
        match occurrence {
            Occurrence::First => {
                let pos1 = s1.position_of(word).expect("word in s1");
                let pos2 = s2.position_of(word).expect("word in s2");
                out.push((word.to_string(), pos1, pos2));
            }
            Occurrence::All => {
                for &pos1 in &positions_of(s1, word) {
                    for &pos2 in &positions_of(s2, word) {
                        out.push((word.to_string(), pos1, pos2));
                    }
                }
            }
        }
    }
    out
}

fn positions_of(sentence: &Sentence, word: &str) -> Vec<usize> {
    sentence
        .tokens()
        .iter()
        .enumerate()
        .filter(|(_, t)| t.as_str() == word)
        .map(|(i, _)| i)
        .collect()
}

/// Seeded split stratified by label, so both sides keep both labels
/// whenever a label group has at least two pairs. Output order follows
/// the input corpus.
pub fn split(
    pairs: &[ParaphrasePair],
    held_out_fraction: f64,
    seed: u64,
) -> Result<(Vec<ParaphrasePair>, Vec<ParaphrasePair>)> {
    if !(held_out_fraction > 0.0 && held_out_fraction < 1.0) {
        return Err(Error::InvalidInput(format!(
            "held-out fraction must be in (0, 1), got {}",
            held_out_fraction
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut held_ids = Vec::new();
    for label in [Label::Paraphrase, Label::NonParaphrase] {
        let mut group: Vec<usize> = (0..pairs.len()).filter(|&i| pairs[i].label == label).collect();
        if group.len() < 2 {
            continue;
        }
        group.shuffle(&mut rng);
        let take = ((group.len() as f64 * held_out_fraction).round() as usize)
            .clamp(1, group.len() - 1);
        held_ids.extend_from_slice(&group[..take]);
    }
    held_ids.sort_unstable();
    if held_ids.is_empty() || held_ids.len() == pairs.len() {
        return Err(Error::InvalidInput(format!(
            "cannot split {} pairs at fraction {}: one side would be empty",
            pairs.len(),
            held_out_fraction
        )));
    }
    let mut train = Vec::with_capacity(pairs.len() - held_ids.len());
    let mut held = Vec::with_capacity(held_ids.len());
    let mut next = held_ids.iter().peekable();
    for (i, pair) in pairs.iter().enumerate() {
        if next.peek() == Some(&&i) {
            held.push(pair.clone());
            next.next();
        } else {
            train.push(pair.clone());
        }
    }
    Ok((train, held))
}
