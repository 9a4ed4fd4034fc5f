//! Context-independent input embeddings: an optional lookup table with a
//! deterministic character-3-gram hash fallback, so every token (in or out
//! of vocabulary) maps to the same k-dimensional vector on every call.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::Vector;

#[derive(Clone, Debug)]
pub struct InputEmbedder {
    dim: usize,
    table: HashMap<String, Vector>,
    hash_seed: u64,
}

impl InputEmbedder {
    /// Hash-only embedder; every word falls through to the n-gram expansion.
    pub fn hashed(dim: usize, hash_seed: u64) -> Self {
        InputEmbedder {
            dim,
            table: HashMap::new(),
            hash_seed,
        }
    }

    /// Table-backed embedder; unseen words fall back to the hash expansion.
    /// Table vectors must have entries in [-1, 1].
    pub fn with_table(dim: usize, table: HashMap<String, Vector>, hash_seed: u64) -> Result<Self> {
        for (word, vec) in &table {
            if vec.dim() != dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    actual: vec.dim(),
                    context: "embedding table entry",
                });
            }
            if vec.as_slice().iter().any(|x| x.abs() > 1.0) {
                return Err(Error::InvalidInput(format!(
                    "embedding for {:?} has entries outside [-1, 1]",
                    word
                )));
            }
        }
        Ok(InputEmbedder {
            dim,
            table,
            hash_seed,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn embed(&self, word: &str) -> Result<Vector> {
        if word.is_empty() {
            return Err(Error::InvalidInput("cannot embed an empty token".into()));
        }
        if let Some(v) = self.table.get(word) {
            return Ok(v.clone());
        }
        Ok(self.hash_expand(word))
    }

    /// Character 3-grams of ^word$ hashed into k signed buckets, then
    /// squashed with tanh into [-1, 1].
    fn hash_expand(&self, word: &str) -> Vector {
        let padded: Vec<char> = std::iter::once('^')
            .chain(word.chars())
            .chain(std::iter::once('$'))
            .collect();
        let n = padded.len();
        let gram_len = 3.min(n);
        let mut acc = vec![0.0f64; self.dim];
        let mut grams = 0usize;
        for start in 0..=(n - gram_len) {
            let gram: String = padded[start..start + gram_len].iter().collect();
            let h = fnv1a64_seeded(gram.as_bytes(), self.hash_seed);
            let bucket = (h % self.dim as u64) as usize;
            let sign = if (h >> 63) & 1 == 1 { 1.0 } else { -1.0 };
            acc[bucket] += sign;
            grams += 1;
        }
        let norm = (grams as f64).sqrt();
        Vector::from_raw(acc.into_iter().map(|a| (a / norm).tanh()).collect())
    }

    /// Embed every token of a sentence.
    pub fn embed_tokens(&self, tokens: &[String]) -> Result<Vec<Vector>> {
        tokens.iter().map(|t| self.embed(t)).collect()
    }
}

fn fnv1a64_seeded(bytes: &[u8], seed: u64) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Parse the embedding table text format: header "<vocab_size> <k>", then
/// one line per word: "<token> <k floats>".
pub fn parse_table(text: &str, file: &str) -> Result<(usize, HashMap<String, Vector>)> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(file, 1, "empty embedding table"))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(Error::parse(
            file,
            1,
            "header must be \"<vocab_size> <k>\"",
        ));
    }
    let vocab_size: usize = parts[0]
        .parse()
        .map_err(|_| Error::parse(file, 1, format!("bad vocab size {:?}", parts[0])))?;
    let k: usize = parts[1]
        .parse()
        .map_err(|_| Error::parse(file, 1, format!("bad dimension {:?}", parts[1])))?;
    if k == 0 {
        return Err(Error::parse(file, 1, "dimension must be positive"));
    }
    // Header is untrusted; cap the preallocation.
    let mut table = HashMap::with_capacity(vocab_size.min(1 << 16));
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let token = fields
            .next()
            .ok_or_else(|| Error::parse(file, lineno, "missing token"))?
            .to_string();
        let values: Vec<&str> = fields.collect();
        if values.len() != k {
            return Err(Error::parse(
                file,
                lineno,
                format!("expected {} values for {:?}, got {}", k, token, values.len()),
            ));
        }
        let mut data = Vec::with_capacity(k);
        for v in values {
            let x: f64 = v
                .parse()
                .map_err(|_| Error::parse(file, lineno, format!("non-numeric entry {:?}", v)))?;
            if !x.is_finite() || x.abs() > 1.0 {
                return Err(Error::parse(
                    file,
                    lineno,
                    format!("entry {:?} outside [-1, 1]", v),
                ));
            }
            data.push(x);
        }
        if table.insert(token.clone(), Vector::from_raw(data)).is_some() {
            return Err(Error::parse(
                file,
                lineno,
                format!("duplicate token {:?}", token),
            ));
        }
    }
    if table.len() != vocab_size {
        return Err(Error::InvalidInput(format!(
            "{}: header claims {} words, found {}",
            file,
            vocab_size,
            table.len()
        )));
    }
    Ok((k, table))
}

pub fn load_table(path: &Path) -> Result<(usize, HashMap<String, Vector>)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_table(&text, &path.display().to_string())
}
