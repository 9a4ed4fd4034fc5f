//! Deterministic toy corpus generator: templated sentences over a small
//! closed vocabulary, paired with meaning-preserving rewrites (label 1)
//! and word-sharing distractor templates (label 0). Used by the
//! benchmark suite and handy for smoke-testing configs.

use std::collections::HashMap;

use rand::Rng;

use crate::corpus::{tokenize, Label, ParaphrasePair};
use crate::embed::InputEmbedder;
use crate::error::Result;
use crate::linalg::Vector;
use crate::rng::{rng_from_seed, sub_seed};

/// Input dimensionality of the generated fixture.
pub const SYNTH_DIM: usize = 16;

const CONTENT_DIMS: usize = 12;
const CONTENT_SCALE: f64 = 0.35;
const FUNCTION_SCALE: f64 = 0.9;

pub const CREATURES: [&str; 10] = [
    "fox", "wolf", "crow", "hawk", "deer", "otter", "mouse", "heron", "pike", "trout",
];
pub const PLACES: [&str; 10] = [
    "field", "forest", "river", "marsh", "meadow", "hill", "valley", "shore", "cliff", "glade",
];
pub const VERBS: [&str; 12] = [
    "runs", "walks", "hunts", "rests", "sleeps", "waits", "drifts", "glides", "circles",
    "crosses", "climbs", "watches",
];
pub const ADJECTIVES: [&str; 6] = ["quick", "grey", "silent", "old", "young", "wild"];
pub const DETERMINERS: [&str; 4] = ["the", "a", "every", "some"];
pub const PREPOSITIONS: [&str; 5] = ["near", "under", "over", "behind", "beside"];
pub const CONNECTIVES: [&str; 3] = ["and", "then", "while"];

/// The full 50-word vocabulary.
pub fn vocabulary() -> Vec<&'static str> {
    let mut v = Vec::with_capacity(50);
    v.extend(CREATURES);
    v.extend(PLACES);
    v.extend(VERBS);
    v.extend(ADJECTIVES);
    v.extend(DETERMINERS);
    v.extend(PREPOSITIONS);
    v.extend(CONNECTIVES);
    v
}

#[derive(Clone, Debug)]
pub struct SynthConfig {
    /// Number of templates; the corpus has one paraphrase and one
    /// distractor pair per template.
    pub templates: usize,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            templates: 300,
            seed: 41,
        }
    }
}

#[derive(Clone)]
struct Template {
    det1: usize,
    adj: usize,
    creature: usize,
    verb: usize,
    prep: usize,
    det2: usize,
    place: usize,
    tail: Option<(usize, usize)>,
}

impl Template {
    fn sentence(&self) -> String {
        let mut words = vec![
            DETERMINERS[self.det1],
            ADJECTIVES[self.adj],
            CREATURES[self.creature],
            VERBS[self.verb],
            PREPOSITIONS[self.prep],
            DETERMINERS[self.det2],
            PLACES[self.place],
        ];
        if let Some((c, v)) = self.tail {
            words.push(CONNECTIVES[c]);
            words.push(VERBS[v]);
        }
        words.join(" ")
    }

    /// Swaps determiner and preposition synonyms in place; all content
    /// words and their positions survive.
    fn paraphrase(&self) -> String {
        let swap = |d: usize| match DETERMINERS[d] {
            "the" => "a",
            "a" => "the",
            "every" => "some",
            _ => "every",
        };
        let mut words = vec![
            swap(self.det1),
            ADJECTIVES[self.adj],
            CREATURES[self.creature],
            VERBS[self.verb],
            PREPOSITIONS[(self.prep + 1) % PREPOSITIONS.len()],
            swap(self.det2),
            PLACES[self.place],
        ];
        if let Some((c, v)) = self.tail {
            words.push(CONNECTIVES[c]);
            words.push(VERBS[v]);
        }
        words.join(" ")
    }
}

/// 2 * templates pairs, label-balanced, fully determined by the seed.
/// Distractors prefer a template matching on both creature and place so
/// the label-0 class stays lexically close to the label-1 class.
pub fn synth_corpus(cfg: &SynthConfig) -> Result<Vec<ParaphrasePair>> {
    let mut rng = rng_from_seed(sub_seed(cfg.seed, "synth"));
    let mut templates: Vec<Template> = Vec::with_capacity(cfg.templates);
    for _ in 0..cfg.templates {
        let verb = rng.gen_range(0..VERBS.len());
        let tail = if rng.gen_range(0..2u32) == 0 {
            let mut v2 = rng.gen_range(0..VERBS.len());
            if v2 == verb {
                v2 = (v2 + 1) % VERBS.len();
            }
            Some((rng.gen_range(0..CONNECTIVES.len()), v2))
        } else {
            None
        };
        templates.push(Template {
            det1: rng.gen_range(0..DETERMINERS.len()),
            adj: rng.gen_range(0..ADJECTIVES.len()),
            creature: rng.gen_range(0..CREATURES.len()),
            verb,
            prep: rng.gen_range(0..PREPOSITIONS.len()),
            det2: rng.gen_range(0..DETERMINERS.len()),
            place: rng.gen_range(0..PLACES.len()),
            tail,
        });
    }
    let distractor = |i: usize| -> usize {
        let t = &templates[i];
        let mut tier1 = None;
        let mut tier2 = None;
        for step in 1..templates.len() {
            let j = (i + step) % templates.len();
            let o = &templates[j];
            if o.sentence() == t.sentence() {
                continue;
            }
            if o.creature == t.creature && o.place == t.place && o.adj == t.adj {
                return j;
            }
            if tier1.is_none() && o.creature == t.creature && o.place == t.place {
                tier1 = Some(j);
            }
            if tier2.is_none() && (o.creature == t.creature || o.place == t.place) {
                tier2 = Some(j);
            }
        }
        tier1
            .or(tier2)
            .expect("some template shares a creature or place")
    };
    let mut pairs = Vec::with_capacity(2 * cfg.templates);
    for i in 0..templates.len() {
        let t = &templates[i];
        pairs.push(ParaphrasePair {
            s1: tokenize(&t.sentence())?,
            s2: tokenize(&t.paraphrase())?,
            label: Label::Paraphrase,
        });
        let j = distractor(i);
        pairs.push(ParaphrasePair {
            s1: tokenize(&t.sentence())?,
            s2: tokenize(&templates[j].sentence())?,
            label: Label::NonParaphrase,
        });
    }
    Ok(pairs)
}

/// Table embedder matched to the generated corpus: content words occupy
/// the first 12 dimensions, function words the last 4, so the two kinds
/// of lexical variation stay linearly separable at the input. "the" and
/// "a" are planted close together; the other swap pairs sit far apart.
pub fn synth_embedder(seed: u64) -> Result<InputEmbedder> {
    let mut rng = rng_from_seed(sub_seed(seed, "synth-embed"));
    let mut table: HashMap<String, Vector> = HashMap::new();
    let mut draw = |lo: usize, hi: usize, scale: f64, base: Option<&Vector>| {
        let mut v = vec![0.0; SYNTH_DIM];
        if let Some(b) = base {
            v.copy_from_slice(b.as_slice());
        }
        for entry in v.iter_mut().take(hi).skip(lo) {
            *entry = (*entry + (rng.gen::<f64>() * 2.0 - 1.0) * scale).clamp(-1.0, 1.0);
        }
        Vector::new(v).expect("nonempty")
    };
    for word in CREATURES
        .iter()
        .chain(PLACES.iter())
        .chain(VERBS.iter())
        .chain(ADJECTIVES.iter())
    {
        let v = draw(0, CONTENT_DIMS, CONTENT_SCALE, None);
        table.insert(word.to_string(), v);
    }
    let the = draw(CONTENT_DIMS, SYNTH_DIM, FUNCTION_SCALE, None);
    let a = draw(CONTENT_DIMS, SYNTH_DIM, 0.1, Some(&the));
    table.insert("the".to_string(), the);
    table.insert("a".to_string(), a);
    for word in ["every", "some"]
        .iter()
        .chain(PREPOSITIONS.iter())
        .chain(CONNECTIVES.iter())
    {
        let v = draw(CONTENT_DIMS, SYNTH_DIM, FUNCTION_SCALE, None);
        table.insert(word.to_string(), v);
    }
    InputEmbedder::with_table(SYNTH_DIM, table, sub_seed(seed, "synth-oov"))
}
