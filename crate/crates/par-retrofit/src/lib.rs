//! Paraphrase-aware retrofitting of contextual encoders.
//!
//! The library learns a square transform on an encoder's input embeddings
//! so that the same word, observed in two sentences that paraphrase each
//! other, receives nearby contextual vectors, while words in unrelated
//! sentences keep their distance. The transform is trained with a hinge
//! objective plus an orthogonality regularizer and is applied at the
//! embedding layer; the encoder itself stays frozen.

pub mod commands;
pub mod config;
pub mod corpus;
pub mod embed;
pub mod encoder;
pub mod error;
pub mod linalg;
pub mod metrics;
pub mod paraid;
pub mod rng;
pub mod synth;
pub mod train;
pub mod transform;

pub use corpus::{Label, Occurrence, ParaphrasePair, Sentence, SharedWordIndex};
pub use embed::InputEmbedder;
pub use encoder::{ContextualEncoding, EncoderModel, LayerMode};
pub use error::{Error, Result};
pub use linalg::{Matrix, Vector};
pub use metrics::{DistanceReport, ReferencePairStat};
pub use train::{Aggregation, StopReason, TrainConfig, TrainReport, TransformScope};
pub use transform::TransformMatrix;
