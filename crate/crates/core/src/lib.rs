//! Cross-lingual sentiment transfer through a learned linear map between
//! monolingual word-embedding spaces.
//!
//! A small bilingual word list is enough to fit a [`TranslationMatrix`] that
//! carries source-language vectors into the target (English) space. Sentiment
//! models trained only on target-language vectors are then applied to mapped
//! foreign-word vectors:
//!
//! - [`models::LinearBinaryModel`]: hinge-loss linear classifier for word polarity.
//! - [`models::BayesianRidgeModel`]: valence / arousal / dominance regression.
//! - [`models::LogisticModel`]: 1-5 star review classifier over per-word sentiment vectors.
//!
//! The [`pipelines`] module wires these into the four evaluation experiments and
//! [`fixtures`] generates synthetic data sets with known ground truth.

pub mod alignment;
pub mod embedding;
mod error;
pub mod fixtures;
pub mod ingest;
pub mod metrics;
pub mod models;
pub mod pipelines;
pub mod rng;

pub use alignment::{AlignedPairs, FitResult, TranslationMatrix};
pub use embedding::{Neighbor, VectorSpace};
pub use error::{Error, Result};
pub use ingest::{
    AnewRating, BilingualLexicon, DiscardReason, DiscardReport, PolarityExample, ReviewRecord,
};
pub use metrics::{MetricReport, SplitPlan};

/// Version of this crate, embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
