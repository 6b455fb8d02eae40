//! End-to-end experiments: translation accuracy, binary polarity transfer,
//! ANEW regression transfer and cross-lingual review classification.
//!
//! Each experiment takes an [`ExperimentConfig`] and returns an
//! [`ExperimentReport`] that records the resolved config, the seed, crate
//! versions and SHA-256 digests of every input file, so a run can be
//! reproduced exactly. Monte Carlo runs draw from independent sub-streams of
//! the top-level seed and may execute in parallel without changing results.

mod anew;
mod binary;
pub mod config;
mod reviews;
mod translation;

pub use anew::run_anew_eval;
pub use binary::run_binary_sentiment_eval;
pub use config::{ExperimentConfig, ReviewSide};
pub use reviews::{
    featurize_review, featurize_side, max_review_length, run_review_eval, FeaturizationReport,
    SentimentVector,
};
pub use translation::{fit_alignment, run_translation_eval};

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::Read;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::alignment::{build_aligned_pairs, fit_translation_matrix, TranslationMatrix};
use crate::embedding::VectorSpace;
use crate::error::{Error, Result};
use crate::ingest::{self, BilingualLexicon, DiscardReport};
use crate::metrics::MetricReport;
use crate::rng;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

// Sub-stream identifiers under the top-level seed.
pub(crate) const STREAM_SPLITS: u64 = 1;
pub(crate) const STREAM_LEXICON_SAMPLE: u64 = 2;
pub(crate) const STREAM_BALANCE: u64 = 3;
pub(crate) const STREAM_LABEL_SHUFFLE: u64 = 4;
pub(crate) const STREAM_SGD: u64 = 5;

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub experiment: String,
    pub seed: u64,
    pub versions: BTreeMap<String, String>,
    pub config: serde_json::Value,
    /// Config path as written -> SHA-256 of the file contents.
    pub inputs: BTreeMap<String, String>,
    pub metrics: Vec<MetricReport>,
    pub details: serde_json::Value,
}

impl ExperimentReport {
    pub fn metric(&self, name: &str) -> Option<&MetricReport> {
        self.metrics.iter().find(|m| m.name == name)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// One per-item prediction, for error analysis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictionRow {
    pub run: usize,
    pub token: String,
    pub gold: String,
    pub predicted: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeakageCheck {
    pub run: usize,
    pub shared_tokens: usize,
}

/// An experiment outcome: the report plus per-item predictions.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: ExperimentReport,
    pub predictions: Vec<PredictionRow>,
}

/// Records digests of the files an experiment reads.
pub(crate) struct Inputs<'a> {
    cfg: &'a ExperimentConfig,
    digests: BTreeMap<String, String>,
}

impl<'a> Inputs<'a> {
    pub(crate) fn new(cfg: &'a ExperimentConfig) -> Self {
        Inputs {
            cfg,
            digests: BTreeMap::new(),
        }
    }

    /// Resolves a required path and records its digest.
    pub(crate) fn path(
        &mut self,
        key: &str,
        value: &Option<std::path::PathBuf>,
    ) -> Result<std::path::PathBuf> {
        let resolved = self.cfg.require(key, value)?;
        let label = value.as_ref().expect("required").display().to_string();
        self.digests.insert(label, sha256_file(&resolved)?);
        Ok(resolved)
    }

    pub(crate) fn into_digests(self) -> BTreeMap<String, String> {
        self.digests
    }
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let mut file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 64 * 1024];
    loop {
        let n = file.read(&mut buf).map_err(|e| Error::io(path, e))?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hex::encode(hasher.finalize()))
}

pub(crate) fn versions() -> BTreeMap<String, String> {
    BTreeMap::from([("transent-core".to_string(), crate::VERSION.to_string())])
}

pub(crate) fn report(
    name: &str,
    cfg: &ExperimentConfig,
    inputs: Inputs<'_>,
    metrics: Vec<MetricReport>,
    details: serde_json::Value,
) -> ExperimentReport {
    ExperimentReport {
        schema_version: REPORT_SCHEMA_VERSION,
        experiment: name.to_string(),
        seed: cfg.seed,
        versions: versions(),
        config: cfg.to_json(),
        inputs: inputs.into_digests(),
        metrics,
        details,
    }
}

pub(crate) fn load_spaces(
    cfg: &ExperimentConfig,
    inputs: &mut Inputs<'_>,
) -> Result<(VectorSpace, VectorSpace)> {
    let src = inputs.path("source_space", &cfg.paths.source_space)?;
    let tgt = inputs.path("target_space", &cfg.paths.target_space)?;
    let source = VectorSpace::load_word2vec_text(src, &cfg.source_language)?;
    let target = VectorSpace::load_word2vec_text(tgt, &cfg.target_language)?;
    Ok((source, target))
}

#[derive(Debug, Clone, Serialize)]
pub(crate) struct LexiconSummary {
    pub loaded: usize,
    pub kept: usize,
    pub used: usize,
    pub discarded: DiscardReport,
}

/// Loads `paths.lexicon`, filters it against both spaces and, when
/// `alignment.lexicon_size` is set, draws that many pairs at random.
pub(crate) fn alignment_lexicon(
    cfg: &ExperimentConfig,
    inputs: &mut Inputs<'_>,
    source: &VectorSpace,
    target: &VectorSpace,
) -> Result<(BilingualLexicon, LexiconSummary)> {
    let path = inputs.path("lexicon", &cfg.paths.lexicon)?;
    let lex = ingest::load_lexicon(path, &cfg.source_language, &cfg.target_language)?;
    let loaded = lex.len();
    let (filtered, discarded) = ingest::filter_by_vocabulary(&lex, source, target);
    let kept = filtered.len();
    let used = match cfg.alignment.lexicon_size {
        Some(n) if n > kept => {
            return Err(Error::Pipeline(format!(
                "alignment.lexicon_size = {n} but only {kept} pairs survive vocabulary filtering"
            )))
        }
        Some(n) => ingest::sample_lexicon(
            &filtered,
            n,
            rng::derive_seed(cfg.seed, STREAM_LEXICON_SAMPLE),
        )?,
        None => filtered,
    };
    let summary = LexiconSummary {
        loaded,
        kept,
        used: used.len(),
        discarded,
    };
    Ok((used, summary))
}

/// The source-to-target matrix: loaded from `paths.translation_matrix` when
/// given, otherwise fit on the alignment lexicon.
pub(crate) fn resolve_translation_matrix(
    cfg: &ExperimentConfig,
    inputs: &mut Inputs<'_>,
    source: &VectorSpace,
    target: &VectorSpace,
) -> Result<(TranslationMatrix, serde_json::Value)> {
    if cfg.paths.translation_matrix.is_some() {
        let path = inputs.path("translation_matrix", &cfg.paths.translation_matrix)?;
        let w = TranslationMatrix::load(path)?;
        if w.source_dim() != source.dim() || w.target_dim() != target.dim() {
            return Err(Error::Pipeline(format!(
                "translation matrix is {} x {} but spaces have dimensions {} -> {}",
                w.target_dim(),
                w.source_dim(),
                source.dim(),
                target.dim()
            )));
        }
        if w.source_language != cfg.source_language || w.target_language != cfg.target_language {
            return Err(Error::Pipeline(format!(
                "translation matrix maps {} -> {}, config expects {} -> {}",
                w.source_language, w.target_language, cfg.source_language, cfg.target_language
            )));
        }
        let info =
            serde_json::json!({"origin": "file", "training_pair_count": w.training_pair_count});
        Ok((w, info))
    } else {
        let (lex, summary) = alignment_lexicon(cfg, inputs, source, target)?;
        let fit = fit_translation_matrix(&build_aligned_pairs(&lex, source, target)?)?;
        let info = serde_json::json!({
            "origin": "fitted",
            "training_pair_count": fit.matrix.training_pair_count,
            "residual": fit.residual,
            "lexicon_loaded": summary.loaded,
            "lexicon_kept": summary.kept,
            "lexicon_discarded": summary.discarded.len(),
        });
        Ok((fit.matrix, info))
    }
}

/// Joins target-language items with their source-language translations.
///
/// `lexicon` is `source<TAB>target`; the first source listed for a target
/// token wins. Items are deduplicated by target token so train and test
/// splits can never share one.
pub(crate) struct TranslatedItems<T> {
    pub items: Vec<(String, String, T)>,
    pub untranslated: usize,
    pub duplicates: usize,
    pub discarded: DiscardReport,
}

pub(crate) fn join_translations<T: Clone>(
    items: &[(String, T)],
    lexicon: &BilingualLexicon,
    source: &VectorSpace,
    target: &VectorSpace,
) -> TranslatedItems<T> {
    let mut by_target: HashMap<&str, &str> = HashMap::new();
    for (s, t) in lexicon.pairs() {
        by_target.entry(t.as_str()).or_insert(s.as_str());
    }
    let mut seen = HashSet::new();
    let mut pairs = Vec::new();
    let mut payload = Vec::new();
    let mut untranslated = 0;
    let mut duplicates = 0;
    for (token, value) in items {
        if !seen.insert(token.as_str()) {
            duplicates += 1;
            continue;
        }
        match by_target.get(token.as_str()) {
            Some(s) => {
                pairs.push((s.to_string(), token.clone()));
                payload.push(value.clone());
            }
            None => untranslated += 1,
        }
    }
    // Several targets may share a source translation; keep the first.
    let mut src_seen = HashSet::new();
    let mut keep = Vec::new();
    for (i, (s, _)) in pairs.iter().enumerate() {
        if src_seen.insert(s.clone()) {
            keep.push(i);
        } else {
            duplicates += 1;
        }
    }
    let pairs: Vec<(String, String)> = keep.iter().map(|&i| pairs[i].clone()).collect();
    let payload: Vec<T> = keep.iter().map(|&i| payload[i].clone()).collect();
    let lex = BilingualLexicon::new(
        lexicon.source_language.clone(),
        lexicon.target_language.clone(),
        pairs,
    )
    .expect("deduplicated pairs form a lexicon");
    let (filtered, discarded) = ingest::filter_by_vocabulary(&lex, source, target);
    let kept: HashSet<(&str, &str)> = filtered
        .pairs()
        .iter()
        .map(|(s, t)| (s.as_str(), t.as_str()))
        .collect();
    let items = lex
        .pairs()
        .iter()
        .zip(payload)
        .filter(|((s, t), _)| kept.contains(&(s.as_str(), t.as_str())))
        .map(|((s, t), v)| (s.clone(), t.clone(), v))
        .collect();
    TranslatedItems {
        items,
        untranslated,
        duplicates,
        discarded,
    }
}

/// Maps `f` over run indices, in parallel when configured, preserving order.
pub(crate) fn map_runs<R: Send>(
    parallel: bool,
    run_count: usize,
    f: impl Fn(usize) -> Result<R> + Sync + Send,
) -> Result<Vec<R>> {
    if parallel {
        (0..run_count).into_par_iter().map(f).collect()
    } else {
        (0..run_count).map(f).collect()
    }
}

pub(crate) fn shared_count<'a>(
    a: impl IntoIterator<Item = &'a str>,
    b: impl IntoIterator<Item = &'a str>,
) -> usize {
    let left: HashSet<&str> = a.into_iter().collect();
    b.into_iter()
        .filter(|t| left.contains(t))
        .collect::<HashSet<_>>()
        .len()
}

pub(crate) fn leakage_guard(checks: &[LeakageCheck]) -> Result<()> {
    match checks.iter().find(|c| c.shared_tokens > 0) {
        Some(c) => Err(Error::Pipeline(format!(
            "leakage: run {} shares {} tokens between train and test",
            c.run, c.shared_tokens
        ))),
        None => Ok(()),
    }
}

pub(crate) fn collect_flags(per_run: &[Vec<String>]) -> Vec<String> {
    per_run
        .iter()
        .enumerate()
        .flat_map(|(r, flags)| flags.iter().map(move |f| format!("run {r}: {f}")))
        .collect()
}
