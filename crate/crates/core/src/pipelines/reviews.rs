//! Review classification from per-word sentiment vectors.
//!
//! Each review becomes a fixed-length vector: every in-vocabulary token is
//! (optionally) mapped into the target space, scored by the affect
//! regressor, clamped into `[1, 9]` and written to the next slot; remaining
//! slots stay 0. The length is that of the longest target training review.

use serde::Serialize;
use serde_json::json;

use crate::alignment::TranslationMatrix;
use crate::embedding::VectorSpace;
use crate::error::{Error, Result};
use crate::ingest::{self, AffectDimension, ReviewRecord, RATING_MAX, RATING_MIN, STAR_LABELS};
use crate::metrics::{multiclass_accuracy, MetricReport};
use crate::models::{train_bayesian_ridge, train_logistic, BayesianRidgeModel};

use super::config::{ReviewClassifier, ReviewSide};
use super::{
    load_spaces, report, resolve_translation_matrix, ExperimentConfig, ExperimentReport, Inputs,
    Outcome, PredictionRow,
};

/// Per-slot affect values, zero-padded. With several dimensions the vector
/// holds one `max_length` block per dimension, in configured order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SentimentVector {
    pub values: Vec<f64>,
    pub source_token_count: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FeaturizationReport {
    pub reviews: usize,
    pub tokens: usize,
    pub oov_tokens: usize,
    pub truncated_reviews: usize,
    pub truncated_tokens: usize,
    pub empty_vectors: usize,
}

/// Builds the sentiment vector of one review. `space` holds the review's
/// language; `translation` maps it into the regressors' space when given.
pub fn featurize_review(
    review: &ReviewRecord,
    regressors: &[(AffectDimension, BayesianRidgeModel)],
    space: &VectorSpace,
    translation: Option<&TranslationMatrix>,
    max_length: usize,
    report: &mut FeaturizationReport,
) -> Result<SentimentVector> {
    if max_length == 0 {
        return Err(Error::Pipeline("max_length must be at least 1".into()));
    }
    report.reviews += 1;
    report.tokens += review.tokens.len();
    let mut scored: Vec<Vec<f64>> = Vec::new();
    for token in &review.tokens {
        let Some(vector) = space.lookup(token) else {
            report.oov_tokens += 1;
            continue;
        };
        let mapped;
        let x = match translation {
            Some(w) => {
                mapped = w.map_vector(vector)?;
                &mapped[..]
            }
            None => vector,
        };
        let values = regressors
            .iter()
            .map(|(_, m)| m.predict(x).map(|v| v.clamp(RATING_MIN, RATING_MAX)))
            .collect::<Result<Vec<f64>>>()?;
        scored.push(values);
    }
    if scored.len() > max_length {
        report.truncated_reviews += 1;
        report.truncated_tokens += scored.len() - max_length;
        scored.truncate(max_length);
    }
    if scored.is_empty() {
        report.empty_vectors += 1;
    }
    let mut values = vec![0.0; max_length * regressors.len()];
    for (slot, per_dim) in scored.iter().enumerate() {
        for (d, v) in per_dim.iter().enumerate() {
            values[d * max_length + slot] = *v;
        }
    }
    Ok(SentimentVector {
        values,
        source_token_count: scored.len(),
    })
}

/// Token count of the longest review.
pub fn max_review_length(reviews: &[ReviewRecord]) -> usize {
    reviews.iter().map(|r| r.tokens.len()).max().unwrap_or(0)
}

struct ReviewContext {
    source: VectorSpace,
    target: VectorSpace,
    translation: TranslationMatrix,
    translation_info: serde_json::Value,
    regressors: Vec<(AffectDimension, BayesianRidgeModel)>,
    regressor_words: usize,
    target_reviews: Vec<ReviewRecord>,
    max_length: usize,
}

fn prepare(cfg: &ExperimentConfig, inputs: &mut Inputs<'_>) -> Result<ReviewContext> {
    let (source, target) = load_spaces(cfg, inputs)?;
    let (translation, translation_info) =
        resolve_translation_matrix(cfg, inputs, &source, &target)?;

    // The affect regressors see every rated word the target space covers.
    let ratings = ingest::load_anew(inputs.path("anew", &cfg.paths.anew)?)?;
    let rated: Vec<_> = ratings
        .iter()
        .filter(|r| target.contains(&r.token))
        .collect();
    if rated.len() < 2 {
        return Err(Error::Pipeline(format!(
            "only {} ANEW words are in the target space",
            rated.len()
        )));
    }
    let x: Vec<Vec<f64>> = rated
        .iter()
        .map(|r| target.lookup(&r.token).unwrap().to_vec())
        .collect();
    let ridge = cfg.anew.ridge_config();
    let regressors = cfg
        .reviews
        .feature_dims
        .iter()
        .map(|&dim| {
            let y: Vec<f64> = rated.iter().map(|r| r.get(dim)).collect();
            train_bayesian_ridge(&x, &y, &ridge).map(|m| (dim, m))
        })
        .collect::<Result<Vec<_>>>()?;

    let target_reviews =
        ingest::load_reviews(inputs.path("target_reviews", &cfg.paths.target_reviews)?)?;
    let max_length = max_review_length(&target_reviews);
    if max_length == 0 {
        return Err(Error::Pipeline(
            "target training reviews are all empty".into(),
        ));
    }
    Ok(ReviewContext {
        source,
        target,
        translation,
        translation_info,
        regressors,
        regressor_words: rated.len(),
        target_reviews,
        max_length,
    })
}

fn featurize_all(
    reviews: &[ReviewRecord],
    ctx: &ReviewContext,
    side: ReviewSide,
) -> Result<(Vec<SentimentVector>, FeaturizationReport)> {
    let mut report = FeaturizationReport::default();
    let (space, w) = match side {
        ReviewSide::Target => (&ctx.target, None),
        ReviewSide::Source => (&ctx.source, Some(&ctx.translation)),
    };
    let vectors = reviews
        .iter()
        .map(|r| featurize_review(r, &ctx.regressors, space, w, ctx.max_length, &mut report))
        .collect::<Result<Vec<_>>>()?;
    Ok((vectors, report))
}

/// Featurizes one review set (per `reviews.featurize_side`) and returns the
/// vectors with their star labels.
pub fn featurize_side(
    cfg: &ExperimentConfig,
) -> Result<(ExperimentReport, Vec<(SentimentVector, u8)>)> {
    let mut inputs = Inputs::new(cfg);
    let ctx = prepare(cfg, &mut inputs)?;
    let side = cfg.reviews.featurize_side;
    let reviews = match side {
        ReviewSide::Target => ctx.target_reviews.clone(),
        ReviewSide::Source => {
            ingest::load_reviews(inputs.path("source_reviews", &cfg.paths.source_reviews)?)?
        }
    };
    let (vectors, feat) = featurize_all(&reviews, &ctx, side)?;
    let details = json!({
        "side": side,
        "max_length": ctx.max_length,
        "feature_dims": cfg.reviews.feature_dims,
        "featurization": feat,
    });
    let rows = vectors
        .into_iter()
        .zip(reviews.iter().map(|r| r.label))
        .collect();
    Ok((report("featurize", cfg, inputs, vec![], details), rows))
}

/// Trains the star classifier on target-language reviews and measures its
/// accuracy on source-language reviews mapped into the target space.
pub fn run_review_eval(cfg: &ExperimentConfig) -> Result<Outcome> {
    let mut inputs = Inputs::new(cfg);
    let ctx = prepare(cfg, &mut inputs)?;
    let source_reviews =
        ingest::load_reviews(inputs.path("source_reviews", &cfg.paths.source_reviews)?)?;
    if source_reviews.is_empty() {
        return Err(Error::Pipeline("no source-language test reviews".into()));
    }

    let (train_vecs, train_feat) = featurize_all(&ctx.target_reviews, &ctx, ReviewSide::Target)?;
    let (test_vecs, test_feat) = featurize_all(&source_reviews, &ctx, ReviewSide::Source)?;
    let train_x: Vec<Vec<f64>> = train_vecs.into_iter().map(|v| v.values).collect();
    let train_y: Vec<u8> = ctx.target_reviews.iter().map(|r| r.label).collect();
    let gold: Vec<u8> = source_reviews.iter().map(|r| r.label).collect();

    let predicted: Vec<u8> = match cfg.reviews.classifier {
        ReviewClassifier::Logistic => {
            let model = train_logistic(
                &train_x,
                &train_y,
                &STAR_LABELS,
                &cfg.reviews.logistic_config(),
            )?;
            test_vecs
                .iter()
                .map(|v| model.predict(&v.values))
                .collect::<Result<_>>()?
        }
        ReviewClassifier::Majority => {
            let majority = majority_label(&train_y)
                .ok_or_else(|| Error::Pipeline("no target training reviews".into()))?;
            vec![majority; test_vecs.len()]
        }
    };
    let accuracy = multiclass_accuracy(&predicted, &gold)?;

    // rows: gold star, columns: predicted star
    let mut confusion = vec![vec![0usize; STAR_LABELS.len()]; STAR_LABELS.len()];
    for (p, g) in predicted.iter().zip(&gold) {
        confusion[usize::from(*g - 1)][usize::from(*p - 1)] += 1;
    }
    let predictions = source_reviews
        .iter()
        .zip(predicted.iter())
        .enumerate()
        .map(|(i, (r, p))| PredictionRow {
            run: 0,
            token: format!("review{i}"),
            gold: r.label.to_string(),
            predicted: p.to_string(),
        })
        .collect();
    let details = json!({
        "translation_matrix": ctx.translation_info,
        "classifier": cfg.reviews.classifier,
        "feature_dims": cfg.reviews.feature_dims,
        "max_length": ctx.max_length,
        "regressor_words": ctx.regressor_words,
        "train_reviews": ctx.target_reviews.len(),
        "test_reviews": source_reviews.len(),
        "train_featurization": train_feat,
        "test_featurization": test_feat,
        "confusion_matrix": confusion,
    });
    let metrics = vec![MetricReport::new("accuracy", vec![accuracy], vec![])];
    Ok(Outcome {
        report: report("eval-reviews", cfg, inputs, metrics, details),
        predictions,
    })
}

/// Most frequent label; ties go to the smallest.
fn majority_label(labels: &[u8]) -> Option<u8> {
    let mut counts = [0usize; 256];
    for &l in labels {
        counts[usize::from(l)] += 1;
    }
    let (best, &count) = counts
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))?;
    (count > 0).then_some(best as u8)
}
