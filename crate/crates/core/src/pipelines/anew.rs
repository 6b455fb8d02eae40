use serde_json::json;

use crate::error::{Error, Result};
use crate::ingest::{self, AffectDimension, AnewRating, RATING_MAX, RATING_MIN};
use crate::metrics::{make_splits, regression_scores, MetricReport};
use crate::models::train_bayesian_ridge;
use crate::rng;

use super::config::AnewPredictor;
use super::{
    collect_flags, join_translations, leakage_guard, load_spaces, map_runs, report,
    resolve_translation_matrix, shared_count, ExperimentConfig, Inputs, LeakageCheck, Outcome,
    PredictionRow, STREAM_SPLITS,
};

struct DimScores {
    r2: f64,
    mse: f64,
    flags: Vec<String>,
}

struct RunResult {
    dims: Vec<DimScores>,
    leakage: LeakageCheck,
    rows: Vec<PredictionRow>,
}

/// Per-dimension affect regression transfer: one regressor per ANEW scale,
/// trained on target-language vectors, scored on mapped source vectors of
/// held-out words. Predictions are clamped into the rating range.
pub fn run_anew_eval(cfg: &ExperimentConfig) -> Result<Outcome> {
    let mut inputs = Inputs::new(cfg);
    let (source, target) = load_spaces(cfg, &mut inputs)?;
    let (w, w_info) = resolve_translation_matrix(cfg, &mut inputs, &source, &target)?;

    let ratings = ingest::load_anew(inputs.path("anew", &cfg.paths.anew)?)?;
    let lex_path = inputs.path("anew_lexicon", &cfg.paths.anew_lexicon)?;
    let lexicon = ingest::load_lexicon(lex_path, &cfg.source_language, &cfg.target_language)?;
    let keyed: Vec<(String, AnewRating)> = ratings
        .iter()
        .map(|r| (r.token.clone(), r.clone()))
        .collect();
    let joined = join_translations(&keyed, &lexicon, &source, &target);
    let items = &joined.items;
    if items.len() < 2 {
        return Err(Error::Pipeline(format!(
            "only {} ANEW words resolvable in both spaces",
            items.len()
        )));
    }

    let plan = make_splits(
        items.len(),
        cfg.anew.run_count,
        cfg.anew.train_fraction,
        rng::derive_seed(cfg.seed, STREAM_SPLITS),
    )?;
    let ridge = cfg.anew.ridge_config();

    let results = map_runs(cfg.parallel, plan.run_count, |run| {
        let split = &plan.runs[run];
        if split.train.len() < 2 {
            return Err(Error::Pipeline("fewer than 2 training words".into()));
        }
        let train_x: Vec<Vec<f64>> = split
            .train
            .iter()
            .map(|&i| target.lookup(&items[i].1).expect("filtered").to_vec())
            .collect();
        let test_x: Vec<Vec<f64>> = split
            .test
            .iter()
            .map(|&i| w.map_vector(source.lookup(&items[i].0).expect("filtered")))
            .collect::<Result<_>>()?;

        let mut dims = Vec::with_capacity(3);
        let mut rows = Vec::new();
        for dim in AffectDimension::ALL {
            let train_y: Vec<f64> = split.train.iter().map(|&i| items[i].2.get(dim)).collect();
            let gold: Vec<f64> = split.test.iter().map(|&i| items[i].2.get(dim)).collect();
            let raw: Vec<f64> = match cfg.anew.predictor {
                AnewPredictor::BayesianRidge => {
                    let model = train_bayesian_ridge(&train_x, &train_y, &ridge)?;
                    test_x
                        .iter()
                        .map(|x| model.predict(x))
                        .collect::<Result<_>>()?
                }
                AnewPredictor::TrainMean => {
                    let mean = train_y.iter().sum::<f64>() / train_y.len() as f64;
                    vec![mean; test_x.len()]
                }
            };
            let predicted: Vec<f64> = raw
                .iter()
                .map(|p| p.clamp(RATING_MIN, RATING_MAX))
                .collect();
            for (k, &i) in split.test.iter().enumerate() {
                rows.push(PredictionRow {
                    run,
                    token: format!("{}/{}", items[i].0, dim.name()),
                    gold: gold[k].to_string(),
                    predicted: predicted[k].to_string(),
                });
            }
            let scores = regression_scores(&predicted, &gold)?;
            dims.push(DimScores {
                r2: scores.r_squared,
                mse: scores.mse,
                flags: scores.flags,
            });
        }
        let leakage = LeakageCheck {
            run,
            shared_tokens: shared_count(
                split.train.iter().map(|&i| items[i].1.as_str()),
                split.test.iter().map(|&i| items[i].1.as_str()),
            ),
        };
        Ok(RunResult {
            dims,
            leakage,
            rows,
        })
    })?;

    let leakage: Vec<LeakageCheck> = results.iter().map(|r| r.leakage.clone()).collect();
    leakage_guard(&leakage)?;
    let mut metrics = Vec::new();
    for (d, dim) in AffectDimension::ALL.iter().enumerate() {
        let flags = collect_flags(
            &results
                .iter()
                .map(|r| r.dims[d].flags.clone())
                .collect::<Vec<_>>(),
        );
        metrics.push(MetricReport::new(
            format!("{}.r2", dim.name()),
            results.iter().map(|r| r.dims[d].r2).collect(),
            flags.clone(),
        ));
        metrics.push(MetricReport::new(
            format!("{}.mse", dim.name()),
            results.iter().map(|r| r.dims[d].mse).collect(),
            flags,
        ));
    }
    let details = json!({
        "translation_matrix": w_info,
        "predictor": cfg.anew.predictor,
        "ratings": ratings.len(),
        "untranslated": joined.untranslated,
        "duplicates": joined.duplicates,
        "out_of_vocabulary": joined.discarded.len(),
        "items": items.len(),
        "train_size": plan.runs[0].train.len(),
        "test_size": plan.runs[0].test.len(),
        "leakage_checks": leakage,
    });
    let predictions = results.into_iter().flat_map(|r| r.rows).collect();
    Ok(Outcome {
        report: report("eval-anew", cfg, inputs, metrics, details),
        predictions,
    })
}
