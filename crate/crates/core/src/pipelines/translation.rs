use serde_json::json;

use crate::alignment::{build_aligned_pairs, fit_translation_matrix, TranslationMatrix};
use crate::error::{Error, Result};
use crate::metrics::{make_splits, precision_at_k, MetricReport};
use crate::rng;

use super::{
    alignment_lexicon, leakage_guard, load_spaces, map_runs, report, shared_count,
    ExperimentConfig, ExperimentReport, Inputs, LeakageCheck, Outcome, PredictionRow,
    STREAM_SPLITS,
};

const TOP_K: usize = 5;

struct RunResult {
    p1: f64,
    p5: f64,
    residual: f64,
    leakage: LeakageCheck,
    rows: Vec<PredictionRow>,
}

/// Monte Carlo evaluation of translation accuracy: per run, fit the matrix on
/// the train pairs and score P@1 / P@5 of cosine retrieval on the test pairs.
pub fn run_translation_eval(cfg: &ExperimentConfig) -> Result<Outcome> {
    let mut inputs = Inputs::new(cfg);
    let (source, target) = load_spaces(cfg, &mut inputs)?;
    if target.len() < TOP_K {
        return Err(Error::Pipeline(format!(
            "target vocabulary has {} words; P@{TOP_K} needs at least {TOP_K}",
            target.len()
        )));
    }
    let (lex, summary) = alignment_lexicon(cfg, &mut inputs, &source, &target)?;
    let plan = make_splits(
        lex.len(),
        cfg.alignment.run_count,
        cfg.alignment.train_fraction,
        rng::derive_seed(cfg.seed, STREAM_SPLITS),
    )?;

    let results = map_runs(cfg.parallel, plan.run_count, |run| {
        let split = &plan.runs[run];
        let train = lex.select(&split.train);
        let test = lex.select(&split.test);
        let fit = fit_translation_matrix(&build_aligned_pairs(&train, &source, &target)?)?;
        let mut candidates = Vec::with_capacity(test.len());
        let mut gold = Vec::with_capacity(test.len());
        let mut rows = Vec::with_capacity(test.len());
        for (s, t) in test.pairs() {
            let hits = fit.matrix.translate_token(s, &source, &target, TOP_K)?;
            let tokens: Vec<String> = hits.into_iter().map(|n| n.token).collect();
            rows.push(PredictionRow {
                run,
                token: s.clone(),
                gold: t.clone(),
                predicted: tokens.join("|"),
            });
            candidates.push(tokens);
            gold.push(t.clone());
        }
        let leakage = LeakageCheck {
            run,
            shared_tokens: shared_count(
                train.pairs().iter().map(|p| p.0.as_str()),
                test.pairs().iter().map(|p| p.0.as_str()),
            ),
        };
        Ok(RunResult {
            p1: precision_at_k(&candidates, &gold, 1)?,
            p5: precision_at_k(&candidates, &gold, TOP_K)?,
            residual: fit.residual,
            leakage,
            rows,
        })
    })?;

    let leakage: Vec<LeakageCheck> = results.iter().map(|r| r.leakage.clone()).collect();
    leakage_guard(&leakage)?;
    let metrics = vec![
        MetricReport::new("p@1", results.iter().map(|r| r.p1).collect(), vec![]),
        MetricReport::new("p@5", results.iter().map(|r| r.p5).collect(), vec![]),
    ];
    let details = json!({
        "lexicon": {
            "loaded": summary.loaded,
            "kept": summary.kept,
            "used": summary.used,
            "discarded": summary.discarded,
        },
        "train_size": plan.runs[0].train.len(),
        "test_size": plan.runs[0].test.len(),
        "residuals": results.iter().map(|r| r.residual).collect::<Vec<_>>(),
        "leakage_checks": leakage,
    });
    let predictions = results.into_iter().flat_map(|r| r.rows).collect();
    Ok(Outcome {
        report: report("eval-align", cfg, inputs, metrics, details),
        predictions,
    })
}

/// Fits one translation matrix on the whole alignment lexicon.
pub fn fit_alignment(cfg: &ExperimentConfig) -> Result<(TranslationMatrix, ExperimentReport)> {
    let mut inputs = Inputs::new(cfg);
    let (source, target) = load_spaces(cfg, &mut inputs)?;
    let (lex, summary) = alignment_lexicon(cfg, &mut inputs, &source, &target)?;
    let fit = fit_translation_matrix(&build_aligned_pairs(&lex, &source, &target)?)?;
    let details = json!({
        "lexicon": {
            "loaded": summary.loaded,
            "kept": summary.kept,
            "used": summary.used,
            "discarded": summary.discarded,
        },
        "source_dim": fit.matrix.source_dim(),
        "target_dim": fit.matrix.target_dim(),
        "residual": fit.residual,
    });
    let metrics = vec![MetricReport::new("residual", vec![fit.residual], vec![])];
    Ok((
        fit.matrix,
        report("fit-align", cfg, inputs, metrics, details),
    ))
}
