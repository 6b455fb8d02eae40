use rand::seq::SliceRandom;
use serde_json::json;

use crate::error::Result;
use crate::ingest::{self, balance_by};
use crate::metrics::{binary_prf, make_stratified_splits, MetricReport};
use crate::models::{train_binary, SgdConfig};
use crate::rng;

use super::{
    collect_flags, join_translations, leakage_guard, load_spaces, map_runs, report,
    resolve_translation_matrix, shared_count, ExperimentConfig, Inputs, LeakageCheck, Outcome,
    PredictionRow, STREAM_BALANCE, STREAM_LABEL_SHUFFLE, STREAM_SGD, STREAM_SPLITS,
};

struct RunResult {
    precision: f64,
    recall: f64,
    f_measure: f64,
    flags: Vec<String>,
    leakage: LeakageCheck,
    rows: Vec<PredictionRow>,
}

/// Polarity transfer: train the hinge-loss classifier on target-language
/// vectors, test it on mapped source-language vectors of held-out words.
pub fn run_binary_sentiment_eval(cfg: &ExperimentConfig) -> Result<Outcome> {
    let mut inputs = Inputs::new(cfg);
    let (source, target) = load_spaces(cfg, &mut inputs)?;
    let (w, w_info) = resolve_translation_matrix(cfg, &mut inputs, &source, &target)?;

    let pos = inputs.path("polarity_positive", &cfg.paths.polarity_positive)?;
    let neg = inputs.path("polarity_negative", &cfg.paths.polarity_negative)?;
    let polarity = ingest::load_polarity_list(pos, neg)?;
    let lex_path = inputs.path("polarity_lexicon", &cfg.paths.polarity_lexicon)?;
    let lexicon = ingest::load_lexicon(lex_path, &cfg.source_language, &cfg.target_language)?;

    let labeled: Vec<(String, i8)> = polarity
        .iter()
        .map(|e| (e.token.clone(), e.label()))
        .collect();
    let joined = join_translations(&labeled, &lexicon, &source, &target);
    let mut items = balance_by(
        &joined.items,
        rng::derive_seed(cfg.seed, STREAM_BALANCE),
        |(_, _, label)| *label > 0,
    )?;
    if cfg.binary.shuffle_labels {
        let mut labels: Vec<i8> = items.iter().map(|i| i.2).collect();
        labels.shuffle(&mut rng::derived(cfg.seed, STREAM_LABEL_SHUFFLE));
        for (item, label) in items.iter_mut().zip(labels) {
            item.2 = label;
        }
    }

    let classes: Vec<i8> = items.iter().map(|i| i.2).collect();
    let plan = make_stratified_splits(
        &classes,
        cfg.binary.run_count,
        cfg.binary.train_fraction,
        rng::derive_seed(cfg.seed, STREAM_SPLITS),
    )?;

    let sgd_seed = rng::derive_seed(cfg.seed, STREAM_SGD);
    let results = map_runs(cfg.parallel, plan.run_count, |run| {
        let split = &plan.runs[run];
        let train_x: Vec<Vec<f64>> = split
            .train
            .iter()
            .map(|&i| target.lookup(&items[i].1).expect("filtered").to_vec())
            .collect();
        let train_y: Vec<i8> = split.train.iter().map(|&i| items[i].2).collect();
        let sgd = SgdConfig {
            l2: cfg.binary.l2,
            epochs: cfg.binary.epochs,
            eta0: cfg.binary.eta0,
            seed: rng::derive_seed(sgd_seed, run as u64),
        };
        let model = train_binary(&train_x, &train_y, &sgd)?;

        let mut predicted = Vec::with_capacity(split.test.len());
        let mut gold = Vec::with_capacity(split.test.len());
        let mut rows = Vec::with_capacity(split.test.len());
        for &i in &split.test {
            let (s, _, label) = &items[i];
            let mapped = w.map_vector(source.lookup(s).expect("filtered"))?;
            let p = model.predict(&mapped)?;
            rows.push(PredictionRow {
                run,
                token: s.clone(),
                gold: label.to_string(),
                predicted: p.to_string(),
            });
            predicted.push(p);
            gold.push(*label);
        }
        let prf = binary_prf(&predicted, &gold)?;
        let leakage = LeakageCheck {
            run,
            shared_tokens: shared_count(
                split.train.iter().map(|&i| items[i].1.as_str()),
                split.test.iter().map(|&i| items[i].1.as_str()),
            ),
        };
        Ok(RunResult {
            precision: prf.precision,
            recall: prf.recall,
            f_measure: prf.f_measure,
            flags: prf.flags,
            leakage,
            rows,
        })
    })?;

    let leakage: Vec<LeakageCheck> = results.iter().map(|r| r.leakage.clone()).collect();
    leakage_guard(&leakage)?;
    let flags = collect_flags(&results.iter().map(|r| r.flags.clone()).collect::<Vec<_>>());
    let metrics = vec![
        MetricReport::new(
            "precision",
            results.iter().map(|r| r.precision).collect(),
            flags.clone(),
        ),
        MetricReport::new(
            "recall",
            results.iter().map(|r| r.recall).collect(),
            flags.clone(),
        ),
        MetricReport::new(
            "f_measure",
            results.iter().map(|r| r.f_measure).collect(),
            flags,
        ),
    ];
    let details = json!({
        "translation_matrix": w_info,
        "polarity_words": polarity.len(),
        "untranslated": joined.untranslated,
        "duplicates": joined.duplicates,
        "out_of_vocabulary": joined.discarded.len(),
        "balanced_items": items.len(),
        "shuffled_labels": cfg.binary.shuffle_labels,
        "train_size": plan.runs[0].train.len(),
        "test_size": plan.runs[0].test.len(),
        "leakage_checks": leakage,
    });
    let predictions = results.into_iter().flat_map(|r| r.rows).collect();
    Ok(Outcome {
        report: report("eval-binary", cfg, inputs, metrics, details),
        predictions,
    })
}
