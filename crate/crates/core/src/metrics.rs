//! Evaluation primitives and the Monte Carlo cross-validation splitter.
//!
//! Degenerate cases (zero denominators, constant gold values) return 0 and a
//! flag instead of NaN so reports stay machine-readable.

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng;

/// Train/test index sets for every Monte Carlo run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitPlan {
    pub run_count: usize,
    pub train_fraction: f64,
    pub seed: u64,
    pub runs: Vec<Split>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

fn train_size(n: usize, train_fraction: f64) -> Result<usize> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::Metrics(format!(
            "train fraction {train_fraction} must lie strictly between 0 and 1"
        )));
    }
    let train = (train_fraction * n as f64).round() as usize;
    if train == 0 || train >= n {
        return Err(Error::Metrics(format!(
            "a {train_fraction} split of {n} items leaves an empty side"
        )));
    }
    Ok(train)
}

/// Independent shuffle split per run; run `r` draws from stream `r` of `seed`.
pub fn make_splits(
    n: usize,
    run_count: usize,
    train_fraction: f64,
    seed: u64,
) -> Result<SplitPlan> {
    if n < 2 {
        return Err(Error::Metrics(format!(
            "need at least 2 items to split, got {n}"
        )));
    }
    if run_count == 0 {
        return Err(Error::Metrics("run count must be positive".into()));
    }
    let k = train_size(n, train_fraction)?;
    let runs = (0..run_count)
        .map(|r| {
            let mut rng = rng::derived(seed, r as u64);
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let test = order.split_off(k);
            Split { train: order, test }
        })
        .collect();
    Ok(SplitPlan {
        run_count,
        train_fraction,
        seed,
        runs,
    })
}

/// Like [`make_splits`], but each class in `classes` is split separately so
/// every train and test side keeps the class proportions.
pub fn make_stratified_splits<C: PartialEq + Copy>(
    classes: &[C],
    run_count: usize,
    train_fraction: f64,
    seed: u64,
) -> Result<SplitPlan> {
    if run_count == 0 {
        return Err(Error::Metrics("run count must be positive".into()));
    }
    let mut distinct: Vec<C> = Vec::new();
    for c in classes {
        if !distinct.contains(c) {
            distinct.push(*c);
        }
    }
    let groups: Vec<Vec<usize>> = distinct
        .iter()
        .map(|d| (0..classes.len()).filter(|&i| classes[i] == *d).collect())
        .collect();
    let sizes = groups
        .iter()
        .map(|g| {
            if g.len() < 2 {
                Err(Error::Metrics(
                    "each class needs at least 2 items to stratify".into(),
                ))
            } else {
                train_size(g.len(), train_fraction)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let runs = (0..run_count)
        .map(|r| {
            let mut rng = rng::derived(seed, r as u64);
            let mut split = Split {
                train: Vec::new(),
                test: Vec::new(),
            };
            for (group, &k) in groups.iter().zip(&sizes) {
                let mut g = group.clone();
                g.shuffle(&mut rng);
                split.train.extend_from_slice(&g[..k]);
                split.test.extend_from_slice(&g[k..]);
            }
            split.train.shuffle(&mut rng);
            split.test.shuffle(&mut rng);
            split
        })
        .collect();
    Ok(SplitPlan {
        run_count,
        train_fraction,
        seed,
        runs,
    })
}

/// Fraction of queries whose gold token is among the first `k` candidates.
pub fn precision_at_k<S: AsRef<str>>(predictions: &[Vec<S>], gold: &[S], k: usize) -> Result<f64> {
    if predictions.len() != gold.len() {
        return Err(Error::Metrics(format!(
            "{} candidate lists but {} gold tokens",
            predictions.len(),
            gold.len()
        )));
    }
    if predictions.is_empty() {
        return Err(Error::Metrics("no queries".into()));
    }
    if k == 0 {
        return Err(Error::Metrics("k must be positive".into()));
    }
    let mut hits = 0usize;
    for (i, (cands, g)) in predictions.iter().zip(gold).enumerate() {
        if cands.len() < k {
            return Err(Error::Metrics(format!(
                "query {i} has {} candidates, fewer than k = {k}",
                cands.len()
            )));
        }
        if cands[..k].iter().any(|c| c.as_ref() == g.as_ref()) {
            hits += 1;
        }
    }
    Ok(hits as f64 / predictions.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    pub flags: Vec<String>,
}

/// Precision, recall and F-measure for the `+1` class.
pub fn binary_prf(predicted: &[i8], gold: &[i8]) -> Result<Prf> {
    if predicted.len() != gold.len() {
        return Err(Error::Metrics(format!(
            "{} predictions but {} gold labels",
            predicted.len(),
            gold.len()
        )));
    }
    if predicted.is_empty() {
        return Err(Error::Metrics("no predictions".into()));
    }
    let (mut tp, mut fp, mut fneg) = (0usize, 0usize, 0usize);
    for (&p, &g) in predicted.iter().zip(gold) {
        match (p > 0, g > 0) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fneg += 1,
            (false, false) => {}
        }
    }
    let mut flags = Vec::new();
    let ratio = |num: usize, den: usize, flag: &str, flags: &mut Vec<String>| {
        if den == 0 {
            flags.push(flag.to_string());
            0.0
        } else {
            num as f64 / den as f64
        }
    };
    let precision = ratio(tp, tp + fp, "precision_undefined", &mut flags);
    let recall = ratio(tp, tp + fneg, "recall_undefined", &mut flags);
    let f_measure = if precision + recall == 0.0 {
        flags.push("f_measure_undefined".into());
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Ok(Prf {
        precision,
        recall,
        f_measure,
        flags,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionScores {
    pub r_squared: f64,
    pub mse: f64,
    pub flags: Vec<String>,
}

/// `r^2 = 1 - SS_res / SS_tot` about the gold mean, and mean squared error.
pub fn regression_scores(predicted: &[f64], gold: &[f64]) -> Result<RegressionScores> {
    if predicted.len() != gold.len() {
        return Err(Error::Metrics(format!(
            "{} predictions but {} gold values",
            predicted.len(),
            gold.len()
        )));
    }
    if gold.len() < 2 {
        return Err(Error::Metrics(
            "regression scores need at least 2 items".into(),
        ));
    }
    let n = gold.len() as f64;
    let mean = gold.iter().sum::<f64>() / n;
    let ss_res: f64 = predicted
        .iter()
        .zip(gold)
        .map(|(p, g)| (p - g).powi(2))
        .sum();
    let ss_tot: f64 = gold.iter().map(|g| (g - mean).powi(2)).sum();
    let mse = ss_res / n;
    let mut flags = Vec::new();
    let r_squared = if ss_tot == 0.0 {
        flags.push("r_squared_undefined".into());
        0.0
    } else {
        1.0 - ss_res / ss_tot
    };
    Ok(RegressionScores {
        r_squared,
        mse,
        flags,
    })
}

pub fn multiclass_accuracy<L: PartialEq>(predicted: &[L], gold: &[L]) -> Result<f64> {
    if predicted.len() != gold.len() {
        return Err(Error::Metrics(format!(
            "{} predictions but {} gold labels",
            predicted.len(),
            gold.len()
        )));
    }
    if predicted.is_empty() {
        return Err(Error::Metrics("no predictions".into()));
    }
    let hits = predicted.iter().zip(gold).filter(|(p, g)| p == g).count();
    Ok(hits as f64 / predicted.len() as f64)
}

/// Per-run values of one metric with their mean and population std.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub name: String,
    pub runs: Vec<f64>,
    pub mean: f64,
    pub std: f64,
    pub flags: Vec<String>,
}

impl MetricReport {
    pub fn new(name: impl Into<String>, runs: Vec<f64>, flags: Vec<String>) -> Self {
        let (mean, std) = mean_std(&runs);
        MetricReport {
            name: name.into(),
            runs,
            mean,
            std,
            flags,
        }
    }
}

pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn ranked(gold: &str, rank: usize) -> Vec<String> {
        (1..=10)
            .map(|r| {
                if r == rank {
                    gold.to_string()
                } else {
                    format!("other{r}")
                }
            })
            .collect()
    }

    #[test]
    fn split_single_run() {
        let plan = make_splits(10, 1, 0.9, 3).unwrap();
        let s = &plan.runs[0];
        assert_eq!((s.train.len(), s.test.len()), (9, 1));
        let mut all: Vec<usize> = s.train.iter().chain(&s.test).copied().collect();
        all.sort();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
        assert_eq!(plan, make_splits(10, 1, 0.9, 3).unwrap());
    }

    #[test]
    fn split_test_singletons_vary() {
        let plan = make_splits(10, 10, 0.9, 42).unwrap();
        let tests: HashSet<usize> = plan.runs.iter().map(|s| s.test[0]).collect();
        assert!(tests.len() > 1);
    }

    #[test]
    fn split_errors() {
        assert!(make_splits(1, 1, 0.5, 0).is_err());
        assert!(make_splits(10, 1, 0.0, 0).is_err());
        assert!(make_splits(10, 1, 1.0, 0).is_err());
        assert!(make_splits(3, 1, 0.99, 0).is_err());
        assert!(make_splits(10, 0, 0.5, 0).is_err());
    }

    #[test]
    fn split_test_frequency_approaches_complement() {
        let n = 20;
        let runs = 2000;
        let plan = make_splits(n, runs, 0.75, 5).unwrap();
        let mut counts = vec![0usize; n];
        for s in &plan.runs {
            for &i in &s.test {
                counts[i] += 1;
            }
        }
        for c in counts {
            let freq = c as f64 / runs as f64;
            assert!((freq - 0.25).abs() < 0.05, "freq {freq}");
        }
    }

    #[test]
    fn stratified_keeps_both_classes() {
        let labels: Vec<i8> = (0..40).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
        let plan = make_stratified_splits(&labels, 10, 0.8, 1).unwrap();
        for s in &plan.runs {
            let pos_test = s.test.iter().filter(|&&i| labels[i] == 1).count();
            assert_eq!((s.train.len(), s.test.len(), pos_test), (32, 8, 4));
        }
    }

    #[test]
    fn precision_at_k_cases() {
        let always_first: Vec<Vec<String>> = (0..3).map(|_| ranked("g", 1)).collect();
        let gold = vec!["g".to_string(); 3];
        assert_eq!(precision_at_k(&always_first, &gold, 1).unwrap(), 1.0);
        assert_eq!(precision_at_k(&always_first, &gold, 5).unwrap(), 1.0);

        let third: Vec<Vec<String>> = (0..3).map(|_| ranked("g", 3)).collect();
        assert_eq!(precision_at_k(&third, &gold, 1).unwrap(), 0.0);
        assert_eq!(precision_at_k(&third, &gold, 5).unwrap(), 1.0);

        // gold ranks 1, 3, 7, 2: one hit at k=1, three within k=5
        let mixed: Vec<Vec<String>> = [1, 3, 7, 2].iter().map(|&r| ranked("g", r)).collect();
        let gold4 = vec!["g".to_string(); 4];
        assert_eq!(precision_at_k(&mixed, &gold4, 1).unwrap(), 0.25);
        assert_eq!(precision_at_k(&mixed, &gold4, 5).unwrap(), 0.75);

        assert!(precision_at_k(&mixed, &gold, 1).is_err());
        assert!(precision_at_k(&mixed, &gold4, 11).is_err());
    }

    #[test]
    fn prf_cases() {
        let gold = [1, -1, 1, -1];
        let p = binary_prf(&gold, &gold).unwrap();
        assert_eq!((p.precision, p.recall, p.f_measure), (1.0, 1.0, 1.0));

        // TP = 2, FP = 2, FN = 0
        let p = binary_prf(&[1, 1, 1, 1], &gold).unwrap();
        assert_eq!(p.precision, 0.5);
        assert_eq!(p.recall, 1.0);
        assert_eq!(p.f_measure, 2.0 / 3.0);
        assert!(p.flags.is_empty());

        let p = binary_prf(&[-1, -1, -1, -1], &gold).unwrap();
        assert_eq!((p.recall, p.f_measure), (0.0, 0.0));
        assert!(p.flags.contains(&"precision_undefined".to_string()));
        assert!(p.flags.contains(&"f_measure_undefined".to_string()));
        assert!(binary_prf(&[1], &gold).is_err());
    }

    #[test]
    fn regression_cases() {
        let gold = [1.0, 2.0, 3.0];
        let s = regression_scores(&gold, &gold).unwrap();
        assert_eq!((s.r_squared, s.mse), (1.0, 0.0));
        let s = regression_scores(&[2.0, 2.0, 2.0], &gold).unwrap();
        assert_eq!(s.r_squared, 0.0);
        // SS_res = 1, SS_tot = 2
        let s = regression_scores(&[1.0, 2.0, 4.0], &gold).unwrap();
        assert_eq!(s.mse, 1.0 / 3.0);
        assert_eq!(s.r_squared, 0.5);
        let s = regression_scores(&[1.0, 2.0], &[3.0, 3.0]).unwrap();
        assert_eq!(s.flags, ["r_squared_undefined"]);
        assert_eq!(s.mse, 2.5);
        assert!(regression_scores(&[1.0], &[1.0]).is_err());
    }

    #[test]
    fn accuracy_cases() {
        assert_eq!(multiclass_accuracy(&[1, 2, 3], &[1, 2, 3]).unwrap(), 1.0);
        assert_eq!(multiclass_accuracy(&[2, 3, 1], &[1, 2, 3]).unwrap(), 0.0);
        assert_eq!(
            multiclass_accuracy(&[1, 2, 3, 5], &[1, 2, 3, 4]).unwrap(),
            0.75
        );
        assert!(multiclass_accuracy::<u8>(&[], &[]).is_err());
    }

    #[test]
    fn report_statistics() {
        let r = MetricReport::new("p@1", vec![1.0, 0.0, 0.5, 0.5], vec![]);
        assert_eq!(r.mean, 0.5);
        assert!((r.std - (0.125f64).sqrt()).abs() < 1e-15);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(
            json,
            r#"{"name":"p@1","runs":[1.0,0.0,0.5,0.5],"mean":0.5,"std":0.3535533905932738,"flags":[]}"#
        );
    }

    proptest! {
        #[test]
        fn precision_monotone_in_k(ranks in prop::collection::vec(1usize..=10, 1..20)) {
            let preds: Vec<Vec<String>> = ranks.iter().map(|&r| ranked("g", r)).collect();
            let gold = vec!["g".to_string(); ranks.len()];
            let mut last = 0.0;
            for k in 1..=10 {
                let p = precision_at_k(&preds, &gold, k).unwrap();
                prop_assert!(p >= last);
                last = p;
            }
        }

        #[test]
        fn prf_bounds(pairs in prop::collection::vec((any::<bool>(), any::<bool>()), 1..40)) {
            let p: Vec<i8> = pairs.iter().map(|x| if x.0 { 1 } else { -1 }).collect();
            let g: Vec<i8> = pairs.iter().map(|x| if x.1 { 1 } else { -1 }).collect();
            let s = binary_prf(&p, &g).unwrap();
            for v in [s.precision, s.recall, s.f_measure] {
                prop_assert!((0.0..=1.0).contains(&v));
            }
            prop_assert!(s.f_measure <= s.precision.max(s.recall) + 1e-15);
            let mut rev_p = p.clone();
            let mut rev_g = g.clone();
            rev_p.reverse();
            rev_g.reverse();
            prop_assert_eq!(binary_prf(&rev_p, &rev_g).unwrap(), s);
        }

        #[test]
        fn regression_bounds(pairs in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 2..40)) {
            let p: Vec<f64> = pairs.iter().map(|x| x.0).collect();
            let g: Vec<f64> = pairs.iter().map(|x| x.1).collect();
            let s = regression_scores(&p, &g).unwrap();
            prop_assert!(s.r_squared <= 1.0);
            prop_assert!(s.mse >= 0.0);
            let s = regression_scores(&g, &g).unwrap();
            if s.flags.is_empty() {
                prop_assert_eq!((s.r_squared, s.mse), (1.0, 0.0));
            }
        }

        #[test]
        fn report_mean_std_consistent(runs in prop::collection::vec(-1e3f64..1e3, 1..20)) {
            let r = MetricReport::new("m", runs.clone(), vec![]);
            let (m, s) = mean_std(&r.runs);
            prop_assert!((m - r.mean).abs() <= 1e-12);
            prop_assert!((s - r.std).abs() <= 1e-12);
        }
    }
}
