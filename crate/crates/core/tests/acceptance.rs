//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::Rng as _;
use rand_distr::StandardNormal;
use transent::alignment::fit_translation_matrix;
use transent::fixtures::{write_fixtures, FixtureParams};
use transent::metrics::{binary_prf, precision_at_k, regression_scores};
use transent::models::{
    hinge_objective, hinge_subgradient, softmax_objective, train_bayesian_ridge, RidgeConfig,
    SoftmaxParams,
};
use transent::pipelines::{
    run_anew_eval, run_binary_sentiment_eval, run_review_eval, run_translation_eval,
    ExperimentConfig, ExperimentReport,
};
use transent::{rng, AlignedPairs};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn gaussian(rows: usize, cols: usize, seed: u64) -> DMatrix<f64> {
    let mut r = rng::seeded(seed);
    DMatrix::from_fn(rows, cols, |_, _| r.sample(StandardNormal))
}

fn fixture_config(dir: &Path, params: &FixtureParams, overrides: &[&str]) -> ExperimentConfig {
    write_fixtures(dir, params).expect("fixtures");
    let overrides: Vec<String> = overrides.iter().map(|s| s.to_string()).collect();
    ExperimentConfig::load(dir.join("config.toml"), &overrides).expect("config")
}

fn mean(report: &ExperimentReport, name: &str) -> f64 {
    report.metric(name).expect("metric present").mean
}

fn exact_recovery() -> Check {
    let start = Instant::now();
    let x = gaussian(50, 5, 11);
    let w0 = gaussian(5, 5, 12);
    let z = &x * w0.transpose();
    let pairs = AlignedPairs {
        source: x.clone(),
        target: z.clone(),
        tokens: (0..50)
            .map(|i| (format!("s{i}"), format!("t{i}")))
            .collect(),
        source_language: "xx".into(),
        target_language: "en".into(),
    };
    let fit = fit_translation_matrix(&pairs).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();

    // normal equations: (X^T X) W^T = X^T Z
    let oracle_t = (x.transpose() * &x)
        .lu()
        .solve(&(x.transpose() * &z))
        .ok_or("normal equations singular")?;
    let oracle = oracle_t.transpose();
    let vs_oracle = (&fit.matrix.weights - &oracle).abs().max();
    let vs_truth = (&fit.matrix.weights - &w0).abs().max();
    ensure(
        vs_oracle <= 1e-8,
        format!("max |W - W_oracle| = {vs_oracle:e}"),
    )?;
    ensure(vs_truth <= 1e-8, format!("max |W - W0| = {vs_truth:e}"))?;
    ensure(
        elapsed < Duration::from_secs(1),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!(
        "max |W - W_oracle| = {vs_oracle:.1e}, {elapsed:.2?}"
    ))
}

fn rotation_retrieval() -> Check {
    let start = Instant::now();
    let clean_dir = tempfile::tempdir().unwrap();
    let noisy_dir = tempfile::tempdir().unwrap();
    let base = FixtureParams {
        words: 200,
        dim: 10,
        ..FixtureParams::default()
    };
    let clean = fixture_config(clean_dir.path(), &base, &["alignment.run_count=10"]);
    let noisy = fixture_config(
        noisy_dir.path(),
        &FixtureParams { noise: 0.5, ..base },
        &["alignment.run_count=10"],
    );
    let clean = run_translation_eval(&clean)
        .map_err(|e| e.to_string())?
        .report;
    let noisy = run_translation_eval(&noisy)
        .map_err(|e| e.to_string())?
        .report;
    let elapsed = start.elapsed();
    for name in ["p@1", "p@5"] {
        let m = clean.metric(name).unwrap();
        ensure(m.runs.len() == 10, format!("{} runs", m.runs.len()))?;
        ensure(
            m.runs.iter().all(|&p| p == 1.0),
            format!("sigma=0 {name} runs {:?}", m.runs),
        )?;
    }
    let (p0, p5) = (mean(&clean, "p@1"), mean(&noisy, "p@1"));
    ensure(p5 < p0, format!("sigma=0.5 P@1 {p5} not below {p0}"))?;
    ensure(
        elapsed < Duration::from_secs(10),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!(
        "P@1 = P@5 = 1.0; sigma=0.5 P@1 = {p5:.3}; {elapsed:.2?}"
    ))
}

fn ridge_oracle() -> Check {
    let mut worst = 0.0f64;
    for seed in 0..20u64 {
        let mut r = rng::seeded(1000 + seed);
        let n = r.random_range(5..40);
        let d = r.random_range(1..8);
        let x = gaussian(n, d, 2000 + seed);
        let y: Vec<f64> = (0..n).map(|_| r.random_range(-3.0..3.0)).collect();
        let alpha = r.random_range(0.1..10.0);
        let lambda = r.random_range(0.01..5.0);
        let cfg = RidgeConfig {
            alpha_init: Some(alpha),
            lambda_init: Some(lambda),
            update_hyperparameters: false,
            ..RidgeConfig::default()
        };
        let rows: Vec<Vec<f64>> = (0..n).map(|i| x.row(i).iter().copied().collect()).collect();
        let model = train_bayesian_ridge(&rows, &y, &cfg).map_err(|e| e.to_string())?;

        // direct ridge on centered data: (Xc^T Xc + (lambda/alpha) I) w = Xc^T yc
        let x_mean = x.row_mean();
        let y_mean = y.iter().sum::<f64>() / n as f64;
        let xc = DMatrix::from_fn(n, d, |i, j| x[(i, j)] - x_mean[j]);
        let yc = DMatrix::from_fn(n, 1, |i, _| y[i] - y_mean);
        let a = xc.transpose() * &xc + DMatrix::identity(d, d) * (lambda / alpha);
        let w = a
            .cholesky()
            .ok_or("ridge system not positive definite")?
            .solve(&(xc.transpose() * yc));
        let b = y_mean - (0..d).map(|j| x_mean[j] * w[j]).sum::<f64>();
        for j in 0..d {
            worst = worst.max((model.weights[j] - w[j]).abs());
        }
        worst = worst.max((model.intercept - b).abs());
    }
    ensure(worst <= 1e-8, format!("max deviation {worst:e}"))?;
    Ok(format!("20 instances, max deviation {worst:.1e}"))
}

fn gradient_checks() -> Check {
    let h = 1e-6;
    let features = vec![
        vec![0.5, -1.2, 2.0],
        vec![-0.3, 0.8, 0.1],
        vec![1.5, 0.2, -0.7],
        vec![-1.1, -0.4, 0.9],
    ];
    let labels = [1i8, -1, 1, -1];
    let (w, b, l2) = (vec![0.3, -0.2, 0.1], 0.05, 0.01);
    let (gw, gb) = hinge_subgradient(&features, &labels, &w, b, l2);
    let mut worst_hinge = 0.0f64;
    for j in 0..=w.len() {
        let eval = |delta: f64| {
            let mut w2 = w.clone();
            let mut b2 = b;
            if j < w.len() {
                w2[j] += delta;
            } else {
                b2 += delta;
            }
            hinge_objective(&features, &labels, &w2, b2, l2)
        };
        let fd = (eval(h) - eval(-h)) / (2.0 * h);
        let g = if j < w.len() { gw[j] } else { gb };
        worst_hinge = worst_hinge.max((fd - g).abs());
    }

    let targets = [0usize, 2, 1, 2];
    let mut params = SoftmaxParams::zeros(3, 3);
    for (i, v) in params.values.iter_mut().enumerate() {
        *v = 0.1 * (i as f64 - 5.0) * if i % 2 == 0 { 1.0 } else { -0.7 };
    }
    let (_, grad) = softmax_objective(&params, &features, &targets, l2);
    let mut worst_softmax = 0.0f64;
    for (j, g) in grad.iter().enumerate() {
        let eval = |delta: f64| {
            let mut p = params.clone();
            p.values[j] += delta;
            softmax_objective(&p, &features, &targets, l2).0
        };
        let fd = (eval(h) - eval(-h)) / (2.0 * h);
        worst_softmax = worst_softmax.max((fd - g).abs());
    }
    ensure(
        worst_hinge <= 1e-5,
        format!("hinge deviation {worst_hinge:e}"),
    )?;
    ensure(
        worst_softmax <= 1e-5,
        format!("softmax deviation {worst_softmax:e}"),
    )?;
    Ok(format!(
        "hinge {worst_hinge:.1e}, softmax {worst_softmax:.1e}"
    ))
}

fn metric_arithmetic() -> Check {
    // gold ranks 1, 3, 7, 2 among each query's candidates
    let ranked = |rank: usize| -> Vec<String> {
        (1..=10)
            .map(|r| {
                if r == rank {
                    "gold".to_string()
                } else {
                    format!("c{r}")
                }
            })
            .collect()
    };
    let preds: Vec<Vec<String>> = [1, 3, 7, 2].iter().map(|&r| ranked(r)).collect();
    let gold = vec!["gold".to_string(); 4];
    let p1 = precision_at_k(&preds, &gold, 1).map_err(|e| e.to_string())?;
    let p5 = precision_at_k(&preds, &gold, 5).map_err(|e| e.to_string())?;
    ensure(
        p1 == 1.0 / 4.0 && p5 == 3.0 / 4.0,
        format!("P@1 {p1}, P@5 {p5}"),
    )?;

    let reg = regression_scores(&[1.0, 2.0, 4.0], &[1.0, 2.0, 3.0]).map_err(|e| e.to_string())?;
    ensure(reg.mse == 1.0 / 3.0, format!("mse {}", reg.mse))?;
    ensure(
        reg.r_squared == 1.0 - 1.0 / 2.0,
        format!("r2 {}", reg.r_squared),
    )?;

    let predicted = [1i8, 1, 1, 1];
    let gold = [1i8, -1, 1, -1];
    let prf = binary_prf(&predicted, &gold).map_err(|e| e.to_string())?;
    let tp = predicted
        .iter()
        .zip(&gold)
        .filter(|(p, g)| **p == 1 && **g == 1)
        .count() as f64;
    let (p, r) = (tp / 4.0, tp / 2.0);
    ensure(
        prf.precision == p && prf.recall == r && prf.f_measure == 2.0 * p * r / (p + r),
        format!("PRF {prf:?}"),
    )?;
    Ok("P@k, r2/MSE and PRF cases exact".into())
}

fn chance_controls() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let params = FixtureParams::default();
    let shuffled = fixture_config(dir.path(), &params, &["binary.shuffle_labels=true"]);
    let f = mean(
        &run_binary_sentiment_eval(&shuffled)
            .map_err(|e| e.to_string())?
            .report,
        "f_measure",
    );
    ensure((0.4..=0.6).contains(&f), format!("shuffled-label F {f}"))?;

    let majority = fixture_config(dir.path(), &params, &["reviews.classifier=\"majority\""]);
    let acc = mean(
        &run_review_eval(&majority)
            .map_err(|e| e.to_string())?
            .report,
        "accuracy",
    );
    ensure(
        (acc - 0.2).abs() <= 0.02,
        format!("constant-prediction accuracy {acc}"),
    )?;
    Ok(format!("shuffled F = {f:.3}, constant accuracy = {acc:.3}"))
}

fn leakage(report: &ExperimentReport) -> Result<usize, String> {
    let checks = report.details["leakage_checks"]
        .as_array()
        .ok_or_else(|| format!("{}: no leakage checks", report.experiment))?;
    for c in checks {
        ensure(
            c["shared_tokens"] == 0,
            format!("{}: leakage in run {}", report.experiment, c["run"]),
        )?;
    }
    Ok(checks.len())
}

fn synthetic_end_to_end() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fixture_config(dir.path(), &FixtureParams::default(), &[]);
    let acc = mean(
        &run_review_eval(&cfg).map_err(|e| e.to_string())?.report,
        "accuracy",
    );
    ensure(acc > 0.9, format!("review accuracy {acc}"))?;
    let mut runs = 0;
    runs += leakage(
        &run_translation_eval(&cfg)
            .map_err(|e| e.to_string())?
            .report,
    )?;
    runs += leakage(
        &run_binary_sentiment_eval(&cfg)
            .map_err(|e| e.to_string())?
            .report,
    )?;
    runs += leakage(&run_anew_eval(&cfg).map_err(|e| e.to_string())?.report)?;
    Ok(format!(
        "review accuracy {acc:.3}; {runs} split runs leak-free"
    ))
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fixture_config(
        dir.path(),
        &FixtureParams {
            noise: 0.3,
            ..FixtureParams::default()
        },
        &[],
    );
    let serial = ExperimentConfig {
        parallel: false,
        ..cfg.clone()
    };
    type Pipeline = fn(&ExperimentConfig) -> transent::Result<transent::pipelines::Outcome>;
    let pipelines: [(&str, Pipeline); 4] = [
        ("eval-align", run_translation_eval),
        ("eval-binary", run_binary_sentiment_eval),
        ("eval-anew", run_anew_eval),
        ("eval-reviews", run_review_eval),
    ];
    for (name, f) in pipelines {
        let a = f(&cfg).map_err(|e| e.to_string())?.report;
        let b = f(&cfg).map_err(|e| e.to_string())?.report;
        ensure(
            a.to_json_pretty() == b.to_json_pretty(),
            format!("{name}: reports differ"),
        )?;
        let s = f(&serial).map_err(|e| e.to_string())?.report;
        let body = |r: &ExperimentReport| {
            serde_json::to_string(&(&r.metrics, &r.details, &r.inputs)).unwrap()
        };
        ensure(
            body(&a) == body(&s),
            format!("{name}: parallel and serial differ"),
        )?;
    }
    Ok("4 pipelines byte-identical, parallel == serial".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("exact alignment recovery", exact_recovery),
        ("rotation retrieval", rotation_retrieval),
        ("ridge oracle equivalence", ridge_oracle),
        ("gradient checks", gradient_checks),
        ("metric arithmetic", metric_arithmetic),
        ("chance-level controls", chance_controls),
        (
            "synthetic end-to-end and leakage guard",
            synthetic_end_to_end,
        ),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(note) => println!("PASS  {name}: {note}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
