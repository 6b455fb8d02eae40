//! Multinomial logistic regression (softmax cross-entropy with L2 penalty).
//!
//! Minimizes `-(1/n) sum_i log p(y_i | x_i) + l2 * ||W||^2` by full-batch
//! gradient descent with a backtracking (Armijo) line search. Intercepts are
//! unpenalized. Features are centered internally before optimizing, which
//! only re-parameterizes the intercepts; the fitted model acts on raw inputs.
//!
//! Classes listed in `class_labels` but absent from the training labels are
//! left out of the optimization and receive a logit of [`ABSENT_CLASS_LOGIT`]
//! so they never win the argmax.

use serde::{Deserialize, Serialize};

use crate::embedding::dot;
use crate::error::{check_dim, Error, Result};

use super::{validate_features, ModelText};

pub const ABSENT_CLASS_LOGIT: f64 = -1e30;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LogisticConfig {
    pub l2: f64,
    pub max_iter: usize,
    /// Stop once the gradient's max-norm drops below this.
    pub tol: f64,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        LogisticConfig {
            l2: 1e-4,
            max_iter: 2000,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticModel {
    pub class_labels: Vec<u8>,
    /// `|classes| x F`, row-major.
    pub weights: Vec<f64>,
    pub intercepts: Vec<f64>,
    pub n_features: usize,
    pub config: LogisticConfig,
    pub n_iterations_run: usize,
}

impl LogisticModel {
    fn logits(&self, x: &[f64]) -> Vec<f64> {
        let f = self.n_features;
        self.intercepts
            .iter()
            .enumerate()
            .map(|(k, b)| dot(&self.weights[k * f..(k + 1) * f], x) + b)
            .collect()
    }

    pub fn predict_proba(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.n_features, x.len())?;
        Ok(softmax(&self.logits(x)))
    }

    /// Highest-probability class; ties go to the earlier label.
    pub fn predict(&self, x: &[f64]) -> Result<u8> {
        check_dim(self.n_features, x.len())?;
        let logits = self.logits(x);
        let mut best = 0;
        for k in 1..logits.len() {
            if logits[k] > logits[best] {
                best = k;
            }
        }
        Ok(self.class_labels[best])
    }

    pub fn to_text(&self) -> String {
        let mut t = ModelText::new("logistic");
        let labels: Vec<String> = self.class_labels.iter().map(u8::to_string).collect();
        t.param("classes", labels.join(","));
        t.param("features", self.n_features);
        t.param("l2", self.config.l2);
        t.param("max_iter", self.config.max_iter);
        t.param("tol", self.config.tol);
        t.param("n_iterations_run", self.n_iterations_run);
        let b: Vec<String> = self.intercepts.iter().map(f64::to_string).collect();
        t.param("intercepts", b.join(","));
        t.matrix(self.class_labels.len(), self.n_features, &self.weights);
        t.finish()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let t = ModelText::parse(text, "logistic")?;
        let list = |key: &str| -> Result<Vec<String>> {
            let raw: String = t.get(key)?;
            Ok(raw.split(',').map(str::to_string).collect())
        };
        let class_labels = list("classes")?
            .iter()
            .map(|s| s.parse::<u8>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Model(format!("bad class label: {e}")))?;
        let intercepts = list("intercepts")?
            .iter()
            .map(|s| s.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Model(format!("bad intercept: {e}")))?;
        let n_features: usize = t.get("features")?;
        let (rows, cols, weights) = t.matrix()?;
        if rows != class_labels.len() || cols != n_features || intercepts.len() != rows {
            return Err(Error::Model("logistic model shape mismatch".into()));
        }
        Ok(LogisticModel {
            class_labels,
            weights,
            intercepts,
            n_features,
            config: LogisticConfig {
                l2: t.get("l2")?,
                max_iter: t.get("max_iter")?,
                tol: t.get("tol")?,
            },
            n_iterations_run: t.get("n_iterations_run")?,
        })
    }
}

pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|z| (z - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / total).collect()
}

/// Parameters of a softmax model over `k` classes and `f` features:
/// weights `k x f` row-major followed by `k` intercepts.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftmaxParams {
    pub k: usize,
    pub f: usize,
    pub values: Vec<f64>,
}

impl SoftmaxParams {
    pub fn zeros(k: usize, f: usize) -> Self {
        SoftmaxParams {
            k,
            f,
            values: vec![0.0; k * f + k],
        }
    }

    fn weights(&self, class: usize) -> &[f64] {
        &self.values[class * self.f..(class + 1) * self.f]
    }

    fn intercept(&self, class: usize) -> f64 {
        self.values[self.k * self.f + class]
    }
}

/// Regularized mean cross-entropy and its gradient. `targets[i]` is a class
/// index in `0..params.k`.
pub fn softmax_objective(
    params: &SoftmaxParams,
    features: &[Vec<f64>],
    targets: &[usize],
    l2: f64,
) -> (f64, Vec<f64>) {
    let (k, f) = (params.k, params.f);
    let n = features.len() as f64;
    let mut grad = vec![0.0; params.values.len()];
    let mut loss = 0.0;
    let mut logits = vec![0.0; k];
    for (x, &y) in features.iter().zip(targets) {
        for (c, z) in logits.iter_mut().enumerate() {
            *z = dot(params.weights(c), x) + params.intercept(c);
        }
        let p = softmax(&logits);
        loss -= p[y].max(f64::MIN_POSITIVE).ln();
        for c in 0..k {
            let r = (p[c] - if c == y { 1.0 } else { 0.0 }) / n;
            for (g, xi) in grad[c * f..(c + 1) * f].iter_mut().zip(x) {
                *g += r * xi;
            }
            grad[k * f + c] += r;
        }
    }
    let wnorm: f64 = params.values[..k * f].iter().map(|w| w * w).sum();
    for (g, w) in grad[..k * f].iter_mut().zip(&params.values[..k * f]) {
        *g += 2.0 * l2 * w;
    }
    (loss / n + l2 * wnorm, grad)
}

/// Trains over `class_labels` (e.g. `[1, 2, 3, 4, 5]`).
pub fn train_logistic(
    features: &[Vec<f64>],
    labels: &[u8],
    class_labels: &[u8],
    config: &LogisticConfig,
) -> Result<LogisticModel> {
    if features.len() != labels.len() {
        return Err(Error::Model(format!(
            "{} feature rows but {} labels",
            features.len(),
            labels.len()
        )));
    }
    let dim = validate_features(features)?;
    let mut present: Vec<u8> = Vec::new();
    for l in labels {
        if !class_labels.contains(l) {
            return Err(Error::Model(format!(
                "label {l} not among the model classes"
            )));
        }
        if !present.contains(l) {
            present.push(*l);
        }
    }
    if present.len() < 2 {
        return Err(Error::Model(
            "logistic training needs at least 2 distinct labels".into(),
        ));
    }
    present.sort_unstable();

    let n = features.len() as f64;
    let mut mean = vec![0.0; dim];
    for row in features {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v / n;
        }
    }
    let centered: Vec<Vec<f64>> = features
        .iter()
        .map(|r| r.iter().zip(&mean).map(|(v, m)| v - m).collect())
        .collect();
    let targets: Vec<usize> = labels
        .iter()
        .map(|l| present.iter().position(|p| p == l).unwrap())
        .collect();

    let mut params = SoftmaxParams::zeros(present.len(), dim);
    let (mut loss, mut grad) = softmax_objective(&params, &centered, &targets, config.l2);
    let mut step = 1.0;
    let mut iterations = 0;
    while iterations < config.max_iter {
        let gmax = grad.iter().fold(0.0f64, |m, g| m.max(g.abs()));
        if gmax < config.tol {
            break;
        }
        iterations += 1;
        let gsq: f64 = grad.iter().map(|g| g * g).sum();
        let mut accepted = false;
        for _ in 0..60 {
            let trial = SoftmaxParams {
                values: params
                    .values
                    .iter()
                    .zip(&grad)
                    .map(|(p, g)| p - step * g)
                    .collect(),
                ..params.clone()
            };
            let (tl, tg) = softmax_objective(&trial, &centered, &targets, config.l2);
            if tl <= loss - 0.5 * step * gsq {
                params = trial;
                loss = tl;
                grad = tg;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        step *= 2.0;
    }
    if params.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Model(
            "logistic training produced non-finite weights".into(),
        ));
    }

    let k = class_labels.len();
    let mut weights = vec![0.0; k * dim];
    let mut intercepts = vec![ABSENT_CLASS_LOGIT; k];
    for (pi, label) in present.iter().enumerate() {
        let c = class_labels.iter().position(|l| l == label).unwrap();
        let w = params.weights(pi);
        weights[c * dim..(c + 1) * dim].copy_from_slice(w);
        intercepts[c] = params.intercept(pi) - dot(w, &mean);
    }
    Ok(LogisticModel {
        class_labels: class_labels.to_vec(),
        weights,
        intercepts,
        n_features: dim,
        config: config.clone(),
        n_iterations_run: iterations,
    })
}
