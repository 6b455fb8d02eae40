//! Linear hinge-loss classifier trained by SGD with an L2 penalty.
//!
//! Objective: `(1/n) sum_i max(0, 1 - y_i (w.x_i + b)) + l2 * ||w||^2`.
//! One pass per epoch over a freshly shuffled order, step size
//! `eta_t = eta0 / (1 + eta0 * l2 * t)` with `t` counting every sample seen.
//! The intercept is not penalized.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::embedding::dot;
use crate::error::{check_dim, Error, Result};
use crate::rng;

use super::{validate_features, ModelText};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SgdConfig {
    pub l2: f64,
    pub epochs: usize,
    pub eta0: f64,
    pub seed: u64,
}

impl Default for SgdConfig {
    fn default() -> Self {
        SgdConfig {
            l2: 1e-4,
            epochs: 100,
            eta0: 1.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearBinaryModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub config: SgdConfig,
}

impl LinearBinaryModel {
    pub fn decision(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.weights.len(), x.len())?;
        Ok(dot(&self.weights, x) + self.intercept)
    }

    /// `+1` when `w.x + b >= 0`, else `-1`.
    pub fn predict(&self, x: &[f64]) -> Result<i8> {
        Ok(if self.decision(x)? >= 0.0 { 1 } else { -1 })
    }

    pub fn to_text(&self) -> String {
        let mut t = ModelText::new("linear_binary");
        t.param("dim", self.weights.len());
        t.param("l2", self.config.l2);
        t.param("epochs", self.config.epochs);
        t.param("eta0", self.config.eta0);
        t.param("seed", self.config.seed);
        t.param("intercept", self.intercept);
        t.matrix(1, self.weights.len(), &self.weights);
        t.finish()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let t = ModelText::parse(text, "linear_binary")?;
        let dim: usize = t.get("dim")?;
        let (rows, cols, weights) = t.matrix()?;
        if rows != 1 || cols != dim {
            return Err(Error::Model(format!(
                "expected 1 x {dim} weights, got {rows} x {cols}"
            )));
        }
        Ok(LinearBinaryModel {
            weights,
            intercept: t.get("intercept")?,
            config: SgdConfig {
                l2: t.get("l2")?,
                epochs: t.get("epochs")?,
                eta0: t.get("eta0")?,
                seed: t.get("seed")?,
            },
        })
    }
}

/// Trains on `features[i]` with label `labels[i]` in {-1, +1}.
pub fn train_binary(
    features: &[Vec<f64>],
    labels: &[i8],
    config: &SgdConfig,
) -> Result<LinearBinaryModel> {
    if features.len() != labels.len() {
        return Err(Error::Model(format!(
            "{} feature rows but {} labels",
            features.len(),
            labels.len()
        )));
    }
    if let Some(l) = labels.iter().find(|l| **l != 1 && **l != -1) {
        return Err(Error::Model(format!(
            "binary label must be -1 or +1, got {l}"
        )));
    }
    if !labels.contains(&1) || !labels.contains(&-1) {
        return Err(Error::Model("binary training needs both classes".into()));
    }
    let dim = validate_features(features)?;
    if !(config.l2 >= 0.0 && config.eta0 > 0.0) {
        return Err(Error::Model("l2 must be >= 0 and eta0 > 0".into()));
    }

    let mut rng = rng::seeded(config.seed);
    let mut w = vec![0.0; dim];
    let mut b = 0.0;
    let mut order: Vec<usize> = (0..features.len()).collect();
    let mut t = 0u64;
    for _ in 0..config.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let eta = config.eta0 / (1.0 + config.eta0 * config.l2 * t as f64);
            let x = &features[i];
            let y = f64::from(labels[i]);
            let margin = y * (dot(&w, x) + b);
            let shrink = 1.0 - 2.0 * eta * config.l2;
            w.iter_mut().for_each(|wi| *wi *= shrink);
            if margin < 1.0 {
                for (wi, xi) in w.iter_mut().zip(x) {
                    *wi += eta * y * xi;
                }
                b += eta * y;
            }
            t += 1;
        }
    }
    if w.iter().any(|v| !v.is_finite()) || !b.is_finite() {
        return Err(Error::Model("SGD diverged to non-finite weights".into()));
    }
    Ok(LinearBinaryModel {
        weights: w,
        intercept: b,
        config: config.clone(),
    })
}

/// Regularized mean hinge loss at `(w, b)`.
pub fn hinge_objective(features: &[Vec<f64>], labels: &[i8], w: &[f64], b: f64, l2: f64) -> f64 {
    let n = features.len() as f64;
    let loss: f64 = features
        .iter()
        .zip(labels)
        .map(|(x, &y)| (1.0 - f64::from(y) * (dot(w, x) + b)).max(0.0))
        .sum();
    loss / n + l2 * dot(w, w)
}

/// Subgradient of [`hinge_objective`] with respect to `(w, b)`; exact
/// wherever no margin equals 1.
pub fn hinge_subgradient(
    features: &[Vec<f64>],
    labels: &[i8],
    w: &[f64],
    b: f64,
    l2: f64,
) -> (Vec<f64>, f64) {
    let n = features.len() as f64;
    let mut gw: Vec<f64> = w.iter().map(|wi| 2.0 * l2 * wi).collect();
    let mut gb = 0.0;
    for (x, &y) in features.iter().zip(labels) {
        let y = f64::from(y);
        if y * (dot(w, x) + b) < 1.0 {
            for (g, xi) in gw.iter_mut().zip(x) {
                *g -= y * xi / n;
            }
            gb -= y / n;
        }
    }
    (gw, gb)
}
