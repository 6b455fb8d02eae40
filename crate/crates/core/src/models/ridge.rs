//! Bayesian ridge regression fitted by evidence maximization.
//!
//! Prior `w ~ N(0, 1/lambda I)`, noise precision `alpha`, Gamma hyperpriors
//! `(alpha_1, alpha_2)` on `alpha` and `(lambda_1, lambda_2)` on `lambda`.
//! Data are centered first so the intercept is never shrunk. Each iteration
//! computes the posterior mean `m = alpha S X^T y` with
//! `S = (lambda I + alpha X^T X)^{-1}`, the effective number of parameters
//! `gamma = sum_k alpha s_k / (lambda + alpha s_k)` over the eigenvalues `s_k`
//! of `X^T X`, and then re-estimates
//!
//! ```text
//! alpha  <- (n - gamma + 2 alpha_1) / (||y - X m||^2 + 2 alpha_2)
//! lambda <- (gamma + 2 lambda_1)    / (||m||^2       + 2 lambda_2)
//! ```
//!
//! until the largest change in `m` falls below `tol`. Everything is evaluated
//! through one thin SVD of the centered design matrix.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::embedding::dot;
use crate::error::{check_dim, Error, Result};

use super::{validate_features, ModelText};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RidgeConfig {
    pub alpha_1: f64,
    pub alpha_2: f64,
    pub lambda_1: f64,
    pub lambda_2: f64,
    pub max_iter: usize,
    pub tol: f64,
    /// Starting noise precision; `1 / var(y)` when unset.
    pub alpha_init: Option<f64>,
    /// Starting weight precision; `1` when unset.
    pub lambda_init: Option<f64>,
    /// When false, `alpha` and `lambda` stay at their initial values and the
    /// fit reduces to ordinary ridge regression with penalty `lambda / alpha`.
    pub update_hyperparameters: bool,
}

impl Default for RidgeConfig {
    fn default() -> Self {
        RidgeConfig {
            alpha_1: 1.0,
            alpha_2: 1.0,
            lambda_1: 1e-6,
            lambda_2: 1e-6,
            max_iter: 300,
            tol: 1e-4,
            alpha_init: None,
            lambda_init: None,
            update_hyperparameters: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BayesianRidgeModel {
    /// Posterior mean of the weights.
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub alpha: f64,
    pub lambda: f64,
    pub config: RidgeConfig,
    pub n_iterations_run: usize,
}

impl BayesianRidgeModel {
    /// `m.x + intercept`; no clamping.
    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.weights.len(), x.len())?;
        Ok(dot(&self.weights, x) + self.intercept)
    }

    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut t = ModelText::new("bayesian_ridge");
        t.param("dim", self.weights.len());
        t.param("alpha_1", c.alpha_1);
        t.param("alpha_2", c.alpha_2);
        t.param("lambda_1", c.lambda_1);
        t.param("lambda_2", c.lambda_2);
        t.param("max_iter", c.max_iter);
        t.param("tol", c.tol);
        t.param("update_hyperparameters", c.update_hyperparameters);
        t.param("alpha", self.alpha);
        t.param("lambda", self.lambda);
        t.param("n_iterations_run", self.n_iterations_run);
        t.param("intercept", self.intercept);
        t.matrix(1, self.weights.len(), &self.weights);
        t.finish()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let t = ModelText::parse(text, "bayesian_ridge")?;
        let dim: usize = t.get("dim")?;
        let (rows, cols, weights) = t.matrix()?;
        if rows != 1 || cols != dim {
            return Err(Error::Model(format!(
                "expected 1 x {dim} weights, got {rows} x {cols}"
            )));
        }
        let alpha: f64 = t.get("alpha")?;
        let lambda: f64 = t.get("lambda")?;
        Ok(BayesianRidgeModel {
            weights,
            intercept: t.get("intercept")?,
            config: RidgeConfig {
                alpha_1: t.get("alpha_1")?,
                alpha_2: t.get("alpha_2")?,
                lambda_1: t.get("lambda_1")?,
                lambda_2: t.get("lambda_2")?,
                max_iter: t.get("max_iter")?,
                tol: t.get("tol")?,
                alpha_init: Some(alpha),
                lambda_init: Some(lambda),
                update_hyperparameters: t.get("update_hyperparameters")?,
            },
            alpha,
            lambda,
            n_iterations_run: t.get("n_iterations_run")?,
        })
    }
}

/// Values of `(alpha, lambda)` after each iteration.
pub type HyperTrace = Vec<(f64, f64)>;

pub fn train_bayesian_ridge(
    features: &[Vec<f64>],
    targets: &[f64],
    config: &RidgeConfig,
) -> Result<BayesianRidgeModel> {
    train_bayesian_ridge_traced(features, targets, config).map(|(m, _)| m)
}

pub fn train_bayesian_ridge_traced(
    features: &[Vec<f64>],
    targets: &[f64],
    config: &RidgeConfig,
) -> Result<(BayesianRidgeModel, HyperTrace)> {
    if features.len() != targets.len() {
        return Err(Error::Model(format!(
            "{} feature rows but {} targets",
            features.len(),
            targets.len()
        )));
    }
    if features.len() < 2 {
        return Err(Error::Model(
            "Bayesian ridge needs at least 2 examples".into(),
        ));
    }
    if targets.iter().any(|t| !t.is_finite()) {
        return Err(Error::Model("non-finite regression target".into()));
    }
    let hyper = [
        config.alpha_1,
        config.alpha_2,
        config.lambda_1,
        config.lambda_2,
    ];
    if hyper.iter().any(|h| !(*h > 0.0 && h.is_finite())) {
        return Err(Error::Model(
            "hyperpriors must be positive and finite".into(),
        ));
    }
    let dim = validate_features(features)?;
    let n = features.len();
    let nf = n as f64;

    let mut x_mean = vec![0.0; dim];
    for row in features {
        for (m, v) in x_mean.iter_mut().zip(row) {
            *m += v / nf;
        }
    }
    let y_mean = targets.iter().sum::<f64>() / nf;
    let x = DMatrix::from_fn(n, dim, |r, c| features[r][c] - x_mean[c]);
    let y = DVector::from_iterator(n, targets.iter().map(|t| t - y_mean));

    let svd = x.clone().svd(true, true);
    let u = svd.u.as_ref().expect("svd computed with u");
    let vt = svd.v_t.as_ref().expect("svd computed with v_t");
    let sigma = &svd.singular_values;
    let uty = u.transpose() * &y;
    let eig: Vec<f64> = sigma.iter().map(|s| s * s).collect();

    let posterior_mean = |alpha: f64, lambda: f64| -> DVector<f64> {
        let scaled = DVector::from_iterator(
            sigma.len(),
            (0..sigma.len()).map(|k| alpha * sigma[k] * uty[k] / (lambda + alpha * eig[k])),
        );
        vt.transpose() * scaled
    };

    let var_y = y.norm_squared() / nf;
    let mut alpha = config.alpha_init.unwrap_or(1.0 / (var_y + f64::EPSILON));
    let mut lambda = config.lambda_init.unwrap_or(1.0);
    if !(alpha > 0.0 && alpha.is_finite() && lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Model(
            "initial alpha and lambda must be positive and finite".into(),
        ));
    }

    let mut trace = HyperTrace::new();
    let mut previous: Option<DVector<f64>> = None;
    let mut iterations = 0;
    for _ in 0..config.max_iter {
        iterations += 1;
        let m = posterior_mean(alpha, lambda);
        if config.update_hyperparameters {
            let gamma: f64 = eig.iter().map(|s| alpha * s / (lambda + alpha * s)).sum();
            let rss = (&y - &x * &m).norm_squared();
            lambda = (gamma + 2.0 * config.lambda_1) / (m.norm_squared() + 2.0 * config.lambda_2);
            alpha = (nf - gamma + 2.0 * config.alpha_1) / (rss + 2.0 * config.alpha_2);
            if !(alpha > 0.0 && alpha.is_finite() && lambda > 0.0 && lambda.is_finite()) {
                return Err(Error::Model(format!(
                    "evidence update left alpha = {alpha}, lambda = {lambda}"
                )));
            }
        }
        trace.push((alpha, lambda));
        let converged = previous
            .as_ref()
            .is_some_and(|p| (p - &m).amax() < config.tol);
        previous = Some(m);
        if converged || !config.update_hyperparameters {
            break;
        }
    }

    let m = posterior_mean(alpha, lambda);
    let weights: Vec<f64> = m.iter().copied().collect();
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::Model("non-finite posterior mean".into()));
    }
    let intercept = y_mean - dot(&x_mean, &weights);
    Ok((
        BayesianRidgeModel {
            weights,
            intercept,
            alpha,
            lambda,
            config: config.clone(),
            n_iterations_run: iterations,
        },
        trace,
    ))
}
