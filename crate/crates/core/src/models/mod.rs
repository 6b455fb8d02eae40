//! The three trainable predictors: a hinge-loss linear classifier for word
//! polarity, a Bayesian ridge regressor per affect dimension, and a
//! multinomial logistic classifier for review stars.
//!
//! # Text format
//!
//! Every model serializes to the same line-oriented layout:
//!
//! ```text
//! transent-model <kind> v1
//! <key> <value>            one hyperparameter or scalar per line
//! ...
//! matrix <rows> <cols>
//! <cols numbers>           repeated <rows> times
//! ```
//!
//! `<kind>` is `linear_binary`, `bayesian_ridge` or `logistic`. Numbers are
//! written in shortest round-trip form.

mod binary;
mod logistic;
mod ridge;

pub use binary::{hinge_objective, hinge_subgradient, train_binary, LinearBinaryModel, SgdConfig};
pub use logistic::{
    softmax, softmax_objective, train_logistic, LogisticConfig, LogisticModel, SoftmaxParams,
    ABSENT_CLASS_LOGIT,
};
pub use ridge::{
    train_bayesian_ridge, train_bayesian_ridge_traced, BayesianRidgeModel, HyperTrace, RidgeConfig,
};

use std::collections::BTreeMap;
use std::fmt::Display;
use std::str::FromStr;

use crate::error::{check_dim, Error, Result};

const MAGIC: &str = "transent-model";

/// Checks a non-empty, rectangular, finite feature set and returns its width.
pub(crate) fn validate_features(features: &[Vec<f64>]) -> Result<usize> {
    let first = features
        .first()
        .ok_or_else(|| Error::Model("no training examples".into()))?;
    let dim = first.len();
    if dim == 0 {
        return Err(Error::Model("feature vectors are empty".into()));
    }
    for row in features {
        check_dim(dim, row.len())?;
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::Model("non-finite feature value".into()));
        }
    }
    Ok(dim)
}

pub(crate) struct ModelText {
    out: String,
}

impl ModelText {
    fn new(kind: &str) -> Self {
        ModelText {
            out: format!("{MAGIC} {kind} v1\n"),
        }
    }

    fn param(&mut self, key: &str, value: impl Display) {
        self.out.push_str(&format!("{key} {value}\n"));
    }

    fn matrix(&mut self, rows: usize, cols: usize, data: &[f64]) {
        self.out.push_str(&format!("matrix {rows} {cols}\n"));
        for r in 0..rows {
            let row: Vec<String> = data[r * cols..(r + 1) * cols]
                .iter()
                .map(f64::to_string)
                .collect();
            self.out.push_str(&row.join(" "));
            self.out.push('\n');
        }
    }

    fn finish(self) -> String {
        self.out
    }

    fn parse(text: &str, kind: &str) -> Result<ParsedModel> {
        let mut lines = text.lines();
        let header = lines.next().unwrap_or_default();
        let expected = format!("{MAGIC} {kind} v1");
        if header.trim() != expected {
            return Err(Error::Model(format!(
                "expected header {expected:?}, found {header:?}"
            )));
        }
        let mut params = BTreeMap::new();
        let mut matrix = None;
        while let Some(line) = lines.next() {
            let Some((key, value)) = line.split_once(' ') else {
                return Err(Error::Model(format!("malformed line {line:?}")));
            };
            if key == "matrix" {
                let dims: Vec<usize> = value
                    .split_whitespace()
                    .map(str::parse)
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::Model(format!("malformed matrix header {line:?}")))?;
                let [rows, cols] = dims[..] else {
                    return Err(Error::Model(format!("malformed matrix header {line:?}")));
                };
                let mut data = Vec::with_capacity(rows * cols);
                for _ in 0..rows {
                    let row = lines
                        .next()
                        .ok_or_else(|| Error::Model("truncated matrix".into()))?;
                    let before = data.len();
                    for v in row.split_whitespace() {
                        data.push(
                            v.parse::<f64>()
                                .map_err(|_| Error::Model(format!("invalid number {v:?}")))?,
                        );
                    }
                    if data.len() - before != cols {
                        return Err(Error::Model("matrix row has wrong length".into()));
                    }
                }
                matrix = Some((rows, cols, data));
                break;
            }
            params.insert(key.to_string(), value.to_string());
        }
        Ok(ParsedModel { params, matrix })
    }
}

pub(crate) struct ParsedModel {
    params: BTreeMap<String, String>,
    matrix: Option<(usize, usize, Vec<f64>)>,
}

impl ParsedModel {
    fn get<T: FromStr>(&self, key: &str) -> Result<T> {
        let raw = self
            .params
            .get(key)
            .ok_or_else(|| Error::Model(format!("missing field {key:?}")))?;
        raw.parse()
            .map_err(|_| Error::Model(format!("invalid value {raw:?} for {key:?}")))
    }

    fn matrix(&self) -> Result<(usize, usize, Vec<f64>)> {
        self.matrix
            .clone()
            .ok_or_else(|| Error::Model("missing weight matrix".into()))
    }
}
