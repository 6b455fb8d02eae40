//! Declarative experiment configuration (TOML).
//!
//! Relative paths are resolved against the directory holding the config
//! file. Unknown keys are rejected. `key=value` overrides use dotted keys
//! (`binary.run_count=5`) and are applied to the parsed document before
//! validation, so an override behaves exactly like editing the file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::AffectDimension;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Root of all randomness in an experiment.
    #[serde(default)]
    pub seed: u64,
    /// Run Monte Carlo repetitions on the rayon pool. Results are identical
    /// either way.
    #[serde(default = "yes")]
    pub parallel: bool,
    pub source_language: String,
    pub target_language: String,
    pub paths: Paths,
    #[serde(default)]
    pub alignment: AlignmentSection,
    #[serde(default)]
    pub binary: BinarySection,
    #[serde(default)]
    pub anew: AnewSection,
    #[serde(default)]
    pub reviews: ReviewSection,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Paths {
    pub source_space: Option<PathBuf>,
    pub target_space: Option<PathBuf>,
    /// `source<TAB>target` pairs used to fit the translation matrix.
    pub lexicon: Option<PathBuf>,
    /// Pre-fitted matrix; when absent the matrix is fit on `lexicon`.
    pub translation_matrix: Option<PathBuf>,
    pub polarity_positive: Option<PathBuf>,
    pub polarity_negative: Option<PathBuf>,
    /// Translations of the polarity words into the source language.
    pub polarity_lexicon: Option<PathBuf>,
    pub anew: Option<PathBuf>,
    /// Translations of the ANEW words into the source language.
    pub anew_lexicon: Option<PathBuf>,
    pub target_reviews: Option<PathBuf>,
    pub source_reviews: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AlignmentSection {
    /// Random subset of the filtered lexicon to use; all pairs when unset.
    pub lexicon_size: Option<usize>,
    pub run_count: usize,
    pub train_fraction: f64,
}

impl Default for AlignmentSection {
    fn default() -> Self {
        AlignmentSection {
            lexicon_size: None,
            run_count: 10,
            train_fraction: 0.9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BinarySection {
    pub run_count: usize,
    pub train_fraction: f64,
    /// Chance-level control: permute the labels before splitting.
    pub shuffle_labels: bool,
    pub l2: f64,
    pub epochs: usize,
    pub eta0: f64,
}

impl Default for BinarySection {
    fn default() -> Self {
        BinarySection {
            run_count: 10,
            train_fraction: 0.8,
            shuffle_labels: false,
            l2: 1e-4,
            epochs: 100,
            eta0: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnewPredictor {
    BayesianRidge,
    /// Baseline: predict the training-set mean for every word.
    TrainMean,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnewSection {
    pub run_count: usize,
    pub train_fraction: f64,
    pub predictor: AnewPredictor,
    pub alpha_1: f64,
    pub alpha_2: f64,
    pub lambda_1: f64,
    pub lambda_2: f64,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for AnewSection {
    fn default() -> Self {
        let r = crate::models::RidgeConfig::default();
        AnewSection {
            run_count: 10,
            train_fraction: 0.75,
            predictor: AnewPredictor::BayesianRidge,
            alpha_1: r.alpha_1,
            alpha_2: r.alpha_2,
            lambda_1: r.lambda_1,
            lambda_2: r.lambda_2,
            max_iter: r.max_iter,
            tol: r.tol,
        }
    }
}

impl AnewSection {
    pub fn ridge_config(&self) -> crate::models::RidgeConfig {
        crate::models::RidgeConfig {
            alpha_1: self.alpha_1,
            alpha_2: self.alpha_2,
            lambda_1: self.lambda_1,
            lambda_2: self.lambda_2,
            max_iter: self.max_iter,
            tol: self.tol,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReviewClassifier {
    Logistic,
    /// Baseline: always predict the most frequent training label.
    Majority,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReviewSide {
    Source,
    Target,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReviewSection {
    /// Affect dimensions feeding the sentiment vector. One entry gives the
    /// `1 x max_length` layout; several entries concatenate one block per
    /// dimension (an extension).
    pub feature_dims: Vec<AffectDimension>,
    pub classifier: ReviewClassifier,
    pub l2: f64,
    pub max_iter: usize,
    pub tol: f64,
    /// Which review set the `featurize` command writes.
    pub featurize_side: ReviewSide,
}

impl Default for ReviewSection {
    fn default() -> Self {
        let l = crate::models::LogisticConfig::default();
        ReviewSection {
            feature_dims: vec![AffectDimension::Valence],
            classifier: ReviewClassifier::Logistic,
            l2: l.l2,
            max_iter: l.max_iter,
            tol: l.tol,
            featurize_side: ReviewSide::Source,
        }
    }
}

impl ReviewSection {
    pub fn logistic_config(&self) -> crate::models::LogisticConfig {
        crate::models::LogisticConfig {
            l2: self.l2,
            max_iter: self.max_iter,
            tol: self.tol,
        }
    }
}

impl ExperimentConfig {
    /// Reads `path` and applies `key=value` overrides.
    pub fn load(path: impl AsRef<Path>, overrides: &[String]) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_toml_str(&text, overrides, base)
    }

    pub fn from_toml_str(text: &str, overrides: &[String], base_dir: PathBuf) -> Result<Self> {
        let mut doc: toml::Table =
            toml::from_str(text).map_err(|e| Error::Config(format!("invalid TOML: {e}")))?;
        for o in overrides {
            apply_override(&mut doc, o)?;
        }
        let mut cfg: ExperimentConfig = toml::Value::Table(doc)
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        cfg.base_dir = base_dir;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        let fractions = [
            ("alignment.train_fraction", self.alignment.train_fraction),
            ("binary.train_fraction", self.binary.train_fraction),
            ("anew.train_fraction", self.anew.train_fraction),
        ];
        for (key, f) in fractions {
            if !(f > 0.0 && f < 1.0) {
                return Err(Error::Config(format!("{key} = {f} must lie in (0, 1)")));
            }
        }
        let runs = [
            ("alignment.run_count", self.alignment.run_count),
            ("binary.run_count", self.binary.run_count),
            ("anew.run_count", self.anew.run_count),
        ];
        for (key, r) in runs {
            if r == 0 {
                return Err(Error::Config(format!("{key} must be positive")));
            }
        }
        if self.reviews.feature_dims.is_empty() {
            return Err(Error::Config(
                "reviews.feature_dims must not be empty".into(),
            ));
        }
        if self.alignment.lexicon_size == Some(0) {
            return Err(Error::Config(
                "alignment.lexicon_size must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Absolute location of a configured path, or an error naming the key.
    pub fn require(&self, key: &str, value: &Option<PathBuf>) -> Result<PathBuf> {
        value
            .as_ref()
            .map(|p| self.base_dir.join(p))
            .ok_or_else(|| Error::Config(format!("paths.{key} is required for this experiment")))
    }

    pub fn resolve(&self, value: &Option<PathBuf>) -> Option<PathBuf> {
        value.as_ref().map(|p| self.base_dir.join(p))
    }

    /// The config as it will be recorded in reports (defaults filled in).
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }
}

fn apply_override(doc: &mut toml::Table, assignment: &str) -> Result<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override {assignment:?} is not key=value")))?;
    let key = key.trim();
    let raw = raw.trim();
    if key.is_empty() {
        return Err(Error::Config(format!(
            "override {assignment:?} has an empty key"
        )));
    }
    // Parse as a TOML value; bare words fall back to strings.
    let value = toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));

    let parts: Vec<&str> = key.split('.').collect();
    let (last, parents) = parts.split_last().expect("non-empty key");
    let mut table = doc;
    for p in parents {
        let entry = table
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| Error::Config(format!("override {key:?}: {p:?} is not a table")))?;
    }
    table.insert(last.to_string(), value);
    Ok(())
}
