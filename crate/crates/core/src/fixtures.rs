//! Synthetic data sets with known ground truth.
//!
//! The target space holds Gaussian vectors. The source space is an exact
//! orthogonal rotation of it, optionally perturbed by isotropic Gaussian
//! noise, so the ideal translation matrix is the rotation itself. Affect
//! ratings are affine in hidden unit directions of the target space and
//! polarity is the sign of the valence offset. Reviews draw all their tokens
//! from one valence band, so each star label is the band index of the
//! review's mean valence.

use std::fs;
use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;
use rand::seq::{index, IndexedRandom};
use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::embedding::VectorSpace;
use crate::error::{Error, Result};
use crate::ingest::ReviewRecord;
use crate::rng;

pub const SOURCE_LANGUAGE: &str = "syn";
pub const TARGET_LANGUAGE: &str = "en";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixtureParams {
    pub seed: u64,
    pub words: usize,
    pub dim: usize,
    /// Std of the Gaussian noise added to each source vector coordinate.
    pub noise: f64,
    /// Share of the vocabulary that receives ANEW-style ratings.
    pub anew_fraction: f64,
    pub target_reviews_per_star: usize,
    pub source_reviews_per_star: usize,
    pub review_length: usize,
    /// Words whose valence lies within this distance of 5 get no polarity.
    pub polarity_margin: f64,
}

impl Default for FixtureParams {
    fn default() -> Self {
        FixtureParams {
            seed: 7,
            words: 200,
            dim: 10,
            noise: 0.0,
            anew_fraction: 0.6,
            target_reviews_per_star: 60,
            source_reviews_per_star: 40,
            review_length: 8,
            polarity_margin: 0.2,
        }
    }
}

impl FixtureParams {
    fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(format!("fixtures: {m}")));
        if self.words < 5 {
            return fail(format!(
                "need at least 5 words (one per star band), got {}",
                self.words
            ));
        }
        if self.dim < 1 {
            return fail("dimension must be positive".into());
        }
        if !(self.noise >= 0.0 && self.noise.is_finite()) {
            return fail(format!(
                "noise {} must be a finite non-negative number",
                self.noise
            ));
        }
        if !(self.anew_fraction > 0.0 && self.anew_fraction <= 1.0) {
            return fail(format!(
                "anew_fraction {} must lie in (0, 1]",
                self.anew_fraction
            ));
        }
        if ((self.anew_fraction * self.words as f64).round() as usize) < 2 {
            return fail("fewer than 2 rated words".into());
        }
        if self.review_length < 1
            || self.target_reviews_per_star < 1
            || self.source_reviews_per_star < 1
        {
            return fail("review counts and length must be positive".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub generator: String,
    pub params: FixtureParams,
    pub source_language: String,
    pub target_language: String,
    /// Ratings are `5 + scale * (direction . z)`, per dimension.
    pub rating_scales: [f64; 3],
    /// Valence thresholds separating the star bands.
    pub star_boundaries: Vec<f64>,
    pub positive_words: usize,
    pub negative_words: usize,
    pub rated_words: usize,
    pub files: Vec<String>,
}

/// All generated data, in memory.
#[derive(Debug, Clone)]
pub struct FixtureSet {
    pub source: VectorSpace,
    pub target: VectorSpace,
    pub lexicon: Vec<(String, String)>,
    pub positive: Vec<String>,
    pub negative: Vec<String>,
    /// `(target token, valence, arousal, dominance)`
    pub ratings: Vec<(String, f64, f64, f64)>,
    pub target_reviews: Vec<ReviewRecord>,
    pub source_reviews: Vec<ReviewRecord>,
    pub manifest: Manifest,
}

const FILES: [&str; 12] = [
    "source.vec",
    "target.vec",
    "lexicon.tsv",
    "polarity_positive.txt",
    "polarity_negative.txt",
    "polarity_lexicon.tsv",
    "anew.csv",
    "anew_lexicon.tsv",
    "reviews_target.jsonl",
    "reviews_source.jsonl",
    "config.toml",
    "manifest.json",
];

fn source_word(i: usize) -> String {
    format!("{SOURCE_LANGUAGE}_w{i:04}")
}

fn target_word(i: usize) -> String {
    format!("{TARGET_LANGUAGE}_w{i:04}")
}

fn unit_direction(rng: &mut rng::Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-8 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

pub fn generate(params: &FixtureParams) -> Result<FixtureSet> {
    params.validate()?;
    let (n, d) = (params.words, params.dim);
    let mut rng = rng::seeded(params.seed);

    let target = DMatrix::<f64>::from_fn(n, d, |_, _| rng.sample(StandardNormal));
    let gauss = DMatrix::<f64>::from_fn(d, d, |_, _| rng.sample(StandardNormal));
    let rotation = gauss.qr().q();
    // x = Q^T z (+ noise), so the ideal map back is z = Q x.
    let mut source = &target * &rotation;
    if params.noise > 0.0 {
        for v in source.iter_mut() {
            let e: f64 = rng.sample(StandardNormal);
            *v += params.noise * e;
        }
    }

    let directions: Vec<Vec<f64>> = (0..3).map(|_| unit_direction(&mut rng, d)).collect();
    let mut scales = [0.0; 3];
    let mut affect = vec![[0.0; 3]; n];
    for (k, u) in directions.iter().enumerate() {
        let proj: Vec<f64> = (0..n)
            .map(|i| (0..d).map(|c| target[(i, c)] * u[c]).sum())
            .collect();
        let max = proj.iter().fold(0.0f64, |m, p| m.max(p.abs()));
        scales[k] = 3.9 / max;
        for i in 0..n {
            affect[i][k] = 5.0 + scales[k] * proj[i];
        }
    }
    let valence = |i: usize| affect[i][0];

    let rows = |m: &DMatrix<f64>| -> Vec<Vec<f64>> {
        (0..m.nrows())
            .map(|r| m.row(r).iter().copied().collect())
            .collect()
    };
    let target_space = VectorSpace::new(
        TARGET_LANGUAGE,
        (0..n).map(target_word).collect(),
        rows(&target),
    )?;
    let source_space = VectorSpace::new(
        SOURCE_LANGUAGE,
        (0..n).map(source_word).collect(),
        rows(&source),
    )?;
    let lexicon: Vec<(String, String)> = (0..n).map(|i| (source_word(i), target_word(i))).collect();

    let positive: Vec<String> = (0..n)
        .filter(|&i| valence(i) > 5.0 + params.polarity_margin)
        .map(target_word)
        .collect();
    let negative: Vec<String> = (0..n)
        .filter(|&i| valence(i) < 5.0 - params.polarity_margin)
        .map(target_word)
        .collect();

    let rated_count = (params.anew_fraction * n as f64).round() as usize;
    let mut rated = index::sample(&mut rng, n, rated_count).into_vec();
    rated.sort_unstable();
    let ratings = rated
        .iter()
        .map(|&i| (target_word(i), affect[i][0], affect[i][1], affect[i][2]))
        .collect();

    // Five equal-size valence bands, lowest first.
    let mut by_valence: Vec<usize> = (0..n).collect();
    by_valence.sort_by(|&a, &b| valence(a).total_cmp(&valence(b)).then(a.cmp(&b)));
    let bands: Vec<Vec<usize>> = (0..5)
        .map(|b| by_valence[b * n / 5..(b + 1) * n / 5].to_vec())
        .collect();
    let star_boundaries: Vec<f64> = (0..4)
        .map(|b| 0.5 * (valence(*bands[b].last().unwrap()) + valence(bands[b + 1][0])))
        .collect();

    let mut make_reviews = |per_star: usize, word: fn(usize) -> String| -> Vec<ReviewRecord> {
        let mut out = Vec::with_capacity(5 * per_star);
        for _ in 0..per_star {
            for (b, band) in bands.iter().enumerate() {
                let tokens = (0..params.review_length)
                    .map(|_| word(*band.choose(&mut rng).expect("non-empty band")))
                    .collect();
                out.push(ReviewRecord {
                    tokens,
                    label: b as u8 + 1,
                });
            }
        }
        out
    };
    let target_reviews = make_reviews(params.target_reviews_per_star, target_word);
    let source_reviews = make_reviews(params.source_reviews_per_star, source_word);

    let manifest = Manifest {
        generator: format!("transent-core {}", crate::VERSION),
        params: params.clone(),
        source_language: SOURCE_LANGUAGE.into(),
        target_language: TARGET_LANGUAGE.into(),
        rating_scales: scales,
        star_boundaries,
        positive_words: positive.len(),
        negative_words: negative.len(),
        rated_words: rated_count,
        files: FILES.iter().map(|f| f.to_string()).collect(),
    };
    Ok(FixtureSet {
        source: source_space,
        target: target_space,
        lexicon,
        positive,
        negative,
        ratings,
        target_reviews,
        source_reviews,
        manifest,
    })
}

/// Star label implied by a mean valence under the manifest's band thresholds.
pub fn star_for_mean_valence(boundaries: &[f64], mean: f64) -> u8 {
    1 + boundaries.iter().filter(|b| mean > **b).count() as u8
}

fn config_toml(seed: u64) -> String {
    format!(
        r#"# Generated by make-fixtures. Paths are relative to this file.
seed = {seed}
parallel = true
source_language = "{SOURCE_LANGUAGE}"
target_language = "{TARGET_LANGUAGE}"

[paths]
source_space = "source.vec"
target_space = "target.vec"
lexicon = "lexicon.tsv"
polarity_positive = "polarity_positive.txt"
polarity_negative = "polarity_negative.txt"
polarity_lexicon = "polarity_lexicon.tsv"
anew = "anew.csv"
anew_lexicon = "anew_lexicon.tsv"
target_reviews = "reviews_target.jsonl"
source_reviews = "reviews_source.jsonl"

[alignment]
run_count = 10
train_fraction = 0.9

[binary]
run_count = 10
train_fraction = 0.8

[anew]
run_count = 10
train_fraction = 0.75

[reviews]
feature_dims = ["valence"]
"#
    )
}

/// Generates a fixture set and writes it, with a manifest and a ready-to-run
/// `config.toml`, into `dir`.
pub fn write_fixtures(dir: impl AsRef<Path>, params: &FixtureParams) -> Result<Manifest> {
    let dir = dir.as_ref();
    let set = generate(params)?;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let write = |name: &str, content: &[u8]| -> Result<()> {
        let path = dir.join(name);
        let mut f = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        f.write_all(content).map_err(|e| Error::io(&path, e))
    };
    let lines = |items: &mut dyn Iterator<Item = String>| -> Vec<u8> {
        let mut out = String::new();
        for l in items {
            out.push_str(&l);
            out.push('\n');
        }
        out.into_bytes()
    };

    set.source.save_word2vec_text(dir.join("source.vec"))?;
    set.target.save_word2vec_text(dir.join("target.vec"))?;
    write(
        "lexicon.tsv",
        &lines(&mut set.lexicon.iter().map(|(s, t)| format!("{s}\t{t}"))),
    )?;
    write(
        "polarity_positive.txt",
        &lines(&mut set.positive.iter().cloned()),
    )?;
    write(
        "polarity_negative.txt",
        &lines(&mut set.negative.iter().cloned()),
    )?;
    let source_of = |t: &str| -> String { t.replacen(TARGET_LANGUAGE, SOURCE_LANGUAGE, 1) };
    write(
        "polarity_lexicon.tsv",
        &lines(
            &mut set
                .positive
                .iter()
                .chain(&set.negative)
                .map(|t| format!("{}\t{t}", source_of(t))),
        ),
    )?;
    let mut anew = String::from(crate::ingest::ANEW_HEADER);
    anew.push('\n');
    for (t, v, a, d) in &set.ratings {
        anew.push_str(&format!("{t},{v},{a},{d}\n"));
    }
    write("anew.csv", anew.as_bytes())?;
    write(
        "anew_lexicon.tsv",
        &lines(
            &mut set
                .ratings
                .iter()
                .map(|(t, ..)| format!("{}\t{t}", source_of(t))),
        ),
    )?;
    let jsonl = |reviews: &[ReviewRecord]| -> Vec<u8> {
        lines(
            &mut reviews
                .iter()
                .map(|r| serde_json::to_string(r).expect("review serializes")),
        )
    };
    write("reviews_target.jsonl", &jsonl(&set.target_reviews))?;
    write("reviews_source.jsonl", &jsonl(&set.source_reviews))?;
    write("config.toml", config_toml(params.seed).as_bytes())?;
    let mut manifest = serde_json::to_string_pretty(&set.manifest).expect("manifest serializes");
    manifest.push('\n');
    write("manifest.json", manifest.as_bytes())?;
    Ok(set.manifest)
}
