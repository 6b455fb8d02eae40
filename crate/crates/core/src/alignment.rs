//! Linear translation matrix between two embedding spaces.
//!
//! Given paired vectors `x_i` (source) and `z_i` (target), the matrix `W`
//! minimizes `sum_i ||W x_i - z_i||^2`. The fit is closed-form: stacking the
//! pairs as rows of `X` and `Z`, `W^T` is the minimum-norm least-squares
//! solution of `X W^T = Z`, computed from the SVD of `X`. Singular values
//! below `1e-12 * sigma_max` are treated as zero, which covers lexicons with
//! fewer pairs than dimensions.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use nalgebra::DMatrix;

use crate::embedding::{Neighbor, VectorSpace};
use crate::error::{check_dim, Error, Result};
use crate::ingest::BilingualLexicon;

/// Relative cutoff for singular values in the least-squares solve.
pub const PINV_RTOL: f64 = 1e-12;

/// Row-aligned source and target vectors for a lexicon.
#[derive(Debug, Clone)]
pub struct AlignedPairs {
    /// `j x D_src`
    pub source: DMatrix<f64>,
    /// `j x D_tgt`
    pub target: DMatrix<f64>,
    pub tokens: Vec<(String, String)>,
    pub source_language: String,
    pub target_language: String,
}

impl AlignedPairs {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Stacks the vectors of every lexicon pair. The lexicon must already be
/// filtered against both vocabularies.
pub fn build_aligned_pairs(
    lex: &BilingualLexicon,
    source_space: &VectorSpace,
    target_space: &VectorSpace,
) -> Result<AlignedPairs> {
    if lex.is_empty() {
        return Err(Error::Alignment(
            "at least one word pair is required".into(),
        ));
    }
    let j = lex.len();
    let mut src = Vec::with_capacity(j * source_space.dim());
    let mut tgt = Vec::with_capacity(j * target_space.dim());
    for (s, t) in lex.pairs() {
        let x = source_space.lookup(s).ok_or_else(|| {
            Error::Alignment(format!(
                "source token {s:?} not in {} space (lexicon not filtered?)",
                source_space.language()
            ))
        })?;
        let z = target_space.lookup(t).ok_or_else(|| {
            Error::Alignment(format!(
                "target token {t:?} not in {} space (lexicon not filtered?)",
                target_space.language()
            ))
        })?;
        src.extend_from_slice(x);
        tgt.extend_from_slice(z);
    }
    Ok(AlignedPairs {
        source: DMatrix::from_row_slice(j, source_space.dim(), &src),
        target: DMatrix::from_row_slice(j, target_space.dim(), &tgt),
        tokens: lex.pairs().to_vec(),
        source_language: lex.source_language.clone(),
        target_language: lex.target_language.clone(),
    })
}

/// `D_tgt x D_src` map from source vectors to target vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct TranslationMatrix {
    pub weights: DMatrix<f64>,
    pub source_language: String,
    pub target_language: String,
    pub training_pair_count: usize,
}

#[derive(Debug, Clone)]
pub struct FitResult {
    pub matrix: TranslationMatrix,
    /// `sum_i ||W x_i - z_i||^2` on the training pairs.
    pub residual: f64,
}

pub fn fit_translation_matrix(pairs: &AlignedPairs) -> Result<FitResult> {
    let x = &pairs.source;
    let z = &pairs.target;
    if x.nrows() == 0 {
        return Err(Error::Alignment(
            "at least one word pair is required".into(),
        ));
    }
    if x.nrows() != z.nrows() {
        return Err(Error::Alignment(format!(
            "{} source rows but {} target rows",
            x.nrows(),
            z.nrows()
        )));
    }
    if x.iter().chain(z.iter()).any(|v| !v.is_finite()) {
        return Err(Error::Alignment("non-finite value in aligned pairs".into()));
    }

    let svd = x.clone().svd(true, true);
    let sigma_max = svd.singular_values.max();
    if sigma_max == 0.0 {
        // X = 0: every W has the same objective; the minimum-norm one is 0.
        let weights = DMatrix::zeros(z.ncols(), x.ncols());
        return Ok(finish(pairs, weights));
    }
    let wt = svd
        .solve(z, PINV_RTOL * sigma_max)
        .map_err(|e| Error::Alignment(format!("least-squares solve failed: {e}")))?;
    if wt.iter().any(|v| !v.is_finite()) {
        return Err(Error::Alignment(
            "least-squares solve produced non-finite weights".into(),
        ));
    }
    Ok(finish(pairs, wt.transpose()))
}

fn finish(pairs: &AlignedPairs, weights: DMatrix<f64>) -> FitResult {
    let residual = (&pairs.source * weights.transpose() - &pairs.target).norm_squared();
    FitResult {
        matrix: TranslationMatrix {
            weights,
            source_language: pairs.source_language.clone(),
            target_language: pairs.target_language.clone(),
            training_pair_count: pairs.len(),
        },
        residual,
    }
}

impl TranslationMatrix {
    pub fn identity(dim: usize, language: &str) -> Self {
        TranslationMatrix {
            weights: DMatrix::identity(dim, dim),
            source_language: language.to_string(),
            target_language: language.to_string(),
            training_pair_count: 0,
        }
    }

    pub fn source_dim(&self) -> usize {
        self.weights.ncols()
    }

    pub fn target_dim(&self) -> usize {
        self.weights.nrows()
    }

    /// `W x`
    pub fn map_vector(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.source_dim(), x.len())?;
        let w = &self.weights;
        Ok((0..w.nrows())
            .map(|r| (0..w.ncols()).map(|c| w[(r, c)] * x[c]).sum())
            .collect())
    }

    /// The `k` nearest target-space neighbors of the mapped vector of `token`.
    pub fn translate_token(
        &self,
        token: &str,
        source_space: &VectorSpace,
        target_space: &VectorSpace,
        k: usize,
    ) -> Result<Vec<Neighbor>> {
        let x = source_space.lookup(token).ok_or_else(|| {
            Error::Alignment(format!(
                "token {token:?} not in {} vocabulary",
                source_space.language()
            ))
        })?;
        let mapped = self.map_vector(x)?;
        if mapped.iter().all(|v| *v == 0.0) {
            return Err(Error::Alignment(format!(
                "mapped vector of {token:?} is zero"
            )));
        }
        target_space.nearest_neighbors(&mapped, k)
    }

    /// Text layout: a `D_tgt D_src source_tag target_tag pair_count` header
    /// line followed by `D_tgt` rows of `D_src` numbers.
    pub fn write_text(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(
            out,
            "{} {} {} {} {}",
            self.target_dim(),
            self.source_dim(),
            self.source_language,
            self.target_language,
            self.training_pair_count
        )?;
        for r in 0..self.target_dim() {
            let row: Vec<String> = (0..self.source_dim())
                .map(|c| self.weights[(r, c)].to_string())
                .collect();
            writeln!(out, "{}", row.join(" "))?;
        }
        Ok(())
    }

    pub fn read_text(reader: impl BufRead, path: &Path) -> Result<Self> {
        let mut lines = reader.lines();
        let header = match lines.next() {
            Some(l) => l.map_err(|e| Error::io(path, e))?,
            None => return Err(Error::parse(path, 1, "missing header")),
        };
        let f: Vec<&str> = header.split_whitespace().collect();
        let bad = || Error::parse(path, 1, format!("malformed header {header:?}"));
        if f.len() != 5 {
            return Err(bad());
        }
        let rows: usize = f[0].parse().map_err(|_| bad())?;
        let cols: usize = f[1].parse().map_err(|_| bad())?;
        let count: usize = f[4].parse().map_err(|_| bad())?;
        if rows == 0 || cols == 0 {
            return Err(bad());
        }
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let lineno = r + 2;
            let line = match lines.next() {
                Some(l) => l.map_err(|e| Error::io(path, e))?,
                None => return Err(Error::parse(path, lineno, "missing matrix row")),
            };
            let start = data.len();
            for field in line.split_whitespace() {
                let v: f64 = field
                    .parse()
                    .map_err(|_| Error::parse(path, lineno, format!("invalid number {field:?}")))?;
                if !v.is_finite() {
                    return Err(Error::parse(path, lineno, "non-finite value"));
                }
                data.push(v);
            }
            if data.len() - start != cols {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("expected {cols} values, got {}", data.len() - start),
                ));
            }
        }
        Ok(TranslationMatrix {
            weights: DMatrix::from_row_slice(rows, cols, &data),
            source_language: f[2].to_string(),
            target_language: f[3].to_string(),
            training_pair_count: count,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_text(BufReader::new(file), path)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        self.write_text(&mut out)
            .and_then(|_| out.flush())
            .map_err(|e| Error::io(path, e))
    }
}
