//! Monolingual word-embedding spaces and cosine nearest-neighbor retrieval.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{check_dim, Error, Result};

/// Vocabulary plus one dense vector per token, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorSpace {
    language: String,
    dim: usize,
    vocab: Vec<String>,
    data: Vec<f64>,
    norms: Vec<f64>,
    index: HashMap<String, usize>,
}

/// A retrieved token together with its cosine similarity to the query.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Neighbor {
    pub token: String,
    pub similarity: f64,
}

impl VectorSpace {
    /// Builds a space from parallel token and row lists.
    ///
    /// Rejects empty vocabularies, duplicate tokens, ragged or non-finite rows
    /// and zero-norm rows (a zero vector has no cosine).
    pub fn new(
        language: impl Into<String>,
        vocab: Vec<String>,
        rows: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if vocab.len() != rows.len() {
            return Err(Error::Embedding(format!(
                "{} tokens but {} vectors",
                vocab.len(),
                rows.len()
            )));
        }
        let dim = rows.first().map(Vec::len).unwrap_or(0);
        let mut data = Vec::with_capacity(vocab.len() * dim);
        for row in &rows {
            check_dim(dim, row.len())?;
            data.extend_from_slice(row);
        }
        Self::from_flat(language, vocab, dim, data)
    }

    pub fn from_flat(
        language: impl Into<String>,
        vocab: Vec<String>,
        dim: usize,
        data: Vec<f64>,
    ) -> Result<Self> {
        if vocab.is_empty() {
            return Err(Error::Embedding("empty vocabulary".into()));
        }
        if dim == 0 {
            return Err(Error::Embedding("dimension must be positive".into()));
        }
        check_dim(vocab.len() * dim, data.len())?;
        let mut index = HashMap::with_capacity(vocab.len());
        let mut norms = Vec::with_capacity(vocab.len());
        for (i, token) in vocab.iter().enumerate() {
            if index.insert(token.clone(), i).is_some() {
                return Err(Error::Embedding(format!("duplicate token {token:?}")));
            }
            let row = &data[i * dim..(i + 1) * dim];
            if let Some(v) = row.iter().find(|v| !v.is_finite()) {
                return Err(Error::Embedding(format!(
                    "non-finite value {v} in vector for {token:?}"
                )));
            }
            let norm = norm(row);
            if norm == 0.0 {
                return Err(Error::Embedding(format!("zero-norm vector for {token:?}")));
            }
            norms.push(norm);
        }
        Ok(VectorSpace {
            language: language.into(),
            dim,
            vocab,
            data,
            norms,
            index,
        })
    }

    pub fn language(&self) -> &str {
        &self.language
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vocab.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vocab.is_empty()
    }

    pub fn vocab(&self) -> &[String] {
        &self.vocab
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// The vector for `token`, or `None` when it is out of vocabulary.
    pub fn lookup(&self, token: &str) -> Option<&[f64]> {
        self.index_of(token).map(|i| self.row(i))
    }

    /// The `k` tokens whose vectors have the highest cosine similarity to
    /// `query`, best first. Equal similarities are ordered by row index.
    pub fn nearest_neighbors(&self, query: &[f64], k: usize) -> Result<Vec<Neighbor>> {
        check_dim(self.dim, query.len())?;
        if k == 0 {
            return Err(Error::Embedding("k must be positive".into()));
        }
        if k > self.len() {
            return Err(Error::Embedding(format!(
                "k = {k} exceeds vocabulary size {}",
                self.len()
            )));
        }
        let qnorm = norm(query);
        if qnorm == 0.0 || !qnorm.is_finite() {
            return Err(Error::Embedding(
                "query vector has zero or non-finite norm".into(),
            ));
        }

        // min-heap on candidate quality, so the root is the weakest kept entry
        let mut heap: BinaryHeap<Reverse<Candidate>> = BinaryHeap::with_capacity(k + 1);
        for i in 0..self.len() {
            let sim = dot(self.row(i), query) / (self.norms[i] * qnorm);
            let cand = Candidate { sim, row: i };
            if heap.len() < k {
                heap.push(Reverse(cand));
            } else if let Some(Reverse(worst)) = heap.peek() {
                if cand > *worst {
                    heap.pop();
                    heap.push(Reverse(cand));
                }
            }
        }
        let mut best: Vec<Candidate> = heap.into_iter().map(|Reverse(c)| c).collect();
        best.sort_by(|a, b| b.cmp(a));
        Ok(best
            .into_iter()
            .map(|c| Neighbor {
                token: self.vocab[c.row].clone(),
                similarity: c.sim.clamp(-1.0, 1.0),
            })
            .collect())
    }

    /// Reads the word2vec text format: a `<count> <dim>` header line, then one
    /// token per line followed by `dim` numbers.
    pub fn load_word2vec_text(path: impl AsRef<Path>, language: &str) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_word2vec_text(BufReader::new(file), path, language)
    }

    pub fn read_word2vec_text(reader: impl BufRead, path: &Path, language: &str) -> Result<Self> {
        let mut lines = reader.lines();
        let header = match lines.next() {
            Some(line) => line.map_err(|e| Error::io(path, e))?,
            None => return Err(Error::parse(path, 1, "missing header")),
        };
        let fields: Vec<&str> = header.split_whitespace().collect();
        let (count, dim) = match fields.as_slice() {
            [c, d] => match (c.parse::<usize>(), d.parse::<usize>()) {
                (Ok(c), Ok(d)) => (c, d),
                _ => {
                    return Err(Error::parse(
                        path,
                        1,
                        format!("malformed header {header:?}"),
                    ))
                }
            },
            _ => {
                return Err(Error::parse(
                    path,
                    1,
                    format!("malformed header {header:?}"),
                ))
            }
        };
        if count == 0 {
            return Err(Error::parse(path, 1, "empty vocabulary"));
        }
        if dim == 0 {
            return Err(Error::parse(path, 1, "dimension must be positive"));
        }

        let mut vocab = Vec::with_capacity(count);
        let mut data = Vec::with_capacity(count * dim);
        let mut seen: HashMap<String, usize> = HashMap::with_capacity(count);
        for (offset, line) in lines.enumerate() {
            let lineno = offset + 2;
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            if vocab.len() == count {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("more than the {count} entries declared in the header"),
                ));
            }
            let mut parts = line.split_whitespace();
            let token = parts.next().unwrap_or_default().to_string();
            let start = data.len();
            for field in parts {
                let v: f64 = field
                    .parse()
                    .map_err(|_| Error::parse(path, lineno, format!("invalid number {field:?}")))?;
                if !v.is_finite() {
                    return Err(Error::parse(
                        path,
                        lineno,
                        format!("non-finite value {field:?}"),
                    ));
                }
                data.push(v);
            }
            let got = data.len() - start;
            if got != dim {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("dimension mismatch for {token:?}: expected {dim}, got {got}"),
                ));
            }
            if let Some(first) = seen.insert(token.clone(), lineno) {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("duplicate token {token:?} (first seen on line {first})"),
                ));
            }
            if data[start..].iter().all(|v| *v == 0.0) {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("zero-norm vector for {token:?}"),
                ));
            }
            vocab.push(token);
        }
        if vocab.len() != count {
            return Err(Error::parse(
                path,
                1,
                format!(
                    "header declares {count} entries but file has {}",
                    vocab.len()
                ),
            ));
        }
        Self::from_flat(language, vocab, dim, data)
    }

    /// Writes the word2vec text format. Values use the shortest decimal form
    /// that parses back to the identical `f64`.
    pub fn write_word2vec_text(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "{} {}", self.len(), self.dim)?;
        for (i, token) in self.vocab.iter().enumerate() {
            out.write_all(token.as_bytes())?;
            for v in self.row(i) {
                write!(out, " {v}")?;
            }
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn save_word2vec_text(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        self.write_word2vec_text(&mut out)
            .and_then(|_| out.flush())
            .map_err(|e| Error::io(path, e))
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    sim: f64,
    row: usize,
}

// Higher similarity is better; on ties the lower row index is better.
impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sim
            .total_cmp(&other.sim)
            .then_with(|| other.row.cmp(&self.row))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
