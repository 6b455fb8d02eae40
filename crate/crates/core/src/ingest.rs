//! Loaders for bilingual lexicons, polarity word lists, ANEW ratings and
//! review sets, plus the vocabulary-filtering, subsetting and class-balancing
//! steps applied before any experiment.
//!
//! Loaders reject malformed rows instead of repairing them. The only place
//! data is dropped is [`filter_by_vocabulary`], which accounts for every
//! discarded pair in its [`DiscardReport`].

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use rand::seq::{index, SliceRandom};
use serde::{Deserialize, Serialize};

use crate::embedding::VectorSpace;
use crate::error::{Error, Result};
use crate::rng;

/// Ordered (source, target) translation pairs, at most one per source token.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BilingualLexicon {
    pub source_language: String,
    pub target_language: String,
    pairs: Vec<(String, String)>,
}

impl BilingualLexicon {
    pub fn new(
        source_language: impl Into<String>,
        target_language: impl Into<String>,
        pairs: Vec<(String, String)>,
    ) -> Result<Self> {
        let mut seen = HashSet::with_capacity(pairs.len());
        for (i, (s, t)) in pairs.iter().enumerate() {
            if s.is_empty() || t.is_empty() {
                return Err(Error::Ingest(format!("pair {} has an empty token", i + 1)));
            }
            if !seen.insert(s.as_str()) {
                return Err(Error::Ingest(format!("duplicate source token {s:?}")));
            }
        }
        Ok(BilingualLexicon {
            source_language: source_language.into(),
            target_language: target_language.into(),
            pairs,
        })
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Sub-lexicon holding the pairs at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> BilingualLexicon {
        BilingualLexicon {
            source_language: self.source_language.clone(),
            target_language: self.target_language.clone(),
            pairs: indices.iter().map(|&i| self.pairs[i].clone()).collect(),
        }
    }

    /// Swaps the roles of source and target.
    pub fn reversed(&self) -> Result<BilingualLexicon> {
        BilingualLexicon::new(
            self.target_language.clone(),
            self.source_language.clone(),
            self.pairs
                .iter()
                .map(|(s, t)| (t.clone(), s.clone()))
                .collect(),
        )
    }
}

/// Reads a `source<TAB>target` lexicon, one pair per line.
pub fn load_lexicon(
    path: impl AsRef<Path>,
    source_language: &str,
    target_language: &str,
) -> Result<BilingualLexicon> {
    let path = path.as_ref();
    let mut pairs = Vec::new();
    let mut first_line: HashMap<String, usize> = HashMap::new();
    for (lineno, line) in read_lines(path)? {
        if line.is_empty() {
            continue;
        }
        let Some((source, target)) = line.split_once('\t') else {
            return Err(Error::parse(path, lineno, "missing tab separator"));
        };
        if source.is_empty() || target.is_empty() {
            return Err(Error::parse(path, lineno, "empty field"));
        }
        if target.contains('\t') {
            return Err(Error::parse(path, lineno, "more than two fields"));
        }
        if let Some(first) = first_line.insert(source.to_string(), lineno) {
            return Err(Error::parse(
                path,
                lineno,
                format!("duplicate source token {source:?} (first on line {first})"),
            ));
        }
        pairs.push((source.to_string(), target.to_string()));
    }
    BilingualLexicon::new(source_language, target_language, pairs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscardReason {
    SourceMissing,
    TargetMissing,
    BothMissing,
    /// A token contains whitespace, e.g. a multi-word translation.
    MultiWord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discarded {
    pub source: String,
    pub target: String,
    pub reason: DiscardReason,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DiscardReport {
    pub discarded: Vec<Discarded>,
}

impl DiscardReport {
    pub fn len(&self) -> usize {
        self.discarded.len()
    }

    pub fn is_empty(&self) -> bool {
        self.discarded.is_empty()
    }

    pub fn count(&self, reason: DiscardReason) -> usize {
        self.discarded.iter().filter(|d| d.reason == reason).count()
    }
}

/// Keeps the pairs whose source token is in `source_space` and whose target
/// token is in `target_space`, preserving order.
pub fn filter_by_vocabulary(
    lex: &BilingualLexicon,
    source_space: &VectorSpace,
    target_space: &VectorSpace,
) -> (BilingualLexicon, DiscardReport) {
    let mut kept = Vec::with_capacity(lex.len());
    let mut report = DiscardReport::default();
    for (s, t) in &lex.pairs {
        let reason = if s.contains(char::is_whitespace) || t.contains(char::is_whitespace) {
            Some(DiscardReason::MultiWord)
        } else {
            match (source_space.contains(s), target_space.contains(t)) {
                (true, true) => None,
                (false, true) => Some(DiscardReason::SourceMissing),
                (true, false) => Some(DiscardReason::TargetMissing),
                (false, false) => Some(DiscardReason::BothMissing),
            }
        };
        match reason {
            None => kept.push((s.clone(), t.clone())),
            Some(reason) => report.discarded.push(Discarded {
                source: s.clone(),
                target: t.clone(),
                reason,
            }),
        }
    }
    let filtered = BilingualLexicon {
        source_language: lex.source_language.clone(),
        target_language: lex.target_language.clone(),
        pairs: kept,
    };
    (filtered, report)
}

/// Uniform random subset of `n` pairs without replacement, in the order drawn.
pub fn sample_lexicon(lex: &BilingualLexicon, n: usize, seed: u64) -> Result<BilingualLexicon> {
    if n == 0 {
        return Err(Error::Ingest("sample size must be positive".into()));
    }
    if n > lex.len() {
        return Err(Error::Ingest(format!(
            "cannot sample {n} pairs from a lexicon of {}",
            lex.len()
        )));
    }
    let mut rng = rng::seeded(seed);
    let picked = index::sample(&mut rng, lex.len(), n).into_vec();
    Ok(lex.select(&picked))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolarityExample {
    pub token: String,
    label: i8,
}

impl PolarityExample {
    pub fn new(token: impl Into<String>, label: i8) -> Result<Self> {
        if label != 1 && label != -1 {
            return Err(Error::Ingest(format!(
                "polarity label must be -1 or +1, got {label}"
            )));
        }
        Ok(PolarityExample {
            token: token.into(),
            label,
        })
    }

    pub fn label(&self) -> i8 {
        self.label
    }
}

/// Reads two one-token-per-line files; positives (+1) come first.
pub fn load_polarity_list(
    positive_path: impl AsRef<Path>,
    negative_path: impl AsRef<Path>,
) -> Result<Vec<PolarityExample>> {
    let read_tokens = |path: &Path| -> Result<Vec<(usize, String)>> {
        Ok(read_lines(path)?
            .into_iter()
            .map(|(n, l)| (n, l.trim().to_string()))
            .filter(|(_, l)| !l.is_empty())
            .collect())
    };
    let positive_path = positive_path.as_ref();
    let negative_path = negative_path.as_ref();
    let positives = read_tokens(positive_path)?;
    let negatives = read_tokens(negative_path)?;

    let pos_set: HashSet<&str> = positives.iter().map(|(_, t)| t.as_str()).collect();
    for (lineno, token) in &negatives {
        if pos_set.contains(token.as_str()) {
            return Err(Error::parse(
                negative_path,
                *lineno,
                format!("token {token:?} appears in both polarity lists"),
            ));
        }
    }
    let mut out = Vec::with_capacity(positives.len() + negatives.len());
    out.extend(
        positives
            .into_iter()
            .map(|(_, t)| PolarityExample { token: t, label: 1 }),
    );
    out.extend(negatives.into_iter().map(|(_, t)| PolarityExample {
        token: t,
        label: -1,
    }));
    Ok(out)
}

/// Downsamples the majority class to the minority count, then shuffles.
pub fn balance_classes(examples: &[PolarityExample], seed: u64) -> Result<Vec<PolarityExample>> {
    balance_by(examples, seed, |e| e.label > 0)
}

/// Class balancing over any two-class collection.
pub fn balance_by<T: Clone>(
    items: &[T],
    seed: u64,
    is_positive: impl Fn(&T) -> bool,
) -> Result<Vec<T>> {
    let (pos, neg): (Vec<&T>, Vec<&T>) = items.iter().partition(|e| is_positive(e));
    if pos.is_empty() || neg.is_empty() {
        return Err(Error::Ingest(format!(
            "cannot balance: {} positive and {} negative examples",
            pos.len(),
            neg.len()
        )));
    }
    let keep = pos.len().min(neg.len());
    let mut rng = rng::seeded(seed);
    let mut out: Vec<T> = Vec::with_capacity(2 * keep);
    for class in [&pos, &neg] {
        let mut picked = index::sample(&mut rng, class.len(), keep).into_vec();
        picked.sort_unstable();
        out.extend(picked.into_iter().map(|i| class[i].clone()));
    }
    out.shuffle(&mut rng);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnewRating {
    pub token: String,
    pub valence: f64,
    pub arousal: f64,
    pub dominance: f64,
}

/// The three ANEW rating scales.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AffectDimension {
    Valence,
    Arousal,
    Dominance,
}

impl AffectDimension {
    pub const ALL: [AffectDimension; 3] = [
        AffectDimension::Arousal,
        AffectDimension::Dominance,
        AffectDimension::Valence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AffectDimension::Valence => "valence",
            AffectDimension::Arousal => "arousal",
            AffectDimension::Dominance => "dominance",
        }
    }
}

impl AnewRating {
    pub fn get(&self, dim: AffectDimension) -> f64 {
        match dim {
            AffectDimension::Valence => self.valence,
            AffectDimension::Arousal => self.arousal,
            AffectDimension::Dominance => self.dominance,
        }
    }
}

pub const ANEW_HEADER: &str = "word,valence,arousal,dominance";
pub const RATING_MIN: f64 = 1.0;
pub const RATING_MAX: f64 = 9.0;

/// Reads an ANEW CSV with header `word,valence,arousal,dominance`.
pub fn load_anew(path: impl AsRef<Path>) -> Result<Vec<AnewRating>> {
    let path = path.as_ref();
    let lines = read_lines(path)?;
    let mut iter = lines.into_iter();
    match iter.next() {
        Some((_, header)) if header.trim() == ANEW_HEADER => {}
        Some((n, header)) => {
            return Err(Error::parse(
                path,
                n,
                format!("expected header {ANEW_HEADER:?}, found {header:?}"),
            ))
        }
        None => return Err(Error::parse(path, 1, "missing header")),
    }
    let mut out = Vec::new();
    for (lineno, line) in iter {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(Error::parse(
                path,
                lineno,
                format!("expected 4 columns, found {}", fields.len()),
            ));
        }
        if fields[0].is_empty() {
            return Err(Error::parse(path, lineno, "empty word"));
        }
        let mut values = [0.0; 3];
        for (slot, (name, raw)) in values
            .iter_mut()
            .zip(["valence", "arousal", "dominance"].iter().zip(&fields[1..]))
        {
            let v: f64 = raw
                .parse()
                .map_err(|_| Error::parse(path, lineno, format!("non-numeric {name} {raw:?}")))?;
            if !(RATING_MIN..=RATING_MAX).contains(&v) {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("{name} {v} outside [{RATING_MIN}, {RATING_MAX}]"),
                ));
            }
            *slot = v;
        }
        out.push(AnewRating {
            token: fields[0].to_string(),
            valence: values[0],
            arousal: values[1],
            dominance: values[2],
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReviewRecord {
    pub tokens: Vec<String>,
    pub label: u8,
}

pub const STAR_LABELS: [u8; 5] = [1, 2, 3, 4, 5];

/// Reads JSON lines of the form `{"tokens": [...], "label": 1..5}`.
pub fn load_reviews(path: impl AsRef<Path>) -> Result<Vec<ReviewRecord>> {
    let path = path.as_ref();
    let mut out = Vec::new();
    for (lineno, line) in read_lines(path)? {
        if line.trim().is_empty() {
            continue;
        }
        let record: ReviewRecord = serde_json::from_str(&line)
            .map_err(|e| Error::parse(path, lineno, format!("invalid review: {e}")))?;
        if !STAR_LABELS.contains(&record.label) {
            return Err(Error::parse(
                path,
                lineno,
                format!("label {} outside 1..5", record.label),
            ));
        }
        out.push(record);
    }
    Ok(out)
}

/// Splits on whitespace. Only meaningful for space-delimited languages;
/// other scripts must be segmented before loading.
pub fn whitespace_tokenize(text: &str) -> Vec<String> {
    text.split_whitespace().map(str::to_string).collect()
}

fn read_lines(path: &Path) -> Result<Vec<(usize, String)>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    BufReader::new(file)
        .lines()
        .enumerate()
        .map(|(i, l)| {
            l.map(|l| (i + 1, l.trim_end_matches('\r').to_string()))
                .map_err(|e| Error::io(path, e))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::io::Write;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    fn space(lang: &str, tokens: &[&str]) -> VectorSpace {
        let rows = (0..tokens.len()).map(|i| vec![1.0, i as f64]).collect();
        VectorSpace::new(lang, tokens.iter().map(|t| t.to_string()).collect(), rows).unwrap()
    }

    fn lex(pairs: &[(&str, &str)]) -> BilingualLexicon {
        BilingualLexicon::new(
            "es",
            "en",
            pairs
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn lexicon_in_file_order() {
        let f = write_tmp("perro\tdog\ngato\tcat\n");
        let l = load_lexicon(f.path(), "es", "en").unwrap();
        assert_eq!(l.pairs(), lex(&[("perro", "dog"), ("gato", "cat")]).pairs());
    }

    #[test]
    fn lexicon_duplicate_names_line_two() {
        let f = write_tmp("perro\tdog\nperro\thound\n");
        let err = load_lexicon(f.path(), "es", "en").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn lexicon_format_errors() {
        assert!(load_lexicon(write_tmp("perro dog\n").path(), "es", "en").is_err());
        assert!(load_lexicon(write_tmp("perro\t\n").path(), "es", "en").is_err());
        assert!(load_lexicon(write_tmp("\tdog\n").path(), "es", "en").is_err());
        let empty = load_lexicon(write_tmp("").path(), "es", "en").unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn filter_reports_missing_side() {
        let l = lex(&[("a", "x"), ("b", "y")]);
        let (kept, report) =
            filter_by_vocabulary(&l, &space("es", &["a"]), &space("en", &["x", "y"]));
        assert_eq!(kept.pairs(), lex(&[("a", "x")]).pairs());
        assert_eq!(report.discarded.len(), 1);
        assert_eq!(report.discarded[0].source, "b");
        assert_eq!(report.discarded[0].reason, DiscardReason::SourceMissing);
    }

    #[test]
    fn filter_full_and_empty_coverage() {
        let l = lex(&[("a", "x"), ("b", "y")]);
        let (kept, report) =
            filter_by_vocabulary(&l, &space("es", &["a", "b"]), &space("en", &["x", "y"]));
        assert_eq!(kept, l);
        assert!(report.is_empty());

        let (kept, report) = filter_by_vocabulary(&l, &space("es", &["q"]), &space("en", &["z"]));
        assert!(kept.is_empty());
        assert_eq!(report.count(DiscardReason::BothMissing), 2);
    }

    #[test]
    fn filter_drops_multiword_tokens() {
        let l = lex(&[("buen dia", "x"), ("a", "x")]);
        let (kept, report) = filter_by_vocabulary(&l, &space("es", &["a"]), &space("en", &["x"]));
        assert_eq!(kept.len(), 1);
        assert_eq!(report.count(DiscardReason::MultiWord), 1);
    }

    #[test]
    fn sample_sizes() {
        let l = lex(&[("a", "x"), ("b", "y"), ("c", "z")]);
        let all = sample_lexicon(&l, 3, 1).unwrap();
        let mut got = all.pairs().to_vec();
        got.sort();
        let mut want = l.pairs().to_vec();
        want.sort();
        assert_eq!(got, want);
        assert!(sample_lexicon(&l, 0, 1).is_err());
        assert!(sample_lexicon(&l, 4, 1).is_err());
    }

    #[test]
    fn sample_seed_dependence() {
        let pairs = (0..1000)
            .map(|i| (format!("s{i}"), format!("t{i}")))
            .collect();
        let l = BilingualLexicon::new("es", "en", pairs).unwrap();
        assert_eq!(
            sample_lexicon(&l, 10, 5).unwrap(),
            sample_lexicon(&l, 10, 5).unwrap()
        );
        assert_ne!(
            sample_lexicon(&l, 10, 5).unwrap(),
            sample_lexicon(&l, 10, 6).unwrap()
        );
    }

    #[test]
    fn polarity_lists() {
        let pos = write_tmp("good\n");
        let neg = write_tmp("bad\n");
        let list = load_polarity_list(pos.path(), neg.path()).unwrap();
        assert_eq!(
            list,
            vec![
                PolarityExample::new("good", 1).unwrap(),
                PolarityExample::new("bad", -1).unwrap()
            ]
        );

        let pos = write_tmp("good\nfine\n");
        let neg = write_tmp("fine\n");
        assert!(load_polarity_list(pos.path(), neg.path()).is_err());

        let neg = write_tmp("");
        let list = load_polarity_list(write_tmp("a\nb\n").path(), neg.path()).unwrap();
        assert!(list.iter().all(|e| e.label() == 1));
        assert!(PolarityExample::new("x", 0).is_err());
    }

    fn examples(pos: usize, neg: usize) -> Vec<PolarityExample> {
        (0..pos)
            .map(|i| PolarityExample::new(format!("p{i}"), 1).unwrap())
            .chain((0..neg).map(|i| PolarityExample::new(format!("n{i}"), -1).unwrap()))
            .collect()
    }

    #[test]
    fn balancing_counts() {
        let count = |v: &[PolarityExample], l| v.iter().filter(|e| e.label() == l).count();
        let b = balance_classes(&examples(3, 3), 0).unwrap();
        assert_eq!((b.len(), count(&b, 1), count(&b, -1)), (6, 3, 3));
        let b = balance_classes(&examples(10, 4), 0).unwrap();
        assert_eq!((b.len(), count(&b, 1), count(&b, -1)), (8, 4, 4));
        assert!(balance_classes(&examples(5, 0), 0).is_err());
    }

    proptest! {
        #[test]
        fn balance_is_subset_and_equal((pos, neg) in (1usize..30, 1usize..30), seed: u64) {
            let input = examples(pos, neg);
            let out = balance_classes(&input, seed).unwrap();
            let p = out.iter().filter(|e| e.label() == 1).count();
            prop_assert_eq!(p, out.len() - p);
            let tokens: HashSet<_> = input.iter().map(|e| &e.token).collect();
            prop_assert!(out.iter().all(|e| tokens.contains(&e.token)));
            prop_assert_eq!(out, balance_classes(&input, seed).unwrap());
        }

        #[test]
        fn filter_is_idempotent(mask in prop::collection::vec(any::<(bool, bool)>(), 1..20)) {
            let pairs: Vec<_> = (0..mask.len()).map(|i| (format!("s{i}"), format!("t{i}"))).collect();
            let l = BilingualLexicon::new("es", "en", pairs).unwrap();
            let src: Vec<String> = mask.iter().enumerate().filter(|(_, m)| m.0).map(|(i, _)| format!("s{i}")).collect();
            let tgt: Vec<String> = mask.iter().enumerate().filter(|(_, m)| m.1).map(|(i, _)| format!("t{i}")).collect();
            let mk = |lang: &str, v: Vec<String>| {
                let mut v = v;
                v.push("pad".into());
                let rows = v.iter().map(|_| vec![1.0]).collect();
                VectorSpace::new(lang, v, rows).unwrap()
            };
            let (s, t) = (mk("es", src), mk("en", tgt));
            let (once, report) = filter_by_vocabulary(&l, &s, &t);
            let (twice, report2) = filter_by_vocabulary(&once, &s, &t);
            prop_assert_eq!(&once, &twice);
            prop_assert!(report2.is_empty());
            prop_assert_eq!(once.len() + report.len(), l.len());
        }

        #[test]
        fn sample_is_reproducible_subset(n in 1usize..50, seed: u64) {
            let pairs: Vec<_> = (0..50).map(|i| (format!("s{i}"), format!("t{i}"))).collect();
            let l = BilingualLexicon::new("es", "en", pairs).unwrap();
            let a = sample_lexicon(&l, n, seed).unwrap();
            prop_assert_eq!(&a, &sample_lexicon(&l, n, seed).unwrap());
            let all: HashSet<_> = l.pairs().iter().collect();
            let uniq: HashSet<_> = a.pairs().iter().collect();
            prop_assert_eq!(uniq.len(), n);
            prop_assert!(a.pairs().iter().all(|p| all.contains(p)));
        }
    }

    #[test]
    fn anew_parsing() {
        let f = write_tmp(
            "word,valence,arousal,dominance\nbeauty,7.82,4.95,5.23\ndeath,1.61,4.59,3.47\n",
        );
        let r = load_anew(f.path()).unwrap();
        assert_eq!(r[0].valence, 7.82);
        assert_eq!(r[1].valence, 1.61);
        assert_eq!(r[1].get(AffectDimension::Dominance), 3.47);

        let f = write_tmp("word,valence,arousal,dominance\nx,9.5,5,5\n");
        let err = load_anew(f.path()).unwrap_err();
        assert!(err.to_string().contains("outside"), "{err}");
        assert!(load_anew(write_tmp("word,valence,arousal,dominance\nx,5,5\n").path()).is_err());
        assert!(
            load_anew(write_tmp("word,valence,arousal,dominance\nx,five,5,5\n").path()).is_err()
        );
        assert!(load_anew(write_tmp("word,valence,arousal\nx,5,5\n").path()).is_err());
    }

    #[test]
    fn review_parsing() {
        let f = write_tmp(
            "{\"tokens\":[\"great\",\"food\"],\"label\":5}\n{\"tokens\":[],\"label\":3}\n",
        );
        let r = load_reviews(f.path()).unwrap();
        assert_eq!(r[0].tokens.len(), 2);
        assert_eq!(r[0].label, 5);
        assert!(r[1].tokens.is_empty());

        let err = load_reviews(write_tmp("{\"tokens\":[\"x\"],\"label\":0}\n").path()).unwrap_err();
        assert!(err.to_string().contains("outside 1..5"), "{err}");
        let err = load_reviews(write_tmp("{\"tokens\":[]}\n").path()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err =
            load_reviews(write_tmp("{\"tokens\":[],\"label\":1}\n{oops\n").path()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn tokenizer_splits_on_whitespace() {
        assert_eq!(whitespace_tokenize(" great\tfood \n"), ["great", "food"]);
    }
}
