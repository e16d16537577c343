//! Term-document matrices, tf-idf weighting and document clustering.
//!
//! Stemming is rule driven: a [`WildcardRule`] such as `priva* priva` maps
//! every token starting with `priva` onto the canonical term `priva`. When
//! several rules match, the longest pattern wins.

mod kmeans;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::{self, BufRead, Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::Corpus;

pub use kmeans::{bisecting_kmeans, kmeans, Clustering, MergeTree, TreeNode, DEFAULT_MAX_ITER};

#[derive(Debug, Error)]
pub enum TextError {
    #[error("matrix has no documents")]
    EmptyMatrix,
    #[error("k must be at least 1")]
    ZeroClusters,
    #[error("k = {k} exceeds the number of documents ({docs})")]
    TooManyClusters { k: usize, docs: usize },
    #[error("max_iter must be at least 1")]
    ZeroIterations,
    #[error("expected a raw term-frequency matrix")]
    NotRawTf,
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("rule line {line}: {message}")]
    BadRule { line: usize, message: String },
    #[error("IO error: {0}")]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    RawTf,
    Tfidf,
}

/// Dense document-by-term weights: rows are documents, columns terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermDocMatrix {
    terms: Vec<String>,
    doc_ids: Vec<String>,
    values: Vec<Vec<f64>>,
    weighting: Weighting,
}

impl TermDocMatrix {
    pub fn from_dense(
        terms: Vec<String>,
        doc_ids: Vec<String>,
        values: Vec<Vec<f64>>,
        weighting: Weighting,
    ) -> Result<TermDocMatrix, TextError> {
        if values.len() != doc_ids.len() {
            return Err(TextError::Shape(format!(
                "{} rows for {} documents",
                values.len(),
                doc_ids.len()
            )));
        }
        if let Some(bad) = values.iter().position(|r| r.len() != terms.len()) {
            return Err(TextError::Shape(format!(
                "row {bad} has {} columns, expected {}",
                values[bad].len(),
                terms.len()
            )));
        }
        if values.iter().flatten().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(TextError::Shape("weights must be finite and non-negative".into()));
        }
        if terms.iter().collect::<HashSet<_>>().len() != terms.len() {
            return Err(TextError::Shape("duplicate term".into()));
        }
        Ok(TermDocMatrix {
            terms,
            doc_ids,
            values,
            weighting,
        })
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn weighting(&self) -> Weighting {
        self.weighting
    }

    pub fn n_docs(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn term_index(&self, term: &str) -> Option<usize> {
        self.terms.iter().position(|t| t == term)
    }

    /// Weight of `term` in document `doc` (0 when the term is absent).
    pub fn get(&self, doc: usize, term: &str) -> f64 {
        self.term_index(term).map(|j| self.values[doc][j]).unwrap_or(0.0)
    }

    /// Number of documents with a non-zero weight for each term.
    pub fn document_frequencies(&self) -> Vec<usize> {
        (0..self.terms.len())
            .map(|j| self.values.iter().filter(|r| r[j] > 0.0).count())
            .collect()
    }

    pub fn scaled(&self, factor: f64) -> TermDocMatrix {
        let mut out = self.clone();
        for v in out.values.iter_mut().flatten() {
            *v *= factor;
        }
        out
    }
}

/// A prefix pattern (`priva*`) and the term it collapses onto.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WildcardRule {
    pattern: String,
    canonical: String,
}

impl WildcardRule {
    pub fn new(pattern: &str, canonical: &str) -> Result<WildcardRule, String> {
        let pattern = pattern.trim().to_lowercase();
        let canonical = canonical.trim().to_lowercase();
        if !pattern.ends_with('*') {
            return Err(format!("pattern {pattern:?} must end with '*'"));
        }
        if pattern.chars().count() < 4 {
            return Err(format!("pattern {pattern:?} is shorter than 4 characters"));
        }
        if pattern[..pattern.len() - 1].contains('*') {
            return Err(format!("pattern {pattern:?} has an inner '*'"));
        }
        if canonical.is_empty() {
            return Err("canonical term is empty".into());
        }
        Ok(WildcardRule { pattern, canonical })
    }

    pub fn pattern(&self) -> &str {
        &self.pattern
    }

    pub fn canonical(&self) -> &str {
        &self.canonical
    }

    fn prefix(&self) -> &str {
        &self.pattern[..self.pattern.len() - 1]
    }
}

/// Parses `pattern canonical` lines; `#` starts a comment.
pub fn parse_rules<R: Read>(reader: R) -> Result<Vec<WildcardRule>, TextError> {
    let mut rules = Vec::new();
    for (i, line) in io::BufReader::new(reader).lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(TextError::BadRule {
                line: i + 1,
                message: format!("expected `pattern canonical`, got {line:?}"),
            });
        }
        rules.push(
            WildcardRule::new(parts[0], parts[1])
                .map_err(|message| TextError::BadRule { line: i + 1, message })?,
        );
    }
    Ok(rules)
}

const ENGLISH_STOPWORDS: &str = include_str!("../../data/stopwords_en.txt");

#[derive(Debug, Clone, Default)]
pub struct Stopwords(HashSet<String>);

impl Stopwords {
    pub fn english() -> Stopwords {
        Stopwords::from_words(ENGLISH_STOPWORDS.lines())
    }

    pub fn none() -> Stopwords {
        Stopwords::default()
    }

    pub fn from_words<'a>(words: impl IntoIterator<Item = &'a str>) -> Stopwords {
        Stopwords(
            words
                .into_iter()
                .map(|w| w.trim().to_lowercase())
                .filter(|w| !w.is_empty() && !w.starts_with('#'))
                .collect(),
        )
    }

    /// One word per line.
    pub fn from_reader<R: Read>(reader: R) -> Result<Stopwords, TextError> {
        let mut text = String::new();
        io::BufReader::new(reader).read_to_string(&mut text)?;
        Ok(Stopwords::from_words(text.lines()))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }
}

pub const MIN_TOKEN_LEN: usize = 3;

/// Lowercases and splits on anything but letters. Hyphens and apostrophes
/// join their neighbours (`privacy-preserving` becomes `privacypreserving`).
fn raw_tokens(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !(c.is_alphabetic() || c == '-' || c == '\''))
        .map(|t| {
            t.chars()
                .filter(|c| c.is_alphabetic())
                .flat_map(char::to_lowercase)
                .collect::<String>()
        })
        .filter(|t| !t.is_empty())
}

/// Canonical term for `token` under the longest matching rule.
pub fn apply_rules<'a>(token: &'a str, rules: &'a [WildcardRule]) -> &'a str {
    rules
        .iter()
        .filter(|r| token.starts_with(r.prefix()))
        .max_by_key(|r| r.prefix().len())
        .map(|r| r.canonical())
        .unwrap_or(token)
}

/// Canonical terms of a piece of text, in order of appearance.
pub fn terms_of(text: &str, stopwords: &Stopwords, rules: &[WildcardRule]) -> Vec<String> {
    raw_tokens(text)
        .filter(|t| t.chars().count() >= MIN_TOKEN_LEN && !stopwords.contains(t))
        .map(|t| apply_rules(&t, rules).to_string())
        .collect()
}

/// Raw term frequencies over title, abstract and both keyword fields.
pub fn tokenize(corpus: &Corpus, stopwords: &Stopwords, rules: &[WildcardRule]) -> TermDocMatrix {
    let per_doc: Vec<BTreeMap<String, f64>> = corpus
        .records()
        .iter()
        .map(|r| {
            let mut text = format!("{} {}", r.title, r.abstract_text);
            for k in r.author_keywords.iter().chain(&r.indexed_keywords) {
                text.push(' ');
                text.push_str(k);
            }
            let mut tf = BTreeMap::new();
            for t in terms_of(&text, stopwords, rules) {
                *tf.entry(t).or_insert(0.0) += 1.0;
            }
            tf
        })
        .collect();
    let terms: Vec<String> = per_doc
        .iter()
        .flat_map(|d| d.keys().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let values = per_doc
        .iter()
        .map(|d| terms.iter().map(|t| d.get(t).copied().unwrap_or(0.0)).collect())
        .collect();
    TermDocMatrix {
        terms,
        doc_ids: corpus.records().iter().map(|r| r.id.clone()).collect(),
        values,
        weighting: Weighting::RawTf,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Idf {
    /// `ln(N / df)`
    #[default]
    Plain,
    /// `ln(N / (1 + df)) + 1`
    Smoothed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TfidfOptions {
    pub idf: Idf,
    /// Keep columns whose weights are all zero.
    pub retain_zero_columns: bool,
}

pub fn idf(n_docs: usize, df: usize, mode: Idf) -> f64 {
    let (n, df) = (n_docs as f64, df as f64);
    match mode {
        Idf::Plain => (n / df).ln(),
        Idf::Smoothed => (n / (1.0 + df)).ln() + 1.0,
    }
}

/// `tf(d,t) · idf(t)`. Terms present in every document get weight 0 under
/// plain idf and are pruned unless retained.
pub fn tfidf(m: &TermDocMatrix, opts: TfidfOptions) -> Result<TermDocMatrix, TextError> {
    if m.weighting != Weighting::RawTf {
        return Err(TextError::NotRawTf);
    }
    if m.n_docs() == 0 {
        return Err(TextError::EmptyMatrix);
    }
    if m.n_docs() == 1 && opts.idf == Idf::Plain {
        log::warn!("single-document corpus: every idf is ln(1) = 0");
    }
    let df = m.document_frequencies();
    let weights: Vec<f64> = df
        .iter()
        .map(|&d| if d == 0 { 0.0 } else { idf(m.n_docs(), d, opts.idf) })
        .collect();
    let mut values: Vec<Vec<f64>> = m
        .values
        .iter()
        .map(|row| {
            row.iter()
                .zip(&weights)
                .map(|(tf, w)| (tf * w).max(0.0))
                .collect()
        })
        .collect();
    let mut terms = m.terms.clone();
    if !opts.retain_zero_columns {
        let keep: Vec<bool> = (0..terms.len())
            .map(|j| values.iter().any(|r| r[j] > 0.0))
            .collect();
        terms = terms
            .into_iter()
            .zip(&keep)
            .filter(|(_, k)| **k)
            .map(|(t, _)| t)
            .collect();
        for row in &mut values {
            *row = row
                .iter()
                .zip(&keep)
                .filter(|(_, k)| **k)
                .map(|(v, _)| *v)
                .collect();
        }
    }
    Ok(TermDocMatrix {
        terms,
        doc_ids: m.doc_ids.clone(),
        values,
        weighting: Weighting::Tfidf,
    })
}

/// MatrixMarket coordinate format, 1-based, non-zero entries only.
pub fn write_matrix_market<W: Write>(m: &TermDocMatrix, mut w: W) -> io::Result<()> {
    let nnz = m.values.iter().flatten().filter(|v| **v != 0.0).count();
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(w, "% rows=documents cols=terms weighting={:?}", m.weighting)?;
    writeln!(w, "{} {} {}", m.n_docs(), m.n_terms(), nnz)?;
    for (i, row) in m.values.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if *v != 0.0 {
                writeln!(w, "{} {} {}", i + 1, j + 1, v)?;
            }
        }
    }
    Ok(())
}

/// Sidecar for [`write_matrix_market`]: `doc<TAB>index<TAB>id` and
/// `term<TAB>index<TAB>term` lines, 1-based.
pub fn write_matrix_index<W: Write>(m: &TermDocMatrix, mut w: W) -> io::Result<()> {
    for (i, d) in m.doc_ids.iter().enumerate() {
        writeln!(w, "doc\t{}\t{}", i + 1, d)?;
    }
    for (j, t) in m.terms.iter().enumerate() {
        writeln!(w, "term\t{}\t{}", j + 1, t)?;
    }
    Ok(())
}
