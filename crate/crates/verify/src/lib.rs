//! Reference data, random instance generators and brute-force oracles used
//! by the acceptance suite.

pub mod search;

use std::collections::BTreeMap;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;

use bibliorank_core::ingest::{Corpus, DocType, PublicationRecord};
use bibliorank_core::mcdm::{Criterion, DecisionMatrix, Direction};

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(name: &str) -> PathBuf {
    fixtures_dir().join(name)
}

/// Published ranking columns keyed by country.
#[derive(Debug, Clone, PartialEq)]
pub struct PublishedRow {
    pub t_s: f64,
    pub t_r: usize,
    pub v_s: f64,
    pub v_r_regret: f64,
    pub v_q: f64,
    pub v_r: usize,
}

pub fn published_table() -> BTreeMap<String, PublishedRow> {
    let mut rdr = csv::Reader::from_path(fixture("table2_published.csv")).expect("published table");
    let mut out = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec.expect("row");
        let f = |i: usize| rec[i].parse::<f64>().expect("number");
        out.insert(
            rec[0].to_string(),
            PublishedRow {
                t_s: f(1),
                t_r: rec[2].parse().expect("rank"),
                v_s: f(3),
                v_r_regret: f(4),
                v_q: f(5),
                v_r: rec[6].parse().expect("rank"),
            },
        );
    }
    out
}

/// Values from `fixtures/worksheets/hand_3x2.md`.
pub mod worksheet {
    pub const X: [[f64; 2]; 3] = [[1.0, 9.0], [5.0, 5.0], [9.0, 1.0]];

    pub mod a {
        pub const D_PLUS: [f64; 3] = [0.3866945956182654, 0.2734343708098653, 0.3866945956182654];
        pub const D_MINUS: [f64; 3] = D_PLUS;
        pub const C: [f64; 3] = [0.5, 0.5, 0.5];
        pub const S: [f64; 3] = [0.5, 0.5, 0.5];
        pub const R: [f64; 3] = [0.5, 0.25, 0.5];
        pub const Q: [f64; 3] = [0.5, 0.0, 0.5];
    }

    pub mod b {
        pub const WEIGHTS: [f64; 2] = [0.6, 0.4];
        pub const D_PLUS: [f64; 3] = [0.5576988769785874, 0.2788494384892937, 0.0];
        pub const D_MINUS: [f64; 3] = [0.0, 0.2788494384892937, 0.5576988769785874];
        pub const C: [f64; 3] = [0.0, 0.5, 1.0];
        pub const S: [f64; 3] = [1.0, 0.5, 0.0];
        pub const R: [f64; 3] = [0.6, 0.3, 0.0];
        pub const Q: [f64; 3] = [1.0, 0.5, 0.0];
    }
}

/// Random weights summing to one, each in (0, 1].
pub fn random_weights<R: Rng>(rng: &mut R, m: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..m).map(|_| rng.gen_range(0.05..1.0)).collect();
    let sum: f64 = raw.iter().sum();
    raw.iter().map(|w| w / sum).collect()
}

pub fn random_matrix<R: Rng>(rng: &mut R, n: usize, m: usize) -> DecisionMatrix {
    let weights = random_weights(rng, m);
    let criteria = weights
        .iter()
        .enumerate()
        .map(|(j, w)| {
            let d = if rng.gen_bool(0.3) {
                Direction::Cost
            } else {
                Direction::Benefit
            };
            Criterion::new(format!("c{j}"), d, *w)
        })
        .collect();
    let values = (0..n)
        .map(|_| (0..m).map(|_| rng.gen_range(0.5..100.0)).collect())
        .collect();
    let alts = (0..n).map(|i| format!("a{i}")).collect();
    DecisionMatrix::new(alts, criteria, values).expect("valid random matrix")
}

pub fn with_values(m: &DecisionMatrix, values: Vec<Vec<f64>>) -> DecisionMatrix {
    DecisionMatrix::new(m.alternatives().to_vec(), m.criteria().to_vec(), values).expect("valid matrix")
}

fn pick<R: Rng>(rng: &mut R, pool: &[String], max: usize) -> Vec<String> {
    let k = rng.gen_range(0..=max.min(pool.len()));
    let mut out: Vec<String> = pool.choose_multiple(rng, k).cloned().collect();
    // repeated entries must not count twice
    if !out.is_empty() && rng.gen_bool(0.1) {
        let dup = out[0].clone();
        out.push(dup);
    }
    out
}

/// A corpus of `n` documents drawing keywords, references and countries
/// from small pools so that overlaps are frequent.
pub fn random_corpus<R: Rng>(rng: &mut R, n: usize) -> Corpus {
    let keywords: Vec<String> = (0..12).map(|i| format!("kw{i}")).collect();
    let refs: Vec<String> = (0..25).map(|i| format!("author{i},{}", 1990 + i)).collect();
    let countries: Vec<String> = ["Chile", "Peru", "Spain", "Japan", "Kenya"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let records = (0..n)
        .map(|i| PublicationRecord {
            id: format!("d{i}"),
            title: format!("document {i}"),
            abstract_text: String::new(),
            year: rng.gen_range(2005..=2016),
            doc_type: DocType::Article,
            language: "en".into(),
            authors: vec![format!("Author {i}")],
            countries: {
                let mut c = pick(rng, &countries, 2);
                c.sort();
                c.dedup();
                c
            },
            author_keywords: pick(rng, &keywords, 5),
            indexed_keywords: Vec::new(),
            references: pick(rng, &refs, 8),
            citation_count: rng.gen_range(0..20),
        })
        .collect();
    Corpus::new(records, "random").expect("valid random corpus")
}

fn distinct(items: &[String]) -> Vec<&String> {
    let mut v: Vec<&String> = items.iter().collect();
    v.sort();
    v.dedup();
    v
}

/// Number of documents whose list `field` holds both `a` and `b`.
pub fn count_both(corpus: &Corpus, field: fn(&PublicationRecord) -> &Vec<String>, a: &str, b: &str) -> u64 {
    corpus
        .records()
        .iter()
        .filter(|r| {
            let f = field(r);
            f.iter().any(|x| x == a) && f.iter().any(|x| x == b)
        })
        .count() as u64
}

/// Number of documents whose list `field` holds `a`.
pub fn count_one(corpus: &Corpus, field: fn(&PublicationRecord) -> &Vec<String>, a: &str) -> u64 {
    corpus
        .records()
        .iter()
        .filter(|r| field(r).iter().any(|x| x == a))
        .count() as u64
}

/// Distinct references shared by two documents.
pub fn shared_references(a: &PublicationRecord, b: &PublicationRecord) -> u64 {
    distinct(&a.references)
        .into_iter()
        .filter(|r| b.references.contains(r))
        .count() as u64
}

/// Distinct references shared by the pooled reference lists of two
/// countries, over documents with at least `min_citations` citations.
pub fn shared_country_references(corpus: &Corpus, a: &str, b: &str, min_citations: u64) -> u64 {
    let pool = |c: &str| -> Vec<String> {
        corpus
            .records()
            .iter()
            .filter(|r| r.citation_count >= min_citations && r.countries.iter().any(|x| x == c))
            .flat_map(|r| r.references.iter().cloned())
            .collect()
    };
    let (pa, pb) = (pool(a), pool(b));
    distinct(&pa).into_iter().filter(|r| pb.contains(r)).count() as u64
}

pub fn keywords_of(r: &PublicationRecord) -> &Vec<String> {
    &r.author_keywords
}

pub fn references_of(r: &PublicationRecord) -> &Vec<String> {
    &r.references
}
