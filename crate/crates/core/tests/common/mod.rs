#![allow(dead_code)]

use bibliorank_core::ingest::DocType;
use bibliorank_core::{Corpus, PublicationRecord};
use proptest::collection::vec;
use proptest::prelude::*;

pub const COUNTRIES: [&str; 6] = ["Brazil", "China", "India", "Spain", "UK", "United States"];

fn word() -> impl Strategy<Value = String> {
    "[a-z]{2,8}"
}

fn doc_type() -> impl Strategy<Value = DocType> {
    prop_oneof![
        Just(DocType::Article),
        Just(DocType::ConferencePaper),
        Just(DocType::Other)
    ]
}

fn distinct(items: Vec<String>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for i in items {
        if !out.contains(&i) {
            out.push(i);
        }
    }
    out
}

pub fn record(id: usize) -> impl Strategy<Value = PublicationRecord> {
    (
        "[A-Z][a-zA-Z ,\"']{0,30}[a-z]",
        "[a-z ,.]{0,40}",
        1990i32..2020,
        doc_type(),
        prop::sample::select(vec!["en", "zh", "es"]),
        vec("[A-Z][a-z]{1,8} [A-Z]\\.", 1..4),
        prop::sample::subsequence(COUNTRIES.to_vec(), 0..3),
        vec(word(), 0..5),
        vec(word(), 0..3),
        vec("r[0-9]{1,2}", 0..8),
        0u64..200,
    )
        .prop_map(
            move |(title, abs, year, doc_type, lang, authors, countries, kw, ikw, refs, cites)| {
                PublicationRecord {
                    id: format!("doc{id}"),
                    title,
                    abstract_text: abs.trim().to_string(),
                    year,
                    doc_type,
                    language: lang.to_string(),
                    authors,
                    countries: countries.into_iter().map(str::to_string).collect(),
                    author_keywords: distinct(kw),
                    indexed_keywords: distinct(ikw),
                    references: distinct(refs),
                    citation_count: cites,
                }
            },
        )
}

pub fn records(max: usize) -> impl Strategy<Value = Vec<PublicationRecord>> {
    (1..=max).prop_flat_map(|n| (0..n).map(record).collect::<Vec<_>>())
}

pub fn corpus(max: usize) -> impl Strategy<Value = Corpus> {
    records(max).prop_map(|r| Corpus::new(r, "generated").expect("valid records"))
}
