//! Keyword co-occurrence, bibliographic coupling and co-citation networks.
//!
//! All graphs are undirected with at most one edge per unordered pair and no
//! self-loops. Edges are stored with `a < b` and sorted, so two graphs built
//! from the same corpus compare equal regardless of record order.

mod export;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::Corpus;

pub use export::{write_dot, write_graph, write_graphml, write_pajek, GraphFormat};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("threshold must be at least 1 (got {0})")]
    InvalidThreshold(u64),
    #[error("expected a {expected:?} graph, got {got:?}")]
    WrongKind { expected: GraphKind, got: GraphKind },
    #[error("internal error: edge {a} -- {b} touches a node with zero weight")]
    ZeroNodeWeight { a: String, b: String },
    #[error("unknown graph file extension {0:?} (expected dot, graphml or net)")]
    UnknownFormat(String),
    #[error("IO error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    Cooccurrence,
    Coupling,
    Cocitation,
}

impl GraphKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GraphKind::Cooccurrence => "cooccurrence",
            GraphKind::Coupling => "coupling",
            GraphKind::Cocitation => "cocitation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub key: String,
    pub weight: f64,
    pub attrs: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub a: String,
    pub b: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedGraph {
    pub kind: GraphKind,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
}

impl WeightedGraph {
    fn from_parts(
        kind: GraphKind,
        nodes: BTreeMap<String, (f64, BTreeMap<String, String>)>,
        edges: BTreeMap<(String, String), f64>,
    ) -> WeightedGraph {
        WeightedGraph {
            kind,
            nodes: nodes
                .into_iter()
                .map(|(key, (weight, attrs))| Node { key, weight, attrs })
                .collect(),
            edges: edges
                .into_iter()
                .map(|((a, b), weight)| Edge { a, b, weight })
                .collect(),
        }
    }

    pub fn node(&self, key: &str) -> Option<&Node> {
        self.nodes
            .binary_search_by(|n| n.key.as_str().cmp(key))
            .ok()
            .map(|i| &self.nodes[i])
    }

    pub fn edge_weight(&self, a: &str, b: &str) -> Option<f64> {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        self.edges
            .binary_search_by(|e| (e.a.as_str(), e.b.as_str()).cmp(&(a, b)))
            .ok()
            .map(|i| self.edges[i].weight)
    }

    /// Dense symmetric adjacency matrix, rows and columns in node order.
    pub fn adjacency_rows(&self) -> (Vec<String>, Vec<Vec<f64>>) {
        let keys: Vec<String> = self.nodes.iter().map(|n| n.key.clone()).collect();
        let index: HashMap<&str, usize> = keys.iter().enumerate().map(|(i, k)| (k.as_str(), i)).collect();
        let mut rows = vec![vec![0.0; keys.len()]; keys.len()];
        for e in &self.edges {
            let (i, j) = (index[e.a.as_str()], index[e.b.as_str()]);
            rows[i][j] = e.weight;
            rows[j][i] = e.weight;
        }
        (keys, rows)
    }
}

/// Which keyword field feeds a co-occurrence network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KeywordSource {
    #[default]
    Author,
    Indexed,
}

fn ordered(a: &str, b: &str) -> (String, String) {
    if a < b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

/// Counts, for every unordered pair of items, the number of sets holding
/// both. Items outside `keep` are ignored.
fn pair_counts<'a, I>(sets: I, keep: &BTreeSet<&str>) -> BTreeMap<(String, String), f64>
where
    I: IntoIterator<Item = &'a BTreeSet<String>>,
{
    let mut out = BTreeMap::new();
    for set in sets {
        let items: Vec<&str> = set
            .iter()
            .map(String::as_str)
            .filter(|k| keep.contains(k))
            .collect();
        for (i, a) in items.iter().enumerate() {
            for b in &items[i + 1..] {
                *out.entry(ordered(a, b)).or_insert(0.0) += 1.0;
            }
        }
    }
    out
}

/// Node weight is the number of documents carrying the keyword; edge weight
/// the number carrying both. Keywords below `min_occurrences` are dropped
/// before edges are built.
pub fn keyword_cooccurrence(
    corpus: &Corpus,
    source: KeywordSource,
    min_occurrences: u64,
) -> Result<WeightedGraph, GraphError> {
    if min_occurrences == 0 {
        return Err(GraphError::InvalidThreshold(0));
    }
    let docs: Vec<BTreeSet<String>> = corpus
        .records()
        .iter()
        .map(|r| {
            let kws = match source {
                KeywordSource::Author => &r.author_keywords,
                KeywordSource::Indexed => &r.indexed_keywords,
            };
            kws.iter()
                .map(|k| k.trim().to_lowercase())
                .filter(|k| !k.is_empty())
                .collect()
        })
        .collect();
    let mut freq: BTreeMap<&str, u64> = BTreeMap::new();
    for d in &docs {
        for k in d {
            *freq.entry(k.as_str()).or_insert(0) += 1;
        }
    }
    let keep: BTreeSet<&str> = freq
        .iter()
        .filter(|(_, n)| **n >= min_occurrences)
        .map(|(k, _)| *k)
        .collect();
    let edges = pair_counts(&docs, &keep);
    let nodes = keep
        .iter()
        .map(|k| (k.to_string(), (freq[k] as f64, BTreeMap::new())))
        .collect();
    Ok(WeightedGraph::from_parts(GraphKind::Cooccurrence, nodes, edges))
}

/// Replaces each co-occurrence count `c_ab` by `c_ab / (s_a · s_b)`, where
/// `s` is the node occurrence count. Nodes and the edge set are unchanged.
pub fn association_strength(graph: &WeightedGraph) -> Result<WeightedGraph, GraphError> {
    if graph.kind != GraphKind::Cooccurrence {
        return Err(GraphError::WrongKind {
            expected: GraphKind::Cooccurrence,
            got: graph.kind,
        });
    }
    let weight: HashMap<&str, f64> = graph.nodes.iter().map(|n| (n.key.as_str(), n.weight)).collect();
    let mut out = graph.clone();
    for e in &mut out.edges {
        let (sa, sb) = (weight[e.a.as_str()], weight[e.b.as_str()]);
        if sa <= 0.0 || sb <= 0.0 {
            return Err(GraphError::ZeroNodeWeight {
                a: e.a.clone(),
                b: e.b.clone(),
            });
        }
        e.weight /= sa * sb;
    }
    Ok(out)
}

/// Reference keys match on lowercase, whitespace-collapsed text.
pub fn normalize_reference(raw: &str) -> String {
    raw.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

fn reference_set(refs: &[String]) -> BTreeSet<String> {
    refs.iter()
        .map(|r| normalize_reference(r))
        .filter(|r| !r.is_empty())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingUnit {
    #[default]
    Document,
    Country,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CouplingOptions {
    pub unit: CouplingUnit,
    pub min_weight: u64,
    /// Documents cited fewer times are left out before coupling.
    pub min_doc_citations: u64,
}

impl Default for CouplingOptions {
    fn default() -> Self {
        CouplingOptions {
            unit: CouplingUnit::Document,
            min_weight: 1,
            min_doc_citations: 0,
        }
    }
}

/// Edge weight is the number of shared references. In country mode the
/// references of every document of a country are pooled first.
pub fn bibliographic_coupling(
    corpus: &Corpus,
    unit: CouplingUnit,
    min_weight: u64,
) -> Result<WeightedGraph, GraphError> {
    bibliographic_coupling_with(
        corpus,
        &CouplingOptions {
            unit,
            min_weight,
            ..CouplingOptions::default()
        },
    )
}

pub fn bibliographic_coupling_with(
    corpus: &Corpus,
    opts: &CouplingOptions,
) -> Result<WeightedGraph, GraphError> {
    if opts.min_weight == 0 {
        return Err(GraphError::InvalidThreshold(0));
    }
    let docs = corpus
        .records()
        .iter()
        .filter(|r| r.citation_count >= opts.min_doc_citations);

    // pooled references, node attributes, document count
    type Unit = (BTreeSet<String>, BTreeMap<String, String>, u64);
    let mut units: BTreeMap<String, Unit> = BTreeMap::new();
    for r in docs {
        let refs = reference_set(&r.references);
        match opts.unit {
            CouplingUnit::Document => {
                let attrs = BTreeMap::from([
                    ("title".to_string(), r.title.clone()),
                    ("year".to_string(), r.year.to_string()),
                    ("citations".to_string(), r.citation_count.to_string()),
                ]);
                units.insert(r.id.clone(), (refs, attrs, 1));
            }
            CouplingUnit::Country => {
                for c in &r.countries {
                    let e = units.entry(c.clone()).or_default();
                    e.0.extend(refs.iter().cloned());
                    e.2 += 1;
                }
            }
        }
    }

    let keys: Vec<&String> = units.keys().collect();
    let mut edges = BTreeMap::new();
    for (i, a) in keys.iter().enumerate() {
        for b in &keys[i + 1..] {
            let shared = units[*a].0.intersection(&units[*b].0).count() as u64;
            if shared >= opts.min_weight {
                edges.insert(ordered(a, b), shared as f64);
            }
        }
    }
    let nodes = units
        .into_iter()
        .map(|(k, (refs, mut attrs, docs))| {
            attrs.insert("references".into(), refs.len().to_string());
            let weight = match opts.unit {
                CouplingUnit::Document => refs.len() as f64,
                CouplingUnit::Country => docs as f64,
            };
            (k, (weight, attrs))
        })
        .collect();
    Ok(WeightedGraph::from_parts(GraphKind::Coupling, nodes, edges))
}

/// Nodes are references cited by at least `min_cocitations` documents; edge
/// weight is the number of documents citing both ends, kept when it reaches
/// `min_cocitations`.
pub fn cocitation(corpus: &Corpus, min_cocitations: u64) -> Result<WeightedGraph, GraphError> {
    if min_cocitations == 0 {
        return Err(GraphError::InvalidThreshold(0));
    }
    let docs: Vec<BTreeSet<String>> = corpus
        .records()
        .iter()
        .map(|r| reference_set(&r.references))
        .collect();
    let mut freq: BTreeMap<&str, u64> = BTreeMap::new();
    for d in &docs {
        for r in d {
            *freq.entry(r.as_str()).or_insert(0) += 1;
        }
    }
    let keep: BTreeSet<&str> = freq
        .iter()
        .filter(|(_, n)| **n >= min_cocitations)
        .map(|(k, _)| *k)
        .collect();
    let mut edges = pair_counts(&docs, &keep);
    edges.retain(|_, w| *w >= min_cocitations as f64);
    let nodes = keep
        .iter()
        .map(|k| (k.to_string(), (freq[k] as f64, BTreeMap::new())))
        .collect();
    Ok(WeightedGraph::from_parts(GraphKind::Cocitation, nodes, edges))
}

/// Each document's citations divided by the mean citations of its
/// publication year (0 when that mean is 0), averaged per country.
///
/// With `exclude_uncited` set, zero-cited documents are dropped before the
/// year means are taken.
pub fn avg_normalized_citations(corpus: &Corpus, exclude_uncited: bool) -> BTreeMap<String, f64> {
    let docs: Vec<_> = corpus
        .records()
        .iter()
        .filter(|r| !exclude_uncited || r.citation_count > 0)
        .collect();
    let mut by_year: HashMap<i32, (u64, u64)> = HashMap::new();
    for r in &docs {
        let e = by_year.entry(r.year).or_default();
        e.0 += r.citation_count;
        e.1 += 1;
    }
    let mut acc: BTreeMap<String, (f64, u64)> = BTreeMap::new();
    for r in &docs {
        let (sum, n) = by_year[&r.year];
        let normalized = if sum == 0 {
            0.0
        } else {
            r.citation_count as f64 * n as f64 / sum as f64
        };
        for c in &r.countries {
            let e = acc.entry(c.clone()).or_default();
            e.0 += normalized;
            e.1 += 1;
        }
    }
    acc.into_iter().map(|(c, (s, n))| (c, s / n as f64)).collect()
}

/// Attaches a `cluster` attribute to every node.
pub fn annotate_clusters(graph: &mut WeightedGraph, assignments: &[usize]) {
    for (n, c) in graph.nodes.iter_mut().zip(assignments) {
        n.attrs.insert("cluster".into(), c.to_string());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{DocType, PublicationRecord};

    fn doc(id: &str, kws: &[&str], refs: &[&str]) -> PublicationRecord {
        PublicationRecord {
            id: id.into(),
            title: format!("t{id}"),
            abstract_text: String::new(),
            year: 2015,
            doc_type: DocType::Article,
            language: "en".into(),
            authors: vec!["A".into()],
            countries: vec!["Chile".into()],
            author_keywords: kws.iter().map(|s| s.to_string()).collect(),
            indexed_keywords: vec![],
            references: refs.iter().map(|s| s.to_string()).collect(),
            citation_count: 1,
        }
    }

    fn corpus(docs: Vec<PublicationRecord>) -> Corpus {
        Corpus::new(docs, "t").unwrap()
    }

    #[test]
    fn cooccurrence_counts_documents() {
        let c = corpus(vec![
            doc("1", &["privacy", "big data"], &[]),
            doc("2", &["big data", "privacy"], &[]),
        ]);
        let g = keyword_cooccurrence(&c, KeywordSource::Author, 1).unwrap();
        assert_eq!(g.edge_weight("privacy", "big data"), Some(2.0));
        assert_eq!(g.node("privacy").unwrap().weight, 2.0);
        assert_eq!(g.edges.len(), 1);
    }

    #[test]
    fn disjoint_keywords_have_no_edges() {
        let c = corpus(vec![doc("1", &["a"], &[]), doc("2", &["b"], &[])]);
        let g = keyword_cooccurrence(&c, KeywordSource::Author, 1).unwrap();
        assert_eq!(g.nodes.len(), 2);
        assert!(g.edges.is_empty());
    }

    #[test]
    fn min_occurrences_prunes_before_edges() {
        let c = corpus(vec![doc("1", &["a", "b"], &[]), doc("2", &["a", "c"], &[])]);
        let g = keyword_cooccurrence(&c, KeywordSource::Author, 2).unwrap();
        assert_eq!(g.nodes.len(), 1);
        assert!(g.edges.is_empty());
        assert!(keyword_cooccurrence(&c, KeywordSource::Author, 0).is_err());
    }

    #[test]
    fn keyword_sources_are_separate() {
        let mut d = doc("1", &["a", "b"], &[]);
        d.indexed_keywords = vec!["x".into(), "y".into()];
        let c = corpus(vec![d]);
        let g = keyword_cooccurrence(&c, KeywordSource::Indexed, 1).unwrap();
        assert_eq!(g.edge_weight("x", "y"), Some(1.0));
        assert!(g.node("a").is_none());
    }

    #[test]
    fn association_strength_examples() {
        let c = corpus(vec![
            doc("1", &["p", "q"], &[]),
            doc("2", &["p", "q"], &[]),
            doc("3", &["z"], &[]),
        ]);
        let g = keyword_cooccurrence(&c, KeywordSource::Author, 1).unwrap();
        let a = association_strength(&g).unwrap();
        assert_eq!(a.edge_weight("p", "q"), Some(0.5));
        assert_eq!(a.node("z"), g.node("z"));

        let table_scale = WeightedGraph {
            kind: GraphKind::Cooccurrence,
            nodes: vec![
                Node {
                    key: "big data".into(),
                    weight: 41.0,
                    attrs: BTreeMap::new(),
                },
                Node {
                    key: "privacy".into(),
                    weight: 61.0,
                    attrs: BTreeMap::new(),
                },
            ],
            edges: vec![Edge {
                a: "big data".into(),
                b: "privacy".into(),
                weight: 6.0,
            }],
        };
        let w = association_strength(&table_scale).unwrap().edges[0].weight;
        assert!((w - 6.0 / 2501.0).abs() < 1e-15);
        assert!((w - 0.0023990).abs() < 5e-8);
    }

    #[test]
    fn association_strength_rejects_other_kinds() {
        let c = corpus(vec![doc("1", &[], &["r"])]);
        let g = cocitation(&c, 1).unwrap();
        assert!(matches!(
            association_strength(&g),
            Err(GraphError::WrongKind { .. })
        ));
    }

    #[test]
    fn coupling_examples() {
        let c = corpus(vec![
            doc("d1", &[], &["r1", "r2", "r3"]),
            doc("d2", &[], &["r2", "r3"]),
            doc("d3", &[], &["r3"]),
            doc("d4", &[], &["r9"]),
        ]);
        let g = bibliographic_coupling(&c, CouplingUnit::Document, 1).unwrap();
        assert_eq!(g.edge_weight("d1", "d2"), Some(2.0));
        assert_eq!(g.edge_weight("d1", "d3"), Some(1.0));
        assert_eq!(g.edge_weight("d2", "d3"), Some(1.0));
        assert_eq!(g.edge_weight("d1", "d4"), None);
        assert_eq!(g.edges.len(), 3);
        let g2 = bibliographic_coupling(&c, CouplingUnit::Document, 2).unwrap();
        assert_eq!(g2.edges.len(), 1);
    }

    #[test]
    fn coupling_by_country_pools_references() {
        let mut a = doc("1", &[], &["r1"]);
        a.countries = vec!["Chile".into()];
        let mut b = doc("2", &[], &["r2"]);
        b.countries = vec!["Chile".into()];
        let mut c = doc("3", &[], &["R1 ", "r2"]);
        c.countries = vec!["Peru".into()];
        c.citation_count = 0;
        let corpus = corpus(vec![a, b, c]);
        let g = bibliographic_coupling(&corpus, CouplingUnit::Country, 1).unwrap();
        assert_eq!(g.edge_weight("Chile", "Peru"), Some(2.0));
        let filtered = bibliographic_coupling_with(
            &corpus,
            &CouplingOptions {
                unit: CouplingUnit::Country,
                min_weight: 1,
                min_doc_citations: 1,
            },
        )
        .unwrap();
        assert!(filtered.node("Peru").is_none());
    }

    #[test]
    fn cocitation_examples() {
        let same = corpus(vec![
            doc("1", &[], &["r1", "r2"]),
            doc("2", &[], &["r1", "r2"]),
            doc("3", &[], &["r1", "r2"]),
        ]);
        let g = cocitation(&same, 3).unwrap();
        assert_eq!(g.edges.len(), 1);
        assert_eq!(g.edge_weight("r1", "r2"), Some(3.0));
        assert!(cocitation(&same, 4).unwrap().edges.is_empty());

        let c = corpus(vec![
            doc("1", &[], &["r1", "r2"]),
            doc("2", &[], &["r1", "r2"]),
            doc("3", &[], &["r1", "r3"]),
        ]);
        let g = cocitation(&c, 1).unwrap();
        assert_eq!(g.edge_weight("r1", "r2"), Some(2.0));
        assert_eq!(g.edge_weight("r1", "r3"), Some(1.0));
        assert_eq!(g.edge_weight("r2", "r3"), None);
    }

    #[test]
    fn normalized_citations_examples() {
        let mut a = doc("1", &[], &[]);
        a.citation_count = 0;
        let mut b = doc("2", &[], &[]);
        b.citation_count = 20;
        let scores = avg_normalized_citations(&corpus(vec![a.clone(), b.clone()]), false);
        assert_eq!(scores["Chile"], 1.0);

        let mut c = doc("3", &[], &[]);
        c.countries = vec!["Peru".into()];
        c.citation_count = 20;
        b.countries = vec!["Oman".into()];
        let eq = avg_normalized_citations(&corpus(vec![b, c]), false);
        assert!(eq.values().all(|v| *v == 1.0));

        let only_cited = avg_normalized_citations(&corpus(vec![a.clone(), doc("4", &[], &[])]), true);
        assert_eq!(only_cited["Chile"], 1.0);
        let mut z = doc("5", &[], &[]);
        z.citation_count = 0;
        let zero = avg_normalized_citations(&corpus(vec![a, z]), false);
        assert_eq!(zero["Chile"], 0.0);
    }

    #[test]
    fn adjacency_is_symmetric() {
        let c = corpus(vec![doc("1", &["a", "b", "c"], &[]), doc("2", &["a", "b"], &[])]);
        let g = keyword_cooccurrence(&c, KeywordSource::Author, 1).unwrap();
        let (keys, rows) = g.adjacency_rows();
        assert_eq!(keys, vec!["a", "b", "c"]);
        assert_eq!(rows[0][1], 2.0);
        assert_eq!(rows[1][0], 2.0);
        assert_eq!(rows[2][2], 0.0);
    }
}
