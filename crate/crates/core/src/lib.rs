//! Bibliometric decision support: ingest exported publication records,
//! aggregate per-country indicators, build citation and keyword networks,
//! mine document text, and rank alternatives with TOPSIS and VIKOR.

pub mod graphs;
pub mod indicators;
pub mod ingest;
pub mod mcdm;
pub mod textmine;

pub use graphs::{GraphKind, WeightedGraph};
pub use indicators::{Counting, CountryIndicators, YearSeries};
pub use ingest::{Corpus, Exclusion, ExclusionReason, PublicationRecord, Schema};
pub use mcdm::{CriteriaConfig, Criterion, DecisionMatrix, Direction, TopsisResult, VikorResult};
pub use textmine::{Clustering, TermDocMatrix, WildcardRule};
