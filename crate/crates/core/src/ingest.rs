//! Publication-record ingest.
//!
//! Records arrive as comma-separated text (RFC 4180 quoting) with one record
//! per row. Multi-valued cells (authors, countries, keywords, references) are
//! split on an intra-cell separator, `;` unless the schema says otherwise.
//! Rows that fail validation are never dropped silently: each one lands in the
//! exclusion report together with its row number and a reason code.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;
use std::time::SystemTime;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot open {path}: {source}")]
    Open { path: String, source: io::Error },
    #[error("IO error: {0}")]
    Io(#[from] io::Error),
    #[error("malformed delimited input: {0}")]
    Csv(#[from] csv::Error),
    #[error("schema line {line}: {message}")]
    Schema { line: usize, message: String },
    #[error("header is missing mapped column(s): {}", .0.join(", "))]
    HeaderMismatch(Vec<String>),
    #[error("zero valid rows in {source_name} ({} excluded)", .exclusions.len())]
    ZeroValidRows {
        source_name: String,
        exclusions: Vec<Exclusion>,
    },
    #[error("duplicate record id {0:?}")]
    DuplicateId(String),
    #[error("invalid record {id:?}: {reason}")]
    InvalidRecord { id: String, reason: ExclusionReason },
    #[error("corpus line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DocType {
    Article,
    ConferencePaper,
    Other,
}

impl DocType {
    pub fn parse(raw: &str) -> DocType {
        let s = raw.trim().to_lowercase().replace(['_', '-'], " ");
        match s.as_str() {
            "article" | "ar" => DocType::Article,
            "conference paper" | "cp" | "conference review" | "cr" => DocType::ConferencePaper,
            _ => DocType::Other,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DocType::Article => "article",
            DocType::ConferencePaper => "conference_paper",
            DocType::Other => "other",
        }
    }
}

/// One bibliographic entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PublicationRecord {
    pub id: String,
    pub title: String,
    #[serde(rename = "abstract")]
    pub abstract_text: String,
    pub year: i32,
    pub doc_type: DocType,
    /// ISO 639-1 code.
    pub language: String,
    pub authors: Vec<String>,
    pub countries: Vec<String>,
    pub author_keywords: Vec<String>,
    pub indexed_keywords: Vec<String>,
    pub references: Vec<String>,
    pub citation_count: u64,
}

pub const MIN_YEAR: i32 = 1900;
pub const MAX_YEAR: i32 = 2100;

impl PublicationRecord {
    /// Checks the per-record invariants, returning the first violated one.
    pub fn validate(&self) -> Result<(), ExclusionReason> {
        if self.id.trim().is_empty() {
            return Err(ExclusionReason::MissingId);
        }
        if self.title.trim().is_empty() {
            return Err(ExclusionReason::MissingTitle);
        }
        if self.authors.is_empty() {
            return Err(ExclusionReason::NoAuthors);
        }
        if !(MIN_YEAR..=MAX_YEAR).contains(&self.year) {
            return Err(ExclusionReason::BadYear);
        }
        if self.countries.iter().any(|c| c.is_empty() || c.trim() != c) {
            return Err(ExclusionReason::BadCountry);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExclusionReason {
    MalformedRow,
    MissingId,
    DuplicateId,
    MissingTitle,
    NoAuthors,
    BadYear,
    BadCitationCount,
    BadCountry,
    /// Collapsed into another record by [`dedupe`].
    Redundant,
}

impl ExclusionReason {
    pub fn as_str(self) -> &'static str {
        match self {
            ExclusionReason::MalformedRow => "malformed_row",
            ExclusionReason::MissingId => "missing_id",
            ExclusionReason::DuplicateId => "duplicate_id",
            ExclusionReason::MissingTitle => "missing_title",
            ExclusionReason::NoAuthors => "no_authors",
            ExclusionReason::BadYear => "bad_year",
            ExclusionReason::BadCitationCount => "bad_citation_count",
            ExclusionReason::BadCountry => "bad_country",
            ExclusionReason::Redundant => "redundant",
        }
    }
}

impl fmt::Display for ExclusionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An input row (or record) that did not make it into the corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exclusion {
    pub id: String,
    /// 1-based data row; `None` for exclusions made after parsing.
    pub row: Option<usize>,
    pub reason: ExclusionReason,
}

#[derive(Debug, Clone)]
pub struct Provenance {
    pub source: String,
    pub ingested_at: SystemTime,
}

/// Validated, duplicate-free set of records.
///
/// Equality compares records only; provenance is metadata about the run.
#[derive(Debug, Clone)]
pub struct Corpus {
    records: Vec<PublicationRecord>,
    provenance: Provenance,
}

impl PartialEq for Corpus {
    fn eq(&self, other: &Self) -> bool {
        self.records == other.records
    }
}

impl Corpus {
    pub fn new(records: Vec<PublicationRecord>, source: impl Into<String>) -> Result<Corpus, IngestError> {
        let mut seen = HashSet::new();
        for r in &records {
            r.validate().map_err(|reason| IngestError::InvalidRecord {
                id: r.id.clone(),
                reason,
            })?;
            if !seen.insert(r.id.as_str()) {
                return Err(IngestError::DuplicateId(r.id.clone()));
            }
        }
        Ok(Corpus {
            records,
            provenance: Provenance {
                source: source.into(),
                ingested_at: SystemTime::now(),
            },
        })
    }

    pub fn records(&self) -> &[PublicationRecord] {
        &self.records
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&PublicationRecord> {
        self.records.iter().find(|r| r.id == id)
    }

    pub fn into_records(self) -> Vec<PublicationRecord> {
        self.records
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Field {
    Id,
    Title,
    Abstract,
    Year,
    DocType,
    Language,
    Authors,
    Countries,
    AuthorKeywords,
    IndexedKeywords,
    References,
    CitationCount,
}

impl Field {
    pub const ALL: [Field; 12] = [
        Field::Id,
        Field::Title,
        Field::Abstract,
        Field::Year,
        Field::DocType,
        Field::Language,
        Field::Authors,
        Field::Countries,
        Field::AuthorKeywords,
        Field::IndexedKeywords,
        Field::References,
        Field::CitationCount,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Field::Id => "id",
            Field::Title => "title",
            Field::Abstract => "abstract",
            Field::Year => "year",
            Field::DocType => "doc_type",
            Field::Language => "language",
            Field::Authors => "authors",
            Field::Countries => "countries",
            Field::AuthorKeywords => "author_keywords",
            Field::IndexedKeywords => "indexed_keywords",
            Field::References => "references",
            Field::CitationCount => "citation_count",
        }
    }

    fn required(self) -> bool {
        matches!(
            self,
            Field::Id | Field::Title | Field::Year | Field::Authors | Field::CitationCount
        )
    }
}

impl FromStr for Field {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Field::ALL
            .iter()
            .copied()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| format!("unknown field {s:?}"))
    }
}

/// Column mapping from record fields to header names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    columns: BTreeMap<Field, String>,
    separator: char,
}

impl Default for Schema {
    fn default() -> Self {
        Schema::identity()
    }
}

impl Schema {
    /// Every field read from a column of the same name. This is the layout
    /// [`write_csv`] produces.
    pub fn identity() -> Schema {
        Schema {
            columns: Field::ALL.iter().map(|f| (*f, f.as_str().to_string())).collect(),
            separator: ';',
        }
    }

    pub fn separator(&self) -> char {
        self.separator
    }

    pub fn column(&self, field: Field) -> Option<&str> {
        self.columns.get(&field).map(String::as_str)
    }

    /// Parses a `field=Column Name` mapping. `#` starts a comment line and
    /// the special key `separator` sets the intra-cell separator.
    pub fn parse(text: &str) -> Result<Schema, IngestError> {
        let mut columns = BTreeMap::new();
        let mut separator = ';';
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| IngestError::Schema { line: i + 1, message };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, got {line:?}")))?;
            let key = key.trim();
            let value = value.trim();
            if key == "separator" {
                let mut chars = value.chars();
                separator = match (chars.next(), chars.next()) {
                    (Some(c), None) if c != ',' && c != '"' => c,
                    _ => return Err(err(format!("separator must be one character, got {value:?}"))),
                };
                continue;
            }
            let field: Field = key.parse().map_err(err)?;
            if value.is_empty() {
                return Err(err(format!("empty column name for {key}")));
            }
            if columns.insert(field, value.to_string()).is_some() {
                return Err(err(format!("field {key} mapped twice")));
            }
        }
        let missing: Vec<_> = Field::ALL
            .iter()
            .filter(|f| f.required() && !columns.contains_key(f))
            .map(|f| f.as_str())
            .collect();
        if !missing.is_empty() {
            return Err(IngestError::Schema {
                line: 0,
                message: format!("required field(s) not mapped: {}", missing.join(", ")),
            });
        }
        Ok(Schema { columns, separator })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Schema, IngestError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| IngestError::Open {
            path: path.display().to_string(),
            source,
        })?;
        Schema::parse(&text)
    }
}

/// Result of a successful ingest run.
#[derive(Debug, Clone)]
pub struct Ingested {
    pub corpus: Corpus,
    pub exclusions: Vec<Exclusion>,
    /// Number of data rows read, excluding the header.
    pub rows: usize,
}

pub fn parse_corpus(path: impl AsRef<Path>, schema: &Schema) -> Result<Ingested, IngestError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| IngestError::Open {
        path: path.display().to_string(),
        source,
    })?;
    parse_reader(file, &path.display().to_string(), schema)
}

pub fn parse_reader<R: Read>(reader: R, source_name: &str, schema: &Schema) -> Result<Ingested, IngestError> {
    let mut rdr = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::None)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let position: HashMap<&str, usize> = headers.iter().enumerate().map(|(i, h)| (h.trim(), i)).collect();

    let mut index = BTreeMap::new();
    let mut missing = Vec::new();
    for (field, column) in &schema.columns {
        match position.get(column.as_str()) {
            Some(i) => {
                index.insert(*field, *i);
            }
            None => missing.push(column.clone()),
        }
    }
    if !missing.is_empty() {
        return Err(IngestError::HeaderMismatch(missing));
    }

    let mut records = Vec::new();
    let mut exclusions = Vec::new();
    let mut seen = HashSet::new();
    let mut rows = 0;
    for (i, row) in rdr.records().enumerate() {
        let row_no = i + 1;
        rows += 1;
        let row = match row {
            Ok(r) => r,
            Err(e) if matches!(e.kind(), csv::ErrorKind::Utf8 { .. }) => {
                exclusions.push(Exclusion {
                    id: String::new(),
                    row: Some(row_no),
                    reason: ExclusionReason::MalformedRow,
                });
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let id = index
            .get(&Field::Id)
            .and_then(|i| row.get(*i))
            .unwrap_or("")
            .trim()
            .to_string();
        if row.len() != headers.len() {
            exclusions.push(Exclusion {
                id,
                row: Some(row_no),
                reason: ExclusionReason::MalformedRow,
            });
            continue;
        }
        match record_from_row(&row, &index, schema.separator) {
            Ok(rec) => {
                if !seen.insert(rec.id.clone()) {
                    exclusions.push(Exclusion {
                        id,
                        row: Some(row_no),
                        reason: ExclusionReason::DuplicateId,
                    });
                } else {
                    records.push(rec);
                }
            }
            Err(reason) => exclusions.push(Exclusion {
                id,
                row: Some(row_no),
                reason,
            }),
        }
    }

    if records.is_empty() {
        return Err(IngestError::ZeroValidRows {
            source_name: source_name.to_string(),
            exclusions,
        });
    }
    for e in &exclusions {
        log::warn!(
            "{source_name}: excluded row {} ({}): {}",
            e.row.unwrap_or(0),
            e.id,
            e.reason
        );
    }
    Ok(Ingested {
        corpus: Corpus {
            records,
            provenance: Provenance {
                source: source_name.to_string(),
                ingested_at: SystemTime::now(),
            },
        },
        exclusions,
        rows,
    })
}

fn record_from_row(
    row: &csv::StringRecord,
    index: &BTreeMap<Field, usize>,
    separator: char,
) -> Result<PublicationRecord, ExclusionReason> {
    let cell = |f: Field| index.get(&f).and_then(|i| row.get(*i)).unwrap_or("").trim();
    let list = |f: Field| split_multi(cell(f), separator);

    let year = cell(Field::Year)
        .parse::<i32>()
        .map_err(|_| ExclusionReason::BadYear)?;
    let citation_count = match cell(Field::CitationCount) {
        "" => 0,
        s => s.parse::<u64>().map_err(|_| ExclusionReason::BadCitationCount)?,
    };
    let language = if index.contains_key(&Field::Language) {
        normalize_language(cell(Field::Language))
    } else {
        "en".to_string()
    };
    let mut countries: Vec<String> = Vec::new();
    for c in list(Field::Countries).iter().map(|c| normalize_country(c)) {
        if !countries.contains(&c) {
            countries.push(c);
        }
    }
    let rec = PublicationRecord {
        id: cell(Field::Id).to_string(),
        title: cell(Field::Title).to_string(),
        abstract_text: cell(Field::Abstract).to_string(),
        year,
        doc_type: DocType::parse(cell(Field::DocType)),
        language,
        authors: list(Field::Authors),
        countries,
        author_keywords: list(Field::AuthorKeywords)
            .iter()
            .map(|k| normalize_keyword(k))
            .collect(),
        indexed_keywords: list(Field::IndexedKeywords)
            .iter()
            .map(|k| normalize_keyword(k))
            .collect(),
        references: list(Field::References),
        citation_count,
    };
    rec.validate()?;
    Ok(rec)
}

fn split_multi(cell: &str, separator: char) -> Vec<String> {
    cell.split(separator)
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

fn collapse_whitespace(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Trims, collapses whitespace and title-cases each word. Short all-caps
/// words (`USA`, `UK`) are kept as acronyms.
pub fn normalize_country(raw: &str) -> String {
    collapse_whitespace(raw)
        .split(' ')
        .map(|w| {
            let upper = w.chars().all(|c| !c.is_lowercase());
            if upper && w.chars().count() <= 3 && w.chars().any(char::is_alphabetic) {
                return w.to_string();
            }
            let mut chars = w.chars();
            match chars.next() {
                Some(first) => first
                    .to_uppercase()
                    .chain(chars.flat_map(char::to_lowercase))
                    .collect(),
                None => String::new(),
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn normalize_keyword(raw: &str) -> String {
    raw.trim().to_lowercase()
}

/// Lowercase, punctuation stripped, whitespace collapsed.
pub fn normalize_title(raw: &str) -> String {
    let cleaned: String = raw
        .chars()
        .map(|c| if c.is_alphanumeric() { c } else { ' ' })
        .flat_map(char::to_lowercase)
        .collect();
    collapse_whitespace(&cleaned)
}

fn normalize_language(raw: &str) -> String {
    let s = raw.trim().to_lowercase();
    let code = match s.as_str() {
        "" => "und",
        "english" => "en",
        "chinese" => "zh",
        "spanish" => "es",
        "portuguese" => "pt",
        "german" => "de",
        "french" => "fr",
        "italian" => "it",
        "japanese" => "ja",
        "korean" => "ko",
        "russian" => "ru",
        other => other,
    };
    code.to_string()
}

/// Collapses records sharing normalized title, year and first author,
/// keeping the most cited one (the earliest on ties) at the position of the
/// group's first occurrence.
pub fn dedupe(corpus: &Corpus) -> (Corpus, Vec<Exclusion>) {
    let key = |r: &PublicationRecord| {
        (
            normalize_title(&r.title),
            r.year,
            r.authors
                .first()
                .map(|a| collapse_whitespace(a).to_lowercase())
                .unwrap_or_default(),
        )
    };
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut by_key: HashMap<_, usize> = HashMap::new();
    for (i, r) in corpus.records.iter().enumerate() {
        let g = *by_key.entry(key(r)).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(i);
    }

    let mut records = Vec::with_capacity(groups.len());
    let mut removed = Vec::new();
    for members in groups {
        let keep = members
            .iter()
            .copied()
            .reduce(|best, i| {
                if corpus.records[i].citation_count > corpus.records[best].citation_count {
                    i
                } else {
                    best
                }
            })
            .expect("groups are non-empty");
        records.push(corpus.records[keep].clone());
        removed.extend(members.into_iter().filter(|&i| i != keep).map(|i| Exclusion {
            id: corpus.records[i].id.clone(),
            row: None,
            reason: ExclusionReason::Redundant,
        }));
    }
    (
        Corpus {
            records,
            provenance: corpus.provenance.clone(),
        },
        removed,
    )
}

/// Writes the canonical corpus serialization: one JSON object per line.
pub fn write_ndjson<W: Write>(corpus: &Corpus, mut w: W) -> Result<(), IngestError> {
    for r in &corpus.records {
        serde_json::to_writer(&mut w, r).map_err(|e| IngestError::Io(e.into()))?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_ndjson<R: Read>(reader: R, source_name: &str) -> Result<Corpus, IngestError> {
    let mut records = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: PublicationRecord =
            serde_json::from_str(&line).map_err(|source| IngestError::Json { line: i + 1, source })?;
        records.push(rec);
    }
    if records.is_empty() {
        return Err(IngestError::ZeroValidRows {
            source_name: source_name.to_string(),
            exclusions: Vec::new(),
        });
    }
    Corpus::new(records, source_name)
}

pub fn read_ndjson_path(path: impl AsRef<Path>) -> Result<Corpus, IngestError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| IngestError::Open {
        path: path.display().to_string(),
        source,
    })?;
    read_ndjson(file, &path.display().to_string())
}

/// Writes the corpus as delimited text readable with [`Schema::identity`].
pub fn write_csv<W: Write>(corpus: &Corpus, w: W) -> Result<(), IngestError> {
    let sep = Schema::identity().separator.to_string();
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(Field::ALL.iter().map(|f| f.as_str()))?;
    for r in &corpus.records {
        wtr.write_record([
            r.id.clone(),
            r.title.clone(),
            r.abstract_text.clone(),
            r.year.to_string(),
            r.doc_type.as_str().to_string(),
            r.language.clone(),
            r.authors.join(&sep),
            r.countries.join(&sep),
            r.author_keywords.join(&sep),
            r.indexed_keywords.join(&sep),
            r.references.join(&sep),
            r.citation_count.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Writes the exclusion report as `id,row,reason`.
pub fn write_exclusions<W: Write>(exclusions: &[Exclusion], w: W) -> Result<(), IngestError> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["id", "row", "reason"])?;
    for e in exclusions {
        wtr.write_record([
            e.id.as_str(),
            &e.row.map(|r| r.to_string()).unwrap_or_default(),
            e.reason.as_str(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "id,title,abstract,year,doc_type,language,authors,countries,author_keywords,indexed_keywords,references,citation_count\n";

    fn ingest(body: &str) -> Result<Ingested, IngestError> {
        parse_reader(format!("{HEADER}{body}").as_bytes(), "test", &Schema::identity())
    }

    pub(crate) fn record(id: &str, title: &str, year: i32, author: &str, cites: u64) -> PublicationRecord {
        PublicationRecord {
            id: id.into(),
            title: title.into(),
            abstract_text: String::new(),
            year,
            doc_type: DocType::Article,
            language: "en".into(),
            authors: vec![author.into()],
            countries: vec!["Brazil".into()],
            author_keywords: vec![],
            indexed_keywords: vec![],
            references: vec![],
            citation_count: cites,
        }
    }

    #[test]
    fn parses_multi_valued_cells() {
        let got = ingest(
            "a1,\"Big data, privacy\",Some text,2015,Article,English,Liu Y.; Chen X.,united states;  CHINA ,PRIVACY; Big Data,,\"Canny,2002; Weiser,1991\",12\n",
        )
        .unwrap();
        let r = &got.corpus.records()[0];
        assert_eq!(r.title, "Big data, privacy");
        assert_eq!(r.authors, vec!["Liu Y.", "Chen X."]);
        assert_eq!(r.countries, vec!["United States", "China"]);
        assert_eq!(r.author_keywords, vec!["privacy", "big data"]);
        assert!(r.indexed_keywords.is_empty());
        assert_eq!(r.references, vec!["Canny,2002", "Weiser,1991"]);
        assert_eq!(r.language, "en");
        assert_eq!(r.doc_type, DocType::Article);
        assert_eq!(r.citation_count, 12);
        assert!(got.exclusions.is_empty());
    }

    #[test]
    fn empty_file_is_zero_valid_rows() {
        let err = ingest("").unwrap_err();
        assert!(matches!(err, IngestError::ZeroValidRows { ref exclusions, .. } if exclusions.is_empty()));
        assert!(err.to_string().contains("zero valid rows"));
    }

    #[test]
    fn single_row_without_authors_is_reported() {
        match ingest("a1,Title,,2015,Article,English,,Brazil,,,,3\n").unwrap_err() {
            IngestError::ZeroValidRows { exclusions, .. } => {
                assert_eq!(
                    exclusions,
                    vec![Exclusion {
                        id: "a1".into(),
                        row: Some(1),
                        reason: ExclusionReason::NoAuthors
                    }]
                );
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_rows_land_in_the_report() {
        let got = ingest(concat!(
            "a1,Title,,2015,Article,English,Liu Y.,Brazil,,,,3\n",
            "a2,Title 2,,1850,Article,English,Liu Y.,Brazil,,,,3\n",
            "a3,Title 3,,2015,Article,English,Liu Y.,Brazil,,,,-1\n",
            "a1,Title 4,,2015,Article,English,Liu Y.,Brazil,,,,3\n",
            "a5,short row\n",
            ",Title 6,,2015,Article,English,Liu Y.,Brazil,,,,3\n",
        ))
        .unwrap();
        assert_eq!(got.corpus.len(), 1);
        assert_eq!(got.rows, 6);
        let reasons: Vec<_> = got
            .exclusions
            .iter()
            .map(|e| (e.row.unwrap(), e.reason))
            .collect();
        assert_eq!(
            reasons,
            vec![
                (2, ExclusionReason::BadYear),
                (3, ExclusionReason::BadCitationCount),
                (4, ExclusionReason::DuplicateId),
                (5, ExclusionReason::MalformedRow),
                (6, ExclusionReason::MissingId),
            ]
        );
        assert_eq!(got.rows, got.corpus.len() + got.exclusions.len());
    }

    #[test]
    fn header_mismatch_names_missing_columns() {
        let schema =
            Schema::parse("id=EID\ntitle=Title\nyear=Year\nauthors=Authors\ncitation_count=Cited by\n")
                .unwrap();
        let err = parse_reader("EID,Title,Year,Authors\n".as_bytes(), "t", &schema).unwrap_err();
        match err {
            IngestError::HeaderMismatch(cols) => assert_eq!(cols, vec!["Cited by"]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn schema_errors() {
        assert!(Schema::parse("title=Title").is_err());
        assert!(Schema::parse("bogus=X").is_err());
        assert!(Schema::parse("id=A\nid=B").is_err());
        assert!(Schema::parse("separator=;;").is_err());
        let s = Schema::parse("# comment\nid=A\ntitle=B\nyear=C\nauthors=D\ncitation_count=E\nseparator=|\n")
            .unwrap();
        assert_eq!(s.separator(), '|');
        assert_eq!(s.column(Field::Countries), None);
    }

    #[test]
    fn missing_file_is_an_error() {
        let err = parse_corpus("/nonexistent/records.csv", &Schema::identity()).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/records.csv"));
    }

    #[test]
    fn dedupe_two_identical_records() {
        let c = Corpus::new(
            vec![
                record("a", "Same Title", 2015, "Liu Y.", 1),
                record("b", "Same Title", 2015, "Liu Y.", 1),
            ],
            "t",
        )
        .unwrap();
        let (d, report) = dedupe(&c);
        assert_eq!(d.len(), 1);
        assert_eq!(d.records()[0].id, "a");
        assert_eq!(report.len(), 1);
        assert_eq!(report[0].reason, ExclusionReason::Redundant);
    }

    #[test]
    fn dedupe_identity_without_duplicates() {
        let c = Corpus::new(
            vec![
                record("a", "One", 2015, "Liu Y.", 1),
                record("b", "One", 2016, "Liu Y.", 1),
                record("c", "One", 2015, "Ma J.", 1),
            ],
            "t",
        )
        .unwrap();
        let (d, report) = dedupe(&c);
        assert_eq!(d, c);
        assert!(report.is_empty());
    }

    #[test]
    fn dedupe_keeps_most_cited() {
        let c = Corpus::new(
            vec![
                record("50", "Other", 2014, "Ma J.", 9),
                record("51", "Privacy in Big Data: a survey", 2015, "Liu Y.", 3),
                record("52", "privacy in big data -- A Survey!", 2015, "liu  y.", 5),
            ],
            "t",
        )
        .unwrap();
        let (d, report) = dedupe(&c);
        assert_eq!(d.len(), 2);
        assert_eq!(d.records()[1].id, "52");
        assert_eq!(d.records()[1].citation_count, 5);
        assert_eq!(report[0].id, "51");
    }

    #[test]
    fn normalizers() {
        assert_eq!(normalize_country("  united   STATES "), "United States");
        assert_eq!(normalize_country("USA"), "USA");
        assert_eq!(normalize_keyword(" Big Data "), "big data");
        assert_eq!(
            normalize_title("Big-Data: Privacy,  Now!"),
            "big data privacy now"
        );
        assert_eq!(DocType::parse("Conference Paper"), DocType::ConferencePaper);
        assert_eq!(DocType::parse("Review"), DocType::Other);
    }

    #[test]
    fn corpus_rejects_duplicate_ids() {
        let err = Corpus::new(
            vec![record("a", "x", 2015, "A", 0), record("a", "y", 2015, "B", 0)],
            "t",
        )
        .unwrap_err();
        assert!(matches!(err, IngestError::DuplicateId(id) if id == "a"));
    }

    #[test]
    fn exclusion_report_format() {
        let mut out = Vec::new();
        write_exclusions(
            &[Exclusion {
                id: "a1".into(),
                row: Some(3),
                reason: ExclusionReason::NoAuthors,
            }],
            &mut out,
        )
        .unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "id,row,reason\na1,3,no_authors\n"
        );
    }
}
