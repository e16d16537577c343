//! Per-country and per-author production indicators.

use std::collections::{BTreeMap, HashMap};
use std::io::{self, Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{normalize_country, Corpus};

#[derive(Debug, Error)]
pub enum IndicatorError {
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("growth rate needs end_year > start_year (got {start}..{end})")]
    BadYearRange { start: i32, end: i32 },
    #[error("no publications in {0}: growth base is undefined")]
    ZeroCount(i32),
    #[error("IO error: {0}")]
    Io(#[from] io::Error),
    #[error("malformed delimited input: {0}")]
    Csv(#[from] csv::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// How a paper with affiliations in several countries is credited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Counting {
    /// Every listed country receives the whole paper.
    #[default]
    Full,
    /// A paper with k countries adds 1/k of a publication, and 1/k of its
    /// citations, to each of them.
    Fractional,
}

/// Aggregates for one country, in the column order of the indicator table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountryIndicators {
    pub country: String,
    pub publications: f64,
    pub citations: f64,
    pub cpp: f64,
    pub std_dev: f64,
    /// Set when fewer than two papers back `std_dev`, which is then 0.
    pub degenerate_sample: bool,
    pub ncp: f64,
    pub max_cites: u64,
    pub pub_per_sis: Option<f64>,
    pub sis: Option<u64>,
}

impl CountryIndicators {
    /// Builds a row from a country's per-paper citation counts and weights
    /// (1 per paper under full counting).
    fn from_papers(country: &str, papers: &[(u64, f64)], sis: Option<u64>) -> CountryIndicators {
        let publications: f64 = papers.iter().map(|(_, w)| w).sum();
        let citations: f64 = papers.iter().map(|(c, w)| *c as f64 * w).sum();
        let uncited: f64 = papers.iter().filter(|(c, _)| *c == 0).map(|(_, w)| w).sum();
        let n = papers.len();
        let (std_dev, degenerate_sample) = if n < 2 {
            (0.0, true)
        } else {
            let mean = papers.iter().map(|(c, _)| *c as f64).sum::<f64>() / n as f64;
            let ss: f64 = papers.iter().map(|(c, _)| (*c as f64 - mean).powi(2)).sum();
            ((ss / (n - 1) as f64).sqrt(), false)
        };
        CountryIndicators {
            country: country.to_string(),
            publications,
            citations,
            cpp: citations / publications,
            std_dev,
            degenerate_sample,
            ncp: uncited / publications,
            max_cites: papers.iter().map(|(c, _)| *c).max().unwrap_or(0),
            pub_per_sis: sis.filter(|s| *s > 0).map(|s| publications / s as f64),
            sis,
        }
    }
}

/// Country name to secure-internet-server count.
pub type SisTable = BTreeMap<String, u64>;

#[derive(Debug, Clone, PartialEq)]
pub enum IndicatorWarning {
    MissingSis(String),
    NoCountry { record_id: String },
}

#[derive(Debug, Clone)]
pub struct CountryReport {
    pub rows: Vec<CountryIndicators>,
    pub warnings: Vec<IndicatorWarning>,
}

/// One row per country with at least one publication, sorted by
/// publications then citations (both descending), then name.
pub fn country_indicators(
    corpus: &Corpus,
    external: &SisTable,
    counting: Counting,
) -> Result<CountryReport, IndicatorError> {
    if corpus.is_empty() {
        return Err(IndicatorError::EmptyCorpus);
    }
    let mut warnings = Vec::new();
    let mut papers: BTreeMap<&str, Vec<(u64, f64)>> = BTreeMap::new();
    for r in corpus.records() {
        if r.countries.is_empty() {
            warnings.push(IndicatorWarning::NoCountry {
                record_id: r.id.clone(),
            });
            continue;
        }
        let w = match counting {
            Counting::Full => 1.0,
            Counting::Fractional => 1.0 / r.countries.len() as f64,
        };
        for c in &r.countries {
            papers.entry(c.as_str()).or_default().push((r.citation_count, w));
        }
    }

    let mut rows: Vec<CountryIndicators> = papers
        .iter()
        .map(|(country, list)| {
            let sis = external.get(*country).copied();
            if sis.is_none() {
                warnings.push(IndicatorWarning::MissingSis(country.to_string()));
            }
            CountryIndicators::from_papers(country, list, sis)
        })
        .collect();
    sort_rows(&mut rows);
    for w in &warnings {
        if let IndicatorWarning::MissingSis(c) = w {
            log::warn!("no SIS value for {c}; row is excluded from ranking");
        }
    }
    Ok(CountryReport { rows, warnings })
}

fn sort_rows(rows: &mut [CountryIndicators]) {
    rows.sort_by(|a, b| {
        b.publications
            .total_cmp(&a.publications)
            .then(b.citations.total_cmp(&a.citations))
            .then_with(|| a.country.cmp(&b.country))
    });
}

/// Reads a two-column `country,sis` table. A header row is optional.
pub fn read_sis<R: Read>(reader: R) -> Result<SisTable, IndicatorError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut table = SisTable::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() != 2 {
            return Err(IndicatorError::Parse {
                line: i + 1,
                message: format!("expected 2 columns, got {}", rec.len()),
            });
        }
        match rec[1].parse::<u64>() {
            Ok(v) => {
                table.insert(normalize_country(&rec[0]), v);
            }
            Err(_) if i == 0 => continue,
            Err(_) => {
                return Err(IndicatorError::Parse {
                    line: i + 1,
                    message: format!("SIS count {:?} is not a non-negative integer", &rec[1]),
                })
            }
        }
    }
    Ok(table)
}

pub const TABLE_COLUMNS: [&str; 9] = [
    "Country",
    "Pub",
    "Cites",
    "CPP",
    "Std.Dev",
    "NCP",
    "Max.Cites",
    "Pub.SIS",
    "SIS",
];

/// Display rounding used by every delimited report.
pub(crate) fn fmt3(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

fn fmt_count(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        fmt3(v)
    }
}

/// Writes rows with the indicator-table columns, rounded for display.
pub fn write_indicator_table<W: Write>(rows: &[CountryIndicators], w: W) -> Result<(), IndicatorError> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(TABLE_COLUMNS)?;
    for r in rows {
        wtr.write_record([
            r.country.clone(),
            fmt_count(r.publications),
            fmt_count(r.citations),
            fmt3(r.cpp),
            fmt3(r.std_dev),
            fmt3(r.ncp),
            r.max_cites.to_string(),
            r.pub_per_sis.map(fmt3).unwrap_or_default(),
            r.sis.map(|s| s.to_string()).unwrap_or_default(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Reads an indicator table as written by [`write_indicator_table`], taking
/// every value as given. Rows keep their file order.
pub fn read_indicator_table<R: Read>(reader: R) -> Result<Vec<CountryIndicators>, IndicatorError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let pos: HashMap<&str, usize> = headers.iter().enumerate().map(|(i, h)| (h, i)).collect();
    let missing: Vec<&str> = TABLE_COLUMNS
        .iter()
        .filter(|c| !pos.contains_key(**c))
        .copied()
        .collect();
    if !missing.is_empty() {
        return Err(IndicatorError::Parse {
            line: 1,
            message: format!("missing column(s): {}", missing.join(", ")),
        });
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let get = |c: &str| rec.get(pos[c]).unwrap_or("");
        let num = |c: &str| -> Result<f64, IndicatorError> {
            get(c).parse::<f64>().map_err(|_| IndicatorError::Parse {
                line,
                message: format!("{c}: {:?} is not a number", get(c)),
            })
        };
        let opt = |c: &str| -> Result<Option<f64>, IndicatorError> {
            if get(c).is_empty() {
                Ok(None)
            } else {
                num(c).map(Some)
            }
        };
        let sis = opt("SIS")?.map(|v| v as u64);
        rows.push(CountryIndicators {
            country: get("Country").to_string(),
            publications: num("Pub")?,
            citations: num("Cites")?,
            cpp: num("CPP")?,
            std_dev: num("Std.Dev")?,
            degenerate_sample: num("Pub")? < 2.0,
            ncp: num("NCP")?,
            max_cites: num("Max.Cites")? as u64,
            pub_per_sis: opt("Pub.SIS")?,
            sis,
        });
    }
    Ok(rows)
}

/// Publication counts per year for one subject label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YearSeries {
    pub label: String,
    pub counts: BTreeMap<i32, u64>,
}

impl YearSeries {
    pub fn new(label: impl Into<String>, counts: impl IntoIterator<Item = (i32, u64)>) -> Self {
        YearSeries {
            label: label.into(),
            counts: counts.into_iter().collect(),
        }
    }

    /// Counts every record by year, filling gaps inside the range with zeros.
    pub fn from_corpus(label: impl Into<String>, corpus: &Corpus) -> Self {
        let mut counts = BTreeMap::new();
        for r in corpus.records() {
            *counts.entry(r.year).or_insert(0) += 1;
        }
        if let (Some(&lo), Some(&hi)) = (counts.keys().next(), counts.keys().next_back()) {
            for y in lo..=hi {
                counts.entry(y).or_insert(0);
            }
        }
        YearSeries {
            label: label.into(),
            counts,
        }
    }

    pub fn count(&self, year: i32) -> u64 {
        self.counts.get(&year).copied().unwrap_or(0)
    }
}

/// Compound annual growth rate between two years, in percent.
pub fn apgr(series: &YearSeries, start_year: i32, end_year: i32) -> Result<f64, IndicatorError> {
    if end_year <= start_year {
        return Err(IndicatorError::BadYearRange {
            start: start_year,
            end: end_year,
        });
    }
    let start = series.count(start_year);
    if start == 0 {
        return Err(IndicatorError::ZeroCount(start_year));
    }
    let end = series.count(end_year);
    if end == 0 {
        return Err(IndicatorError::ZeroCount(end_year));
    }
    let span = (end_year - start_year) as f64;
    Ok(100.0 * ((end as f64 / start as f64).powf(1.0 / span) - 1.0))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorProduction {
    pub author: String,
    pub publications: usize,
    pub citations: u64,
}

/// Full counting: each co-author is credited once per paper.
pub fn author_production(corpus: &Corpus) -> Vec<AuthorProduction> {
    let mut acc: HashMap<&str, (usize, u64)> = HashMap::new();
    for r in corpus.records() {
        let mut seen = Vec::with_capacity(r.authors.len());
        for a in &r.authors {
            if seen.contains(&a.as_str()) {
                continue;
            }
            seen.push(a.as_str());
            let e = acc.entry(a.as_str()).or_default();
            e.0 += 1;
            e.1 += r.citation_count;
        }
    }
    let mut out: Vec<AuthorProduction> = acc
        .into_iter()
        .map(|(author, (publications, citations))| AuthorProduction {
            author: author.to_string(),
            publications,
            citations,
        })
        .collect();
    out.sort_by(|a, b| {
        b.publications
            .cmp(&a.publications)
            .then(b.citations.cmp(&a.citations))
            .then_with(|| a.author.cmp(&b.author))
    });
    out
}
