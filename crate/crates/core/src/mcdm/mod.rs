//! Multi-criteria ranking with TOPSIS and VIKOR.
//!
//! A [`DecisionMatrix`] holds one row per alternative and one column per
//! [`Criterion`]. Benefit criteria prefer larger values, cost criteria
//! smaller ones.

mod compare;
mod report;
mod topsis;
mod vikor;

use std::collections::HashSet;
use std::fmt;
use std::io::{self, BufRead, Read};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::indicators::CountryIndicators;

pub use compare::{rank_compare, RankComparison, RankDelta, Ranking};
pub use report::{write_combined_table, write_comparison, write_rank_table, RANK_COLUMNS};
pub use topsis::{topsis, topsis_with, Normalization, TopsisOptions, TopsisResult, TopsisScore};
pub use vikor::{vikor, VikorResult, VikorScore};

#[derive(Debug, Error)]
pub enum McdmError {
    #[error("decision matrix has no alternatives")]
    NoAlternatives,
    #[error("decision matrix has no criteria")]
    NoCriteria,
    #[error("row {row} has {got} values, expected {expected}")]
    RaggedRow { row: usize, got: usize, expected: usize },
    #[error("value at row {row}, criterion {criterion} is not finite")]
    NonFinite { row: usize, criterion: String },
    #[error("criterion {name}: weight {weight} outside (0, 1]")]
    BadWeight { name: String, weight: f64 },
    #[error("criterion weights sum to {0}, expected 1")]
    WeightSum(f64),
    #[error("criterion {0} has zero Euclidean norm")]
    ZeroNorm(String),
    #[error("criterion {0} is constant across alternatives")]
    ConstantColumn(String),
    #[error("every criterion is constant: alternatives are indistinguishable")]
    Indistinguishable,
    #[error("{method} needs at least {min} alternatives, got {got}")]
    TooFewAlternatives {
        method: &'static str,
        min: usize,
        got: usize,
    },
    #[error("trade-off weight v = {0} outside [0, 1]")]
    BadTradeOff(f64),
    #[error("unknown criterion {0:?}")]
    UnknownCriterion(String),
    #[error("alternative {alternative} has no value for {criterion}")]
    MissingValue { alternative: String, criterion: String },
    #[error("rankings cover different alternatives")]
    MismatchedAlternatives,
    #[error("criteria line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("IO error: {0}")]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Benefit,
    Cost,
}

impl Direction {
    pub fn flipped(self) -> Direction {
        match self {
            Direction::Benefit => Direction::Cost,
            Direction::Cost => Direction::Benefit,
        }
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "benefit" | "max" | "+" => Ok(Direction::Benefit),
            "cost" | "min" | "-" => Ok(Direction::Cost),
            other => Err(format!("direction must be benefit or cost, got {other:?}")),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Benefit => "benefit",
            Direction::Cost => "cost",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub name: String,
    pub direction: Direction,
    pub weight: f64,
}

impl Criterion {
    pub fn new(name: impl Into<String>, direction: Direction, weight: f64) -> Criterion {
        Criterion {
            name: name.into(),
            direction,
            weight,
        }
    }
}

pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionMatrix {
    alternatives: Vec<String>,
    criteria: Vec<Criterion>,
    values: Vec<Vec<f64>>,
}

impl DecisionMatrix {
    pub fn new(
        alternatives: Vec<String>,
        criteria: Vec<Criterion>,
        values: Vec<Vec<f64>>,
    ) -> Result<DecisionMatrix, McdmError> {
        if alternatives.is_empty() || values.is_empty() {
            return Err(McdmError::NoAlternatives);
        }
        if criteria.is_empty() {
            return Err(McdmError::NoCriteria);
        }
        if values.len() != alternatives.len() {
            return Err(McdmError::RaggedRow {
                row: values.len(),
                got: values.len(),
                expected: alternatives.len(),
            });
        }
        for (i, row) in values.iter().enumerate() {
            if row.len() != criteria.len() {
                return Err(McdmError::RaggedRow {
                    row: i,
                    got: row.len(),
                    expected: criteria.len(),
                });
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(McdmError::NonFinite {
                    row: i,
                    criterion: criteria[j].name.clone(),
                });
            }
        }
        for c in &criteria {
            if !(c.weight > 0.0 && c.weight <= 1.0) {
                return Err(McdmError::BadWeight {
                    name: c.name.clone(),
                    weight: c.weight,
                });
            }
        }
        let sum: f64 = criteria.iter().map(|c| c.weight).sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(McdmError::WeightSum(sum));
        }
        Ok(DecisionMatrix {
            alternatives,
            criteria,
            values,
        })
    }

    pub fn alternatives(&self) -> &[String] {
        &self.alternatives
    }

    pub fn criteria(&self) -> &[Criterion] {
        &self.criteria
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn n_alternatives(&self) -> usize {
        self.alternatives.len()
    }

    pub fn n_criteria(&self) -> usize {
        self.criteria.len()
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().map(move |r| r[j])
    }

    /// Name of the first column whose values are all equal.
    pub fn constant_column(&self) -> Option<&str> {
        (0..self.n_criteria())
            .find(|&j| {
                let first = self.values[0][j];
                self.column(j).all(|v| v == first)
            })
            .map(|j| self.criteria[j].name.as_str())
    }

    /// Errors when a column cannot be range-normalised.
    pub fn check_ranges(&self) -> Result<(), McdmError> {
        match self.constant_column() {
            Some(name) => Err(McdmError::ConstantColumn(name.to_string())),
            None => Ok(()),
        }
    }
}

/// Criteria selection, directions and weights, as read from a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriteriaConfig {
    pub criteria: Vec<Criterion>,
}

/// The indicator columns a criterion may name.
pub const INDICATOR_CRITERIA: [&str; 8] = [
    "Pub",
    "Cites",
    "CPP",
    "Std.Dev",
    "NCP",
    "Max.Cites",
    "Pub.SIS",
    "SIS",
];

impl CriteriaConfig {
    /// Equal weights over the named columns, NCP as the only cost.
    pub fn equal_weights(names: &[&str]) -> CriteriaConfig {
        let w = 1.0 / names.len() as f64;
        CriteriaConfig {
            criteria: names
                .iter()
                .map(|n| {
                    let dir = if n.eq_ignore_ascii_case("NCP") {
                        Direction::Cost
                    } else {
                        Direction::Benefit
                    };
                    Criterion::new(*n, dir, w)
                })
                .collect(),
        }
    }

    /// Eight indicator columns including Pub.SIS, weight 1/8 each.
    pub fn topsis_default() -> CriteriaConfig {
        CriteriaConfig::equal_weights(&INDICATOR_CRITERIA)
    }

    /// Seven indicator columns (no Pub.SIS), weight 1/7 each.
    pub fn vikor_default() -> CriteriaConfig {
        CriteriaConfig::equal_weights(&["Pub", "Cites", "CPP", "Std.Dev", "NCP", "Max.Cites", "SIS"])
    }

    /// Parses `name direction weight` lines. Weights that do not sum to 1
    /// are rescaled with a warning.
    pub fn parse<R: Read>(reader: R) -> Result<CriteriaConfig, McdmError> {
        let mut criteria = Vec::new();
        for (i, line) in io::BufReader::new(reader).lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| McdmError::Config { line: i + 1, message };
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(err(format!("expected `name direction weight`, got {line:?}")));
            }
            let direction = parts[1].parse().map_err(err)?;
            let weight: f64 = parts[2]
                .parse()
                .map_err(|_| err(format!("weight {:?} is not a number", parts[2])))?;
            if !(weight.is_finite() && weight > 0.0) {
                return Err(err(format!("weight must be positive, got {weight}")));
            }
            criteria.push(Criterion::new(parts[0], direction, weight));
        }
        if criteria.is_empty() {
            return Err(McdmError::NoCriteria);
        }
        let mut seen = HashSet::new();
        for c in &criteria {
            if !seen.insert(c.name.to_ascii_lowercase()) {
                return Err(McdmError::Config {
                    line: 0,
                    message: format!("criterion {} listed twice", c.name),
                });
            }
        }
        let sum: f64 = criteria.iter().map(|c| c.weight).sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            log::warn!("criteria weights sum to {sum}; rescaling to 1");
            for c in &mut criteria {
                c.weight /= sum;
            }
        }
        Ok(CriteriaConfig { criteria })
    }
}

fn indicator_value(row: &CountryIndicators, name: &str) -> Result<Option<f64>, McdmError> {
    let v = match name.to_ascii_lowercase().as_str() {
        "pub" => Some(row.publications),
        "cites" => Some(row.citations),
        "cpp" => Some(row.cpp),
        "std.dev" | "std_dev" | "stddev" => Some(row.std_dev),
        "ncp" => Some(row.ncp),
        "max.cites" | "max_cites" => Some(row.max_cites as f64),
        "pub.sis" | "pub_per_sis" => row.pub_per_sis,
        "sis" => row.sis.map(|s| s as f64),
        _ => return Err(McdmError::UnknownCriterion(name.to_string())),
    };
    Ok(v)
}

#[derive(Debug, Clone, PartialEq)]
pub enum BuildWarning {
    /// Row left out because its SIS value is absent.
    MissingSis(String),
    DuplicateAlternative(String),
}

#[derive(Debug, Clone)]
pub struct BuiltMatrix {
    pub matrix: DecisionMatrix,
    pub warnings: Vec<BuildWarning>,
}

/// Builds the decision matrix from indicator rows, in input row order.
/// Rows without an SIS value are left out with a warning.
pub fn build_matrix(rows: &[CountryIndicators], config: &CriteriaConfig) -> Result<BuiltMatrix, McdmError> {
    let mut warnings = Vec::new();
    let mut alternatives = Vec::new();
    let mut values = Vec::new();
    let mut seen = HashSet::new();
    for row in rows {
        if row.sis.is_none() {
            log::warn!("{}: no SIS value, left out of the decision matrix", row.country);
            warnings.push(BuildWarning::MissingSis(row.country.clone()));
            continue;
        }
        if !seen.insert(row.country.as_str()) {
            log::warn!("{} appears more than once", row.country);
            warnings.push(BuildWarning::DuplicateAlternative(row.country.clone()));
        }
        let mut v = Vec::with_capacity(config.criteria.len());
        for c in &config.criteria {
            v.push(
                indicator_value(row, &c.name)?.ok_or_else(|| McdmError::MissingValue {
                    alternative: row.country.clone(),
                    criterion: c.name.clone(),
                })?,
            );
        }
        alternatives.push(row.country.clone());
        values.push(v);
    }
    Ok(BuiltMatrix {
        matrix: DecisionMatrix::new(alternatives, config.criteria.clone(), values)?,
        warnings,
    })
}

/// Scores closer than this count as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

fn tie_key(x: f64, descending: bool) -> i64 {
    let k = (x / TIE_TOLERANCE).round() as i64;
    if descending {
        -k
    } else {
        k
    }
}

/// 1-based ranks from scores, best first, ties broken by input order.
pub(crate) fn ranks_by(scores: &[f64], descending: bool) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by_key(|&i| tie_key(scores[i], descending));
    let mut ranks = vec![0; scores.len()];
    for (pos, &i) in order.iter().enumerate() {
        ranks[i] = pos + 1;
    }
    ranks
}

/// Ranks where tied scores share a rank and the next distinct score takes
/// the next integer.
pub(crate) fn dense_ranks_by(scores: &[f64], descending: bool) -> Vec<usize> {
    let mut keys: Vec<i64> = scores.iter().map(|&x| tie_key(x, descending)).collect();
    let own = keys.clone();
    keys.sort_unstable();
    keys.dedup();
    own.iter()
        .map(|k| keys.binary_search(k).expect("key present") + 1)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(country: &str, sis: Option<u64>) -> CountryIndicators {
        CountryIndicators {
            country: country.into(),
            publications: 4.0,
            citations: 10.0,
            cpp: 2.5,
            std_dev: 1.0,
            degenerate_sample: false,
            ncp: 0.25,
            max_cites: 5,
            pub_per_sis: sis.map(|s| 4.0 / s as f64),
            sis,
        }
    }

    #[test]
    fn default_configs() {
        let t = CriteriaConfig::topsis_default();
        assert_eq!(t.criteria.len(), 8);
        assert!(t.criteria.iter().all(|c| (c.weight - 0.125).abs() < 1e-15));
        let v = CriteriaConfig::vikor_default();
        assert_eq!(v.criteria.len(), 7);
        let costs: Vec<_> = v
            .criteria
            .iter()
            .filter(|c| c.direction == Direction::Cost)
            .map(|c| c.name.as_str())
            .collect();
        assert_eq!(costs, vec!["NCP"]);
    }

    #[test]
    fn config_parsing_rescales_weights() {
        let c = CriteriaConfig::parse("# x\nPub benefit 2\nNCP cost 2\n".as_bytes()).unwrap();
        assert_eq!(c.criteria[0].weight, 0.5);
        assert_eq!(c.criteria[1].direction, Direction::Cost);
        assert!(CriteriaConfig::parse("Pub up 1\n".as_bytes()).is_err());
        assert!(CriteriaConfig::parse("Pub benefit -1\n".as_bytes()).is_err());
        assert!(CriteriaConfig::parse("Pub benefit 1\npub cost 1\n".as_bytes()).is_err());
        assert!(CriteriaConfig::parse("".as_bytes()).is_err());
    }

    #[test]
    fn build_matrix_skips_missing_sis_and_flags_duplicates() {
        let rows = vec![row("Chile", Some(10)), row("Peru", None), row("Chile", Some(20))];
        let built = build_matrix(&rows, &CriteriaConfig::topsis_default()).unwrap();
        assert_eq!(
            built.matrix.alternatives(),
            &["Chile".to_string(), "Chile".to_string()]
        );
        assert_eq!(built.matrix.n_criteria(), 8);
        assert_eq!(
            built.warnings,
            vec![
                BuildWarning::MissingSis("Peru".into()),
                BuildWarning::DuplicateAlternative("Chile".into())
            ]
        );
    }

    #[test]
    fn build_matrix_rejects_unknown_criteria() {
        let cfg = CriteriaConfig::equal_weights(&["Pub", "H-index"]);
        assert!(matches!(
            build_matrix(&[row("Chile", Some(1))], &cfg),
            Err(McdmError::UnknownCriterion(_))
        ));
    }

    #[test]
    fn matrix_validation() {
        let c = vec![
            Criterion::new("a", Direction::Benefit, 0.5),
            Criterion::new("b", Direction::Cost, 0.5),
        ];
        assert!(DecisionMatrix::new(vec!["x".into()], c.clone(), vec![vec![1.0]]).is_err());
        assert!(DecisionMatrix::new(vec!["x".into()], c.clone(), vec![vec![1.0, f64::NAN]]).is_err());
        let bad = vec![
            Criterion::new("a", Direction::Benefit, 0.5),
            Criterion::new("b", Direction::Cost, 0.4),
        ];
        assert!(matches!(
            DecisionMatrix::new(vec!["x".into()], bad, vec![vec![1.0, 2.0]]),
            Err(McdmError::WeightSum(_))
        ));
        let m = DecisionMatrix::new(
            vec!["x".into(), "y".into()],
            c,
            vec![vec![1.0, 2.0], vec![1.0, 3.0]],
        )
        .unwrap();
        assert_eq!(m.constant_column(), Some("a"));
        assert!(matches!(m.check_ranges(), Err(McdmError::ConstantColumn(n)) if n == "a"));
    }

    #[test]
    fn ranking_helpers() {
        assert_eq!(ranks_by(&[0.2, 0.9, 0.2, 0.5], true), vec![3, 1, 4, 2]);
        assert_eq!(ranks_by(&[0.2, 0.9, 0.2, 0.5], false), vec![1, 4, 2, 3]);
        assert_eq!(dense_ranks_by(&[0.2, 0.9, 0.2, 0.5], true), vec![3, 1, 3, 2]);
        assert_eq!(ranks_by(&[0.5, 0.5 + 1e-16, 0.5 - 1e-16], true), vec![1, 2, 3]);
    }
}
