use serde::{Deserialize, Serialize};

use super::{dense_ranks_by, ranks_by, DecisionMatrix, Direction, McdmError};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Root-sum-square per column.
    #[default]
    Vector,
    /// (x - min) / (max - min) per column.
    MinMax,
}

impl std::str::FromStr for Normalization {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "vector" => Ok(Normalization::Vector),
            "minmax" => Ok(Normalization::MinMax),
            other => Err(format!("normalization must be vector or min-max, got {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TopsisOptions {
    pub normalization: Normalization,
    /// With one alternative, report C = 1 instead of failing.
    pub single_alternative_is_ideal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopsisScore {
    pub alternative: String,
    pub closeness: f64,
    pub d_plus: f64,
    pub d_minus: f64,
    pub rank: usize,
    pub dense_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopsisResult {
    pub normalization: Normalization,
    /// In matrix row order.
    pub scores: Vec<TopsisScore>,
}

impl TopsisResult {
    pub fn closeness(&self) -> Vec<f64> {
        self.scores.iter().map(|s| s.closeness).collect()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.scores.iter().map(|s| s.rank).collect()
    }

    pub fn best(&self) -> &TopsisScore {
        self.scores
            .iter()
            .find(|s| s.rank == 1)
            .expect("non-empty result")
    }
}

pub fn topsis(m: &DecisionMatrix) -> Result<TopsisResult, McdmError> {
    topsis_with(m, TopsisOptions::default())
}

pub fn topsis_with(m: &DecisionMatrix, opts: TopsisOptions) -> Result<TopsisResult, McdmError> {
    let n = m.n_alternatives();
    let k = m.n_criteria();

    if n == 1 {
        if !opts.single_alternative_is_ideal {
            return Err(McdmError::TooFewAlternatives {
                method: "TOPSIS",
                min: 2,
                got: 1,
            });
        }
        return Ok(TopsisResult {
            normalization: opts.normalization,
            scores: vec![TopsisScore {
                alternative: m.alternatives()[0].clone(),
                closeness: 1.0,
                d_plus: 0.0,
                d_minus: 0.0,
                rank: 1,
                dense_rank: 1,
            }],
        });
    }

    let mut weighted = vec![vec![0.0; k]; n];
    for (j, c) in m.criteria().iter().enumerate() {
        let col: Vec<f64> = m.column(j).collect();
        let normalized: Vec<f64> = match opts.normalization {
            Normalization::Vector => {
                let norm = col.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm == 0.0 {
                    return Err(McdmError::ZeroNorm(c.name.clone()));
                }
                col.iter().map(|x| x / norm).collect()
            }
            Normalization::MinMax => {
                let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                if hi == lo {
                    return Err(McdmError::ConstantColumn(c.name.clone()));
                }
                col.iter().map(|x| (x - lo) / (hi - lo)).collect()
            }
        };
        for (i, r) in normalized.into_iter().enumerate() {
            weighted[i][j] = c.weight * r;
        }
    }

    let mut ideal = vec![0.0; k];
    let mut anti = vec![0.0; k];
    for (j, c) in m.criteria().iter().enumerate() {
        let lo = weighted.iter().map(|r| r[j]).fold(f64::INFINITY, f64::min);
        let hi = weighted.iter().map(|r| r[j]).fold(f64::NEG_INFINITY, f64::max);
        (ideal[j], anti[j]) = match c.direction {
            Direction::Benefit => (hi, lo),
            Direction::Cost => (lo, hi),
        };
    }
    if ideal == anti {
        return Err(McdmError::Indistinguishable);
    }

    let dist = |row: &[f64], p: &[f64]| -> f64 {
        row.iter()
            .zip(p)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    };
    let mut d_plus = Vec::with_capacity(n);
    let mut d_minus = Vec::with_capacity(n);
    let mut closeness = Vec::with_capacity(n);
    for row in &weighted {
        let dp = dist(row, &ideal);
        let dm = dist(row, &anti);
        d_plus.push(dp);
        d_minus.push(dm);
        closeness.push(dm / (dp + dm));
    }

    let ranks = ranks_by(&closeness, true);
    let dense = dense_ranks_by(&closeness, true);
    let scores = (0..n)
        .map(|i| TopsisScore {
            alternative: m.alternatives()[i].clone(),
            closeness: closeness[i],
            d_plus: d_plus[i],
            d_minus: d_minus[i],
            rank: ranks[i],
            dense_rank: dense[i],
        })
        .collect();
    Ok(TopsisResult {
        normalization: opts.normalization,
        scores,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcdm::Criterion;

    fn matrix(values: Vec<Vec<f64>>, dirs: &[Direction]) -> DecisionMatrix {
        let w = 1.0 / dirs.len() as f64;
        let criteria = dirs
            .iter()
            .enumerate()
            .map(|(j, d)| Criterion::new(format!("c{j}"), *d, w))
            .collect();
        let alts = (0..values.len()).map(|i| format!("a{i}")).collect();
        DecisionMatrix::new(alts, criteria, values).unwrap()
    }

    #[test]
    fn two_alternatives_one_criterion() {
        let m = matrix(vec![vec![10.0], vec![5.0]], &[Direction::Benefit]);
        let r = topsis(&m).unwrap();
        assert_eq!(r.closeness(), vec![1.0, 0.0]);
        assert_eq!(r.ranks(), vec![1, 2]);
    }

    #[test]
    fn cost_criterion_reverses_preference() {
        let m = matrix(vec![vec![10.0], vec![5.0]], &[Direction::Cost]);
        assert_eq!(topsis(&m).unwrap().ranks(), vec![2, 1]);
    }

    #[test]
    fn symmetric_instance() {
        let m = matrix(
            vec![vec![1.0, 9.0], vec![5.0, 5.0], vec![9.0, 1.0]],
            &[Direction::Benefit, Direction::Benefit],
        );
        let r = topsis(&m).unwrap();
        // every row sits exactly as far from the ideal as from the anti-ideal
        for c in r.closeness() {
            assert!((c - 0.5).abs() < 1e-12);
        }
        assert_eq!(r.ranks(), vec![1, 2, 3]);
        assert!(r.scores.iter().all(|s| s.dense_rank == 1));
    }

    #[test]
    fn single_alternative_needs_flag() {
        let m = matrix(vec![vec![3.0, 4.0]], &[Direction::Benefit, Direction::Cost]);
        assert!(matches!(topsis(&m), Err(McdmError::TooFewAlternatives { .. })));
        let opts = TopsisOptions {
            single_alternative_is_ideal: true,
            ..Default::default()
        };
        assert_eq!(topsis_with(&m, opts).unwrap().closeness(), vec![1.0]);
    }

    #[test]
    fn degenerate_columns() {
        let m = matrix(
            vec![vec![0.0, 1.0], vec![0.0, 2.0]],
            &[Direction::Benefit, Direction::Benefit],
        );
        assert!(matches!(topsis(&m), Err(McdmError::ZeroNorm(n)) if n == "c0"));
        let m = matrix(
            vec![vec![1.0, 2.0], vec![1.0, 2.0]],
            &[Direction::Benefit, Direction::Benefit],
        );
        assert!(matches!(topsis(&m), Err(McdmError::Indistinguishable)));
    }

    #[test]
    fn min_max_matches_on_single_criterion() {
        let m = matrix(vec![vec![2.0], vec![4.0], vec![8.0]], &[Direction::Benefit]);
        let opts = TopsisOptions {
            normalization: Normalization::MinMax,
            ..Default::default()
        };
        let c = topsis_with(&m, opts).unwrap().closeness();
        assert!((c[0] - 0.0).abs() < 1e-12);
        assert!((c[1] - 1.0 / 3.0).abs() < 1e-12);
        assert!((c[2] - 1.0).abs() < 1e-12);
        assert_eq!("min-max".parse::<Normalization>().unwrap(), Normalization::MinMax);
    }
}
