use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{McdmError, TopsisResult, VikorResult};

/// Alternatives paired with integer ranks (1 = best).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ranking {
    pub label: String,
    pub entries: Vec<(String, usize)>,
}

impl Ranking {
    pub fn new(label: impl Into<String>, entries: Vec<(String, usize)>) -> Ranking {
        Ranking {
            label: label.into(),
            entries,
        }
    }

    pub fn from_topsis(r: &TopsisResult) -> Ranking {
        Ranking::new(
            "TOPSIS",
            r.scores.iter().map(|s| (s.alternative.clone(), s.rank)).collect(),
        )
    }

    pub fn from_vikor(r: &VikorResult) -> Ranking {
        Ranking::new(
            "VIKOR",
            r.scores.iter().map(|s| (s.alternative.clone(), s.rank)).collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankDelta {
    pub alternative: String,
    pub rank_a: usize,
    pub rank_b: usize,
    /// rank_b - rank_a
    pub delta: i64,
}

impl RankDelta {
    pub fn abs(&self) -> u64 {
        self.delta.unsigned_abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankComparison {
    /// None when either ranking is constant.
    pub spearman_rho: Option<f64>,
    /// Kendall tau-b; None when either ranking is constant.
    pub kendall_tau: Option<f64>,
    /// In the order of the first ranking.
    pub deltas: Vec<RankDelta>,
}

impl RankComparison {
    pub fn delta_of(&self, alternative: &str) -> Option<&RankDelta> {
        self.deltas.iter().find(|d| d.alternative == alternative)
    }

    pub fn moved(&self) -> usize {
        self.deltas.iter().filter(|d| d.delta != 0).count()
    }
}

pub fn rank_compare(a: &Ranking, b: &Ranking) -> Result<RankComparison, McdmError> {
    let b_ranks: HashMap<&str, usize> = b.entries.iter().map(|(k, r)| (k.as_str(), *r)).collect();
    if a.entries.len() != b.entries.len() || b_ranks.len() != b.entries.len() {
        return Err(McdmError::MismatchedAlternatives);
    }
    let mut deltas = Vec::with_capacity(a.entries.len());
    for (name, ra) in &a.entries {
        let rb = *b_ranks
            .get(name.as_str())
            .ok_or(McdmError::MismatchedAlternatives)?;
        deltas.push(RankDelta {
            alternative: name.clone(),
            rank_a: *ra,
            rank_b: rb,
            delta: rb as i64 - *ra as i64,
        });
    }
    let xs: Vec<f64> = deltas.iter().map(|d| d.rank_a as f64).collect();
    let ys: Vec<f64> = deltas.iter().map(|d| d.rank_b as f64).collect();
    Ok(RankComparison {
        spearman_rho: pearson(&xs, &ys),
        kendall_tau: kendall_tau_b(&xs, &ys),
        deltas,
    })
}

fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

fn kendall_tau_b(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len();
    let (mut concordant, mut discordant) = (0i64, 0i64);
    let (mut tied_x, mut tied_y) = (0i64, 0i64);
    for i in 0..n {
        for j in i + 1..n {
            let dx = xs[i] - xs[j];
            let dy = ys[i] - ys[j];
            if dx == 0.0 && dy == 0.0 {
                continue;
            } else if dx == 0.0 {
                tied_x += 1;
            } else if dy == 0.0 {
                tied_y += 1;
            } else if (dx > 0.0) == (dy > 0.0) {
                concordant += 1;
            } else {
                discordant += 1;
            }
        }
    }
    let denom = (((concordant + discordant + tied_x) * (concordant + discordant + tied_y)) as f64).sqrt();
    if denom == 0.0 {
        return None;
    }
    Some((concordant - discordant) as f64 / denom)
}
