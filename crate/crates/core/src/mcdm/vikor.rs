use serde::{Deserialize, Serialize};

use super::{dense_ranks_by, ranks_by, DecisionMatrix, Direction, McdmError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VikorScore {
    pub alternative: String,
    /// Group utility.
    pub s: f64,
    /// Individual regret.
    pub r: f64,
    /// Compromise index.
    pub q: f64,
    pub rank: usize,
    pub dense_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VikorResult {
    pub v: f64,
    /// In matrix row order.
    pub scores: Vec<VikorScore>,
    /// S equal for every alternative; its Q term was set to 0.
    pub s_constant: bool,
    /// R equal for every alternative; its Q term was set to 0.
    pub r_constant: bool,
    /// Q(2nd) - Q(1st) >= 1/(n-1).
    pub acceptable_advantage: bool,
    /// The Q leader is also best by S or by R.
    pub acceptable_stability: bool,
    /// Alternatives in Q order.
    pub compromise_set: Vec<String>,
}

impl VikorResult {
    pub fn q(&self) -> Vec<f64> {
        self.scores.iter().map(|s| s.q).collect()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.scores.iter().map(|s| s.rank).collect()
    }
}

pub fn vikor(m: &DecisionMatrix, v: f64) -> Result<VikorResult, McdmError> {
    if !(0.0..=1.0).contains(&v) {
        return Err(McdmError::BadTradeOff(v));
    }
    let n = m.n_alternatives();
    if n < 2 {
        return Err(McdmError::TooFewAlternatives {
            method: "VIKOR",
            min: 2,
            got: n,
        });
    }
    m.check_ranges()?;

    let mut s = vec![0.0; n];
    let mut r = vec![0.0f64; n];
    for (j, c) in m.criteria().iter().enumerate() {
        let lo = m.column(j).fold(f64::INFINITY, f64::min);
        let hi = m.column(j).fold(f64::NEG_INFINITY, f64::max);
        let (best, worst) = match c.direction {
            Direction::Benefit => (hi, lo),
            Direction::Cost => (lo, hi),
        };
        for (i, x) in m.column(j).enumerate() {
            let g = c.weight * (best - x) / (best - worst);
            s[i] += g;
            r[i] = r[i].max(g);
        }
    }

    let span = |xs: &[f64]| {
        let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    };
    let (s_min, s_max) = span(&s);
    let (r_min, r_max) = span(&r);
    let s_constant = s_max == s_min;
    let r_constant = r_max == r_min;
    let q: Vec<f64> = (0..n)
        .map(|i| {
            let qs = if s_constant {
                0.0
            } else {
                (s[i] - s_min) / (s_max - s_min)
            };
            let qr = if r_constant {
                0.0
            } else {
                (r[i] - r_min) / (r_max - r_min)
            };
            v * qs + (1.0 - v) * qr
        })
        .collect();

    let ranks = ranks_by(&q, false);
    let dense = dense_ranks_by(&q, false);
    let (acceptable_advantage, acceptable_stability, members) = compromise(&q, &s, &r, &ranks);

    let names = m.alternatives();
    Ok(VikorResult {
        v,
        scores: (0..n)
            .map(|i| VikorScore {
                alternative: names[i].clone(),
                s: s[i],
                r: r[i],
                q: q[i],
                rank: ranks[i],
                dense_rank: dense[i],
            })
            .collect(),
        s_constant,
        r_constant,
        acceptable_advantage,
        acceptable_stability,
        compromise_set: members.into_iter().map(|i| names[i].clone()).collect(),
    })
}

/// Acceptance conditions and compromise members (as row indices, Q order).
fn compromise(q: &[f64], s: &[f64], r: &[f64], ranks: &[usize]) -> (bool, bool, Vec<usize>) {
    let n = q.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| ranks[i]);
    let s_min = s.iter().copied().fold(f64::INFINITY, f64::min);
    let r_min = r.iter().copied().fold(f64::INFINITY, f64::min);

    let dq = 1.0 / (n as f64 - 1.0);
    let first = order[0];
    let advantage = q[order[1]] - q[first] >= dq;
    let stability = s[first] == s_min || r[first] == r_min;
    let members = if !advantage {
        order
            .iter()
            .copied()
            .take_while(|&i| q[i] - q[first] < dq)
            .collect()
    } else if !stability {
        vec![order[0], order[1]]
    } else {
        vec![first]
    };
    (advantage, stability, members)
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
    fn dominating_alternative_scores_zero() {
        let m = matrix(
            vec![vec![9.0, 1.0], vec![5.0, 3.0], vec![2.0, 8.0]],
            &[Direction::Benefit, Direction::Cost],
        );
        let r = vikor(&m, 0.5).unwrap();
        let top = &r.scores[0];
        assert_eq!((top.s, top.r, top.q, top.rank), (0.0, 0.0, 0.0, 1));
        assert_eq!(r.scores[2].q, 1.0);
        assert!(r.acceptable_advantage && r.acceptable_stability);
        assert_eq!(r.compromise_set, vec!["a0".to_string()]);
    }

    #[test]
    fn symmetric_instance_has_constant_s() {
        let m = matrix(
            vec![vec![1.0, 9.0], vec![5.0, 5.0], vec![9.0, 1.0]],
            &[Direction::Benefit, Direction::Benefit],
        );
        let r = vikor(&m, 0.5).unwrap();
        assert!(r.s_constant && !r.r_constant);
        assert_eq!(r.q(), vec![0.5, 0.0, 0.5]);
        assert_eq!(r.ranks(), vec![2, 1, 3]);
        assert!(r.acceptable_advantage);
        assert_eq!(r.compromise_set, vec!["a1".to_string()]);
    }

    #[test]
    fn small_advantage_widens_compromise_set() {
        let m = matrix(
            vec![vec![10.0, 10.0], vec![9.9, 10.0], vec![9.8, 9.9], vec![0.0, 0.0]],
            &[Direction::Benefit, Direction::Benefit],
        );
        let r = vikor(&m, 0.5).unwrap();
        assert!(!r.acceptable_advantage);
        assert_eq!(r.compromise_set, vec!["a0", "a1", "a2"]);
    }

    #[test]
    fn unstable_leader_pairs_with_runner_up() {
        // leader is neither best by S nor by R
        let q = [0.5, 0.6, 0.0, 1.0];
        let s = [0.0, 0.9, 0.1, 1.0];
        let r = [0.3, 0.0, 0.1, 1.0];
        let ranks = ranks_by(&q, false);
        let (adv, stab, members) = compromise(&q, &s, &r, &ranks);
        assert!(adv && !stab);
        assert_eq!(members, vec![2, 0]);
    }

    #[test]
    fn errors() {
        let m = matrix(
            vec![vec![1.0, 2.0], vec![1.0, 3.0]],
            &[Direction::Benefit, Direction::Benefit],
        );
        assert!(matches!(vikor(&m, 0.5), Err(McdmError::ConstantColumn(n)) if n == "c0"));
        let m = matrix(vec![vec![1.0]], &[Direction::Benefit]);
        assert!(matches!(
            vikor(&m, 0.5),
            Err(McdmError::TooFewAlternatives { .. })
        ));
        let m = matrix(vec![vec![1.0], vec![2.0]], &[Direction::Benefit]);
        assert!(matches!(vikor(&m, 1.5), Err(McdmError::BadTradeOff(_))));
    }

    #[test]
    fn v_one_uses_group_utility_only() {
        let m = matrix(
            vec![vec![9.0, 1.0], vec![5.0, 3.0], vec![2.0, 8.0]],
            &[Direction::Benefit, Direction::Benefit],
        );
        let r = vikor(&m, 1.0).unwrap();
        assert!(!r.s_constant);
        let (lo, hi) = (
            r.scores.iter().map(|x| x.s).fold(f64::INFINITY, f64::min),
            r.scores.iter().map(|x| x.s).fold(f64::NEG_INFINITY, f64::max),
        );
        for x in &r.scores {
            assert!((x.q - (x.s - lo) / (hi - lo)).abs() < 1e-12);
        }
    }
}
