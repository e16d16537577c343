//! Exhaustive search over equal-weight column subsets of the indicator
//! table, scored against the published scores. Run the unit tests with
//! `--nocapture` to see the leaderboard.

use std::collections::BTreeMap;
use std::fs::File;

use bibliorank_core::indicators::read_indicator_table;
use bibliorank_core::mcdm::{
    build_matrix, topsis_with, vikor, Normalization, TopsisOptions, INDICATOR_CRITERIA,
};
use bibliorank_core::{CountryIndicators, CriteriaConfig};

use crate::{fixture, PublishedRow};

pub struct Fit {
    pub columns: Vec<&'static str>,
    pub residual: f64,
    pub rank_hits: usize,
}

pub fn subsets() -> Vec<Vec<&'static str>> {
    (0u32..1 << INDICATOR_CRITERIA.len())
        .filter(|mask| (6..=8).contains(&mask.count_ones()))
        .map(|mask| {
            INDICATOR_CRITERIA
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, c)| *c)
                .collect()
        })
        .collect()
}

pub fn rows() -> Vec<CountryIndicators> {
    read_indicator_table(File::open(fixture("table2_indicators.csv")).unwrap()).unwrap()
}

pub fn topsis_fits(
    rows: &[CountryIndicators],
    table: &BTreeMap<String, PublishedRow>,
    normalization: Normalization,
) -> Vec<Fit> {
    let mut fits: Vec<Fit> = subsets()
        .into_iter()
        .filter_map(|columns| {
            let built = build_matrix(rows, &CriteriaConfig::equal_weights(&columns)).ok()?;
            let opts = TopsisOptions {
                normalization,
                ..TopsisOptions::default()
            };
            let r = topsis_with(&built.matrix, opts).ok()?;
            let residual = r
                .scores
                .iter()
                .map(|s| (s.closeness - table[&s.alternative].t_s).abs())
                .fold(0.0, f64::max);
            let rank_hits = r
                .scores
                .iter()
                .filter(|s| s.rank == table[&s.alternative].t_r)
                .count();
            Some(Fit {
                columns,
                residual,
                rank_hits,
            })
        })
        .collect();
    fits.sort_by(|a, b| a.residual.total_cmp(&b.residual));
    fits
}

pub fn vikor_fits(rows: &[CountryIndicators], table: &BTreeMap<String, PublishedRow>) -> Vec<Fit> {
    let mut fits: Vec<Fit> = subsets()
        .into_iter()
        .filter_map(|columns| {
            let built = build_matrix(rows, &CriteriaConfig::equal_weights(&columns)).ok()?;
            let r = vikor(&built.matrix, 0.5).ok()?;
            let residual = r
                .scores
                .iter()
                .map(|s| (s.q - table[&s.alternative].v_q).abs())
                .fold(0.0, f64::max);
            let rank_hits = r
                .scores
                .iter()
                .filter(|s| s.rank == table[&s.alternative].v_r)
                .count();
            Some(Fit {
                columns,
                residual,
                rank_hits,
            })
        })
        .collect();
    fits.sort_by(|a, b| a.residual.total_cmp(&b.residual));
    fits
}

pub fn show(label: &str, fits: &[Fit]) {
    println!("{label}");
    for f in fits.iter().take(5) {
        println!(
            "  {:.4}  {:>2}/20  {}",
            f.residual,
            f.rank_hits,
            f.columns.join(",")
        );
    }
}
