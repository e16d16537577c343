use std::io::Write;

use super::{McdmError, RankComparison, TopsisResult, VikorResult};
use crate::indicators::{fmt3, CountryIndicators, TABLE_COLUMNS};

pub const RANK_COLUMNS: [&str; 6] = ["T.s", "T.r", "V.S", "V.R", "V.Q", "V.r"];

fn csv_err(e: csv::Error) -> McdmError {
    McdmError::Io(e.into())
}

fn check_aligned(t: &TopsisResult, v: &VikorResult) -> Result<(), McdmError> {
    let same = t.scores.len() == v.scores.len()
        && t.scores
            .iter()
            .zip(&v.scores)
            .all(|(a, b)| a.alternative == b.alternative);
    if same {
        Ok(())
    } else {
        Err(McdmError::MismatchedAlternatives)
    }
}

fn rank_cells(t: &TopsisResult, v: &VikorResult, i: usize) -> [String; 6] {
    let (ts, vs) = (&t.scores[i], &v.scores[i]);
    [
        fmt3(ts.closeness),
        ts.rank.to_string(),
        fmt3(vs.s),
        fmt3(vs.r),
        fmt3(vs.q),
        vs.rank.to_string(),
    ]
}

/// `Country,T.s,T.r,V.S,V.R,V.Q,V.r` in matrix row order.
pub fn write_rank_table<W: Write>(t: &TopsisResult, v: &VikorResult, w: W) -> Result<(), McdmError> {
    check_aligned(t, v)?;
    let mut wtr = csv::Writer::from_writer(w);
    let mut header = vec!["Country"];
    header.extend(RANK_COLUMNS);
    wtr.write_record(&header).map_err(csv_err)?;
    for i in 0..t.scores.len() {
        let mut rec = vec![t.scores[i].alternative.clone()];
        rec.extend(rank_cells(t, v, i));
        wtr.write_record(&rec).map_err(csv_err)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Indicator columns followed by the rank columns. Each ranked alternative
/// is matched to the first indicator row of the same name.
pub fn write_combined_table<W: Write>(
    rows: &[CountryIndicators],
    t: &TopsisResult,
    v: &VikorResult,
    w: W,
) -> Result<(), McdmError> {
    check_aligned(t, v)?;
    let mut indicator_table = Vec::new();
    crate::indicators::write_indicator_table(rows, &mut indicator_table)
        .map_err(|e| McdmError::Io(std::io::Error::other(e.to_string())))?;
    let mut rdr = csv::Reader::from_reader(indicator_table.as_slice());
    let mut by_name = std::collections::HashMap::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        by_name.entry(rec[0].to_string()).or_insert(rec);
    }

    let mut wtr = csv::Writer::from_writer(w);
    let mut header: Vec<&str> = TABLE_COLUMNS.to_vec();
    header.extend(RANK_COLUMNS);
    wtr.write_record(&header).map_err(csv_err)?;
    for i in 0..t.scores.len() {
        let name = &t.scores[i].alternative;
        let ind = by_name.get(name).ok_or_else(|| McdmError::MissingValue {
            alternative: name.clone(),
            criterion: "indicators".into(),
        })?;
        let mut rec: Vec<String> = ind.iter().map(str::to_string).collect();
        rec.extend(rank_cells(t, v, i));
        wtr.write_record(&rec).map_err(csv_err)?;
    }
    wtr.flush()?;
    Ok(())
}

/// `alternative,rank_a,rank_b,delta,abs_delta` followed by the correlations
/// as `#`-prefixed trailer lines.
pub fn write_comparison<W: Write>(c: &RankComparison, mut w: W) -> Result<(), McdmError> {
    {
        let mut wtr = csv::Writer::from_writer(&mut w);
        wtr.write_record(["alternative", "rank_a", "rank_b", "delta", "abs_delta"])
            .map_err(csv_err)?;
        for d in &c.deltas {
            wtr.write_record([
                d.alternative.clone(),
                d.rank_a.to_string(),
                d.rank_b.to_string(),
                d.delta.to_string(),
                d.abs().to_string(),
            ])
            .map_err(csv_err)?;
        }
        wtr.flush()?;
    }
    let show = |x: Option<f64>| x.map(|v| format!("{v:.6}")).unwrap_or_else(|| "undefined".into());
    writeln!(w, "# spearman_rho={}", show(c.spearman_rho))?;
    writeln!(w, "# kendall_tau={}", show(c.kendall_tau))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcdm::{rank_compare, topsis, vikor, Criterion, DecisionMatrix, Direction, Ranking};

    fn results() -> (TopsisResult, VikorResult) {
        let m = DecisionMatrix::new(
            vec!["Chile".into(), "Peru".into()],
            vec![
                Criterion::new("Pub", Direction::Benefit, 0.5),
                Criterion::new("NCP", Direction::Cost, 0.5),
            ],
            vec![vec![10.0, 0.1], vec![5.0, 0.5]],
        )
        .unwrap();
        (topsis(&m).unwrap(), vikor(&m, 0.5).unwrap())
    }

    #[test]
    fn rank_table_layout() {
        let (t, v) = results();
        let mut out = Vec::new();
        write_rank_table(&t, &v, &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "Country,T.s,T.r,V.S,V.R,V.Q,V.r\nChile,1.000,1,0.000,0.000,0.000,1\nPeru,0.000,2,1.000,0.500,1.000,2\n"
        );
    }

    #[test]
    fn combined_table_joins_indicators() {
        let (t, v) = results();
        let row = |c: &str, p: f64| CountryIndicators {
            country: c.into(),
            publications: p,
            citations: 3.0,
            cpp: 3.0 / p,
            std_dev: 0.0,
            degenerate_sample: false,
            ncp: 0.1,
            max_cites: 2,
            pub_per_sis: Some(p / 100.0),
            sis: Some(100),
        };
        let mut out = Vec::new();
        write_combined_table(&[row("Peru", 5.0), row("Chile", 10.0)], &t, &v, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            "Country,Pub,Cites,CPP,Std.Dev,NCP,Max.Cites,Pub.SIS,SIS,T.s,T.r,V.S,V.R,V.Q,V.r"
        );
        assert!(lines[1].starts_with("Chile,10,3,0.300,"));
        assert!(write_combined_table(&[row("Peru", 5.0)], &t, &v, Vec::new()).is_err());
    }

    #[test]
    fn comparison_trailer() {
        let (t, v) = results();
        let c = rank_compare(&Ranking::from_topsis(&t), &Ranking::from_vikor(&v)).unwrap();
        let mut out = Vec::new();
        write_comparison(&c, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("Chile,1,1,0,0\n"));
        assert!(text.ends_with("# spearman_rho=1.000000\n# kendall_tau=1.000000\n"));
    }
}
