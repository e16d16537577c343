use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bibliorank_cli::manifest::RunManifest;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn bibliorank(out_dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bibliorank"))
        .arg("--out-dir")
        .arg(out_dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(out: &Output) {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn manifest(dir: &Path, command: &str) -> RunManifest {
    RunManifest::read(&dir.join(format!("{command}.manifest.json"))).unwrap()
}

fn ingest_fixture(dir: &Path) -> PathBuf {
    let out = bibliorank(
        dir,
        &[
            "ingest",
            "--in",
            path(&fixture("corpus/records.csv")),
            "--schema",
            path(&fixture("scopus.map")),
        ],
    );
    ok(&out);
    dir.join("corpus.ndjson")
}

fn csv_column(file: &Path, column: &str) -> Vec<(String, String)> {
    let mut rdr = csv::Reader::from_path(file).unwrap();
    let idx = rdr.headers().unwrap().iter().position(|h| h == column).unwrap();
    rdr.records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].to_string(), r[idx].to_string())
        })
        .collect()
}

#[test]
fn ingest_records_outputs_in_manifest() {
    let dir = tempfile::tempdir().unwrap();
    ingest_fixture(dir.path());
    let m = manifest(dir.path(), "ingest");
    assert_eq!(m.command, "ingest");
    let names: Vec<&str> = m.outputs.iter().map(|o| o.path.as_str()).collect();
    assert_eq!(names, ["corpus.ndjson", "exclusions.csv"]);
    assert_eq!(m.inputs.len(), 1);
    assert_eq!(m.configs.len(), 1);
}

#[test]
fn missing_schema_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = bibliorank(
        dir.path(),
        &[
            "ingest",
            "--in",
            path(&fixture("corpus/records.csv")),
            "--schema",
            "/nonexistent/scopus.map",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/scopus.map"));
}

#[test]
fn out_of_range_trade_off_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = bibliorank(
        dir.path(),
        &[
            "rank",
            "--indicators",
            path(&fixture("table2_indicators.csv")),
            "--v",
            "2",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fractional_counting_changes_publications() {
    let dir = tempfile::tempdir().unwrap();
    let export = dir.path().join("two.csv");
    fs::write(
        &export,
        "id,title,abstract,year,doc_type,language,authors,countries,author_keywords,indexed_keywords,references,citation_count\n\
         a,First paper,,2015,article,en,Ana A.,Spain;Brazil,privacy,,r1,3\n\
         b,Second paper,,2016,article,en,Bo B.,Spain,privacy,,r1,0\n",
    )
    .unwrap();
    ok(&bibliorank(dir.path(), &["ingest", "--in", path(&export)]));
    let corpus = dir.path().join("corpus.ndjson");
    ok(&bibliorank(
        dir.path(),
        &["indicators", "--corpus", path(&corpus), "--out", "full.csv"],
    ));
    ok(&bibliorank(
        dir.path(),
        &[
            "indicators",
            "--corpus",
            path(&corpus),
            "--fractional",
            "--out",
            "frac.csv",
        ],
    ));
    let full = csv_column(&dir.path().join("full.csv"), "Pub");
    let frac = csv_column(&dir.path().join("frac.csv"), "Pub");
    assert_eq!(
        full,
        [("Spain".into(), "2".into()), ("Brazil".into(), "1".into())]
    );
    assert_eq!(
        frac,
        [
            ("Spain".into(), "1.500".into()),
            ("Brazil".into(), "0.500".into())
        ]
    );
}

#[test]
fn default_rank_puts_united_states_first() {
    let dir = tempfile::tempdir().unwrap();
    ok(&bibliorank(
        dir.path(),
        &["rank", "--indicators", path(&fixture("table2_indicators.csv"))],
    ));
    let rows = csv_column(&dir.path().join("ranking.csv"), "T.r");
    assert_eq!(rows[0], ("United States".into(), "1".into()));
    let v = csv_column(&dir.path().join("ranking.csv"), "V.r");
    assert_eq!(v[0], ("United States".into(), "1".into()));
    let m = manifest(dir.path(), "rank");
    assert_eq!(m.summary["vikor_best"], "United States");
    assert!(dir.path().join("rank_compare.csv").exists());
}

#[test]
fn trade_off_one_orders_by_group_utility() {
    let dir = tempfile::tempdir().unwrap();
    ok(&bibliorank(
        dir.path(),
        &[
            "rank",
            "--indicators",
            path(&fixture("table2_indicators.csv")),
            "--v",
            "1.0",
        ],
    ));
    let mut rdr = csv::Reader::from_path(dir.path().join("ranking.csv")).unwrap();
    let headers = rdr.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let (s, q) = (col("V.S"), col("V.Q"));
    let rows: Vec<(f64, f64)> = rdr
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[s].parse().unwrap(), r[q].parse().unwrap())
        })
        .collect();
    let lo = rows.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let hi = rows.iter().map(|r| r.0).fold(f64::NEG_INFINITY, f64::max);
    for (s, q) in rows {
        assert!((q - (s - lo) / (hi - lo)).abs() < 2e-3, "Q {q} vs S {s}");
    }
}

#[test]
fn criteria_file_is_recorded_in_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fixture("criteria/six.cfg");
    ok(&bibliorank(
        dir.path(),
        &[
            "rank",
            "--indicators",
            path(&fixture("table2_indicators.csv")),
            "--criteria",
            path(&cfg),
        ],
    ));
    let m = manifest(dir.path(), "rank");
    let digest = bibliorank_cli::manifest::sha256_hex(&fs::read(&cfg).unwrap());
    assert!(m.configs.iter().any(|c| c.sha256 == digest));
    assert_eq!(m.summary["topsis_criteria"], m.summary["vikor_criteria"]);
}

#[test]
fn clustering_is_repeatable() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = ingest_fixture(dir.path());
    for prefix in ["one", "two"] {
        ok(&bibliorank(
            dir.path(),
            &[
                "cluster",
                "--corpus",
                path(&corpus),
                "--k",
                "3",
                "--seed",
                "42",
                "--prefix",
                prefix,
            ],
        ));
    }
    for suffix in [".csv", "_summary.txt", "_tfidf.mtx"] {
        let a = fs::read(dir.path().join(format!("one{suffix}"))).unwrap();
        let b = fs::read(dir.path().join(format!("two{suffix}"))).unwrap();
        assert_eq!(a, b, "{suffix} differs");
    }
}

#[test]
fn cocitation_graph_is_graphml() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = ingest_fixture(dir.path());
    ok(&bibliorank(
        dir.path(),
        &[
            "graph",
            "--corpus",
            path(&corpus),
            "--kind",
            "cocitation",
            "--min",
            "3",
            "--out",
            "cocit.graphml",
        ],
    ));
    let text = fs::read_to_string(dir.path().join("cocit.graphml")).unwrap();
    assert!(text.contains("<graphml"));
    assert!(text.contains("<edge "));
    let m = manifest(dir.path(), "graph");
    assert!(m.summary.contains_key("cocit.edges"));
}

#[test]
fn unknown_graph_extension_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = ingest_fixture(dir.path());
    let out = bibliorank(
        dir.path(),
        &[
            "graph",
            "--corpus",
            path(&corpus),
            "--kind",
            "cooccurrence",
            "--out",
            "g.xyz",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pipeline_is_deterministic() {
    let run = |dir: &Path| {
        ok(&bibliorank(
            dir,
            &[
                "pipeline",
                "--in",
                path(&fixture("corpus/records.csv")),
                "--schema",
                path(&fixture("scopus.map")),
                "--sis",
                path(&fixture("sis_2015.csv")),
                "--rules",
                path(&fixture("wildcards.rules")),
            ],
        ));
        manifest(dir, "pipeline")
    };
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let (ma, mb) = (run(a.path()), run(b.path()));
    assert_eq!(ma.outputs, mb.outputs);
    assert!(ma.outputs.iter().any(|o| o.path == "ranking.csv"));
}
