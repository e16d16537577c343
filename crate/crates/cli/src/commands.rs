use std::collections::HashMap;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};

use bibliorank_core::graphs::{
    self, CouplingOptions, CouplingUnit, GraphFormat, KeywordSource, WeightedGraph,
};
use bibliorank_core::indicators::{self, Counting, CountryIndicators, SisTable, YearSeries};
use bibliorank_core::ingest::{self, Corpus, Schema};
use bibliorank_core::mcdm::{self, CriteriaConfig, Normalization, Ranking, TopsisOptions};
use bibliorank_core::textmine::{self, Idf, Stopwords, TfidfOptions, WildcardRule};

use crate::manifest::{OutputFailure, Run};

/// Bad flags or flag combinations detected by the CLI itself.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn open(path: &Path) -> Result<BufReader<File>> {
    let f = File::open(path).map_err(|e| InputError(format!("cannot open {}: {e}", path.display())))?;
    Ok(BufReader::new(f))
}

fn out_err(path: &Path) -> OutputFailure {
    OutputFailure(path.to_path_buf())
}

// ---- ingest ----

#[derive(Debug, Clone, Args)]
pub struct IngestArgs {
    /// Delimited export to read.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// `field=column` mapping file; identity mapping when omitted.
    #[arg(long)]
    pub schema: Option<PathBuf>,
    /// Corpus file (NDJSON), relative to the output directory.
    #[arg(long, default_value = "corpus.ndjson")]
    pub out: PathBuf,
    #[arg(long, default_value = "exclusions.csv")]
    pub exclusions: PathBuf,
    /// Drop records repeating an earlier title, year and first author.
    #[arg(long)]
    pub dedupe: bool,
}

pub fn ingest(run: &mut Run, args: &IngestArgs) -> Result<Corpus> {
    let schema = match &args.schema {
        Some(p) => {
            run.config(p)
                .map_err(|_| InputError(format!("cannot read schema file {}", p.display())))?;
            Schema::from_path(p)?
        }
        None => Schema::identity(),
    };
    run.input(&args.input)
        .map_err(|_| InputError(format!("cannot read input file {}", args.input.display())))?;
    let ingested = ingest::parse_corpus(&args.input, &schema)?;
    let mut exclusions = ingested.exclusions;
    let corpus = if args.dedupe {
        let (c, removed) = ingest::dedupe(&ingested.corpus);
        exclusions.extend(removed);
        c
    } else {
        ingested.corpus
    };
    let out = args.out.clone();
    run.write_output(&args.out, |w| {
        ingest::write_ndjson(&corpus, w).with_context(|| out_err(&out))
    })?;
    let ex = args.exclusions.clone();
    run.write_output(&args.exclusions, |w| {
        ingest::write_exclusions(&exclusions, w).with_context(|| out_err(&ex))
    })?;
    run.note("rows", ingested.rows);
    run.note("records", corpus.len());
    run.note("excluded", exclusions.len());
    log::info!("{} records kept, {} excluded", corpus.len(), exclusions.len());
    Ok(corpus)
}

pub fn load_corpus(run: &mut Run, path: &Path) -> Result<Corpus> {
    run.input(path)
        .map_err(|_| InputError(format!("cannot read corpus file {}", path.display())))?;
    Ok(ingest::read_ndjson_path(path)?)
}

// ---- indicators ----

#[derive(Debug, Clone, Args)]
pub struct IndicatorsArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// `country,sis` table of secure internet server counts.
    #[arg(long)]
    pub sis: Option<PathBuf>,
    /// Split each paper equally among its countries.
    #[arg(long)]
    pub fractional: bool,
    #[arg(long, default_value = "indicators.csv")]
    pub out: PathBuf,
    #[arg(long, default_value = "authors.csv")]
    pub authors: PathBuf,
    #[arg(long, default_value = "years.csv")]
    pub years: PathBuf,
    /// First year for the growth rate; earliest corpus year by default.
    #[arg(long)]
    pub apgr_from: Option<i32>,
    /// Last year for the growth rate; latest corpus year by default.
    #[arg(long)]
    pub apgr_to: Option<i32>,
}

pub fn read_sis(run: &mut Run, path: Option<&Path>) -> Result<SisTable> {
    match path {
        Some(p) => {
            run.input(p)
                .map_err(|_| InputError(format!("cannot read SIS file {}", p.display())))?;
            Ok(indicators::read_sis(open(p)?)?)
        }
        None => Ok(SisTable::new()),
    }
}

pub fn indicators(
    run: &mut Run,
    corpus: &Corpus,
    sis: &SisTable,
    args: &IndicatorsArgs,
) -> Result<Vec<CountryIndicators>> {
    let counting = if args.fractional {
        Counting::Fractional
    } else {
        Counting::Full
    };
    let report = indicators::country_indicators(corpus, sis, counting)?;
    let out = args.out.clone();
    run.write_output(&args.out, |w| {
        indicators::write_indicator_table(&report.rows, w).with_context(|| out_err(&out))
    })?;

    let authors = indicators::author_production(corpus);
    let ap = args.authors.clone();
    run.write_output(&args.authors, |w| {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["author", "publications", "citations"])?;
        for a in &authors {
            wtr.write_record([
                a.author.clone(),
                a.publications.to_string(),
                a.citations.to_string(),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    })
    .with_context(|| out_err(&ap))?;

    let series = YearSeries::from_corpus("all", corpus);
    let yp = args.years.clone();
    run.write_output(&args.years, |w| {
        writeln!(w, "year,publications")?;
        for (y, n) in &series.counts {
            writeln!(w, "{y},{n}")?;
        }
        Ok(())
    })
    .with_context(|| out_err(&yp))?;

    let first = series.counts.keys().next().copied();
    let last = series.counts.keys().next_back().copied();
    if let (Some(from), Some(to)) = (args.apgr_from.or(first), args.apgr_to.or(last)) {
        match indicators::apgr(&series, from, to) {
            Ok(g) => {
                run.note("apgr_percent", g);
                run.note("apgr_years", format!("{from}-{to}"));
            }
            Err(e) => log::warn!("growth rate not computed: {e}"),
        }
    }
    run.note("counting", if args.fractional { "fractional" } else { "full" });
    run.note("countries", report.rows.len());
    run.note("indicator_warnings", report.warnings.len());
    Ok(report.rows)
}

// ---- graph ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Cooccurrence,
    Coupling,
    Cocitation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    Author,
    Indexed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UnitArg {
    Document,
    Country,
}

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Minimum occurrences, shared references or co-citations. Defaults to 3
    /// for co-citation and 1 otherwise.
    #[arg(long)]
    pub min: Option<u64>,
    /// Keyword field for co-occurrence.
    #[arg(long, value_enum, default_value = "author")]
    pub source: SourceArg,
    /// Coupling unit.
    #[arg(long, value_enum, default_value = "document")]
    pub unit: UnitArg,
    /// Leave out documents cited fewer times before coupling. Defaults to 1
    /// for country coupling and 0 for document coupling.
    #[arg(long)]
    pub min_doc_citations: Option<u64>,
    /// Replace co-occurrence counts by association strength.
    #[arg(long)]
    pub association: bool,
    /// Average normalised citations leave out uncited documents.
    #[arg(long)]
    pub exclude_uncited: bool,
    /// `doc_id,cluster` file used to label document nodes.
    #[arg(long)]
    pub clusters: Option<PathBuf>,
    /// Output file; .graphml, .dot/.gv or .net.
    #[arg(long, default_value = "graph.graphml")]
    pub out: PathBuf,
}

fn read_assignments(path: &Path) -> Result<HashMap<String, usize>> {
    let mut map = HashMap::new();
    for (i, line) in std::io::BufRead::lines(open(path)?).enumerate() {
        let line = line?;
        if i == 0 || line.trim().is_empty() {
            continue;
        }
        let (id, c) = line
            .rsplit_once(',')
            .ok_or_else(|| InputError(format!("{}:{}: expected doc_id,cluster", path.display(), i + 1)))?;
        let c: usize = c
            .trim()
            .parse()
            .map_err(|_| InputError(format!("{}:{}: bad cluster {c:?}", path.display(), i + 1)))?;
        map.insert(id.trim().to_string(), c);
    }
    Ok(map)
}

pub fn build_graph(corpus: &Corpus, args: &GraphArgs) -> Result<WeightedGraph> {
    if args.association && args.kind != KindArg::Cooccurrence {
        bail!(InputError(
            "--association applies to co-occurrence graphs only".into()
        ));
    }
    let mut g = match args.kind {
        KindArg::Cooccurrence => {
            let source = match args.source {
                SourceArg::Author => KeywordSource::Author,
                SourceArg::Indexed => KeywordSource::Indexed,
            };
            let g = graphs::keyword_cooccurrence(corpus, source, args.min.unwrap_or(1))?;
            if args.association {
                graphs::association_strength(&g)?
            } else {
                g
            }
        }
        KindArg::Coupling => {
            let unit = match args.unit {
                UnitArg::Document => CouplingUnit::Document,
                UnitArg::Country => CouplingUnit::Country,
            };
            let default_citations = if unit == CouplingUnit::Country { 1 } else { 0 };
            let opts = CouplingOptions {
                unit,
                min_weight: args.min.unwrap_or(1),
                min_doc_citations: args.min_doc_citations.unwrap_or(default_citations),
            };
            let mut g = graphs::bibliographic_coupling_with(corpus, &opts)?;
            if unit == CouplingUnit::Country {
                let anc = graphs::avg_normalized_citations(corpus, args.exclude_uncited);
                for n in &mut g.nodes {
                    if let Some(v) = anc.get(&n.key) {
                        n.attrs.insert("avg_norm_citations".into(), format!("{v:.6}"));
                    }
                }
            }
            g
        }
        KindArg::Cocitation => graphs::cocitation(corpus, args.min.unwrap_or(3))?,
    };
    if let Some(p) = &args.clusters {
        let map = read_assignments(p)?;
        for n in &mut g.nodes {
            if let Some(c) = map.get(&n.key) {
                n.attrs.insert("cluster".into(), c.to_string());
            }
        }
    }
    Ok(g)
}

pub fn graph(run: &mut Run, corpus: &Corpus, args: &GraphArgs) -> Result<()> {
    let format = GraphFormat::from_path(&args.out)
        .map_err(|e| InputError(format!("--out {}: {e}", args.out.display())))?;
    if let Some(p) = &args.clusters {
        run.input(p)?;
    }
    let g = build_graph(corpus, args)?;
    let out = args.out.clone();
    run.write_output(&args.out, |w| {
        match format {
            GraphFormat::Dot => graphs::write_dot(&g, w),
            GraphFormat::GraphMl => graphs::write_graphml(&g, w),
            GraphFormat::Pajek => graphs::write_pajek(&g, w),
        }
        .with_context(|| out_err(&out))
    })?;
    let stem = args
        .out
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("graph")
        .to_string();
    run.note(&format!("{stem}.nodes"), g.nodes.len());
    run.note(&format!("{stem}.edges"), g.edges.len());
    Ok(())
}

// ---- cluster ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IdfArg {
    Plain,
    Smoothed,
}

#[derive(Debug, Clone, Args)]
pub struct ClusterArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Divisive clustering; also writes the split tree.
    #[arg(long)]
    pub bisecting: bool,
    #[arg(long, default_value_t = textmine::DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    /// `pattern* canonical` lines merging word variants.
    #[arg(long)]
    pub rules: Option<PathBuf>,
    /// One stop word per line, replacing the built-in English list.
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "plain")]
    pub idf: IdfArg,
    /// Prefix for every file this command writes.
    #[arg(long, default_value = "clusters")]
    pub prefix: String,
}

pub fn cluster(run: &mut Run, corpus: &Corpus, args: &ClusterArgs) -> Result<()> {
    let rules: Vec<WildcardRule> = match &args.rules {
        Some(p) => {
            run.config(p)?;
            textmine::parse_rules(open(p)?)?
        }
        None => Vec::new(),
    };
    let stopwords = match &args.stopwords {
        Some(p) => {
            run.config(p)?;
            Stopwords::from_reader(open(p)?)?
        }
        None => Stopwords::english(),
    };
    let raw = textmine::tokenize(corpus, &stopwords, &rules);
    let opts = TfidfOptions {
        idf: match args.idf {
            IdfArg::Plain => Idf::Plain,
            IdfArg::Smoothed => Idf::Smoothed,
        },
        retain_zero_columns: false,
    };
    let m = textmine::tfidf(&raw, opts)?;

    let p = &args.prefix;
    let (clustering, tree) = if args.bisecting {
        let (c, t) = textmine::bisecting_kmeans(&m, args.k, args.seed)?;
        (c, Some(t))
    } else {
        (textmine::kmeans(&m, args.k, args.seed, args.max_iter)?, None)
    };

    let name = |suffix: &str| PathBuf::from(format!("{p}{suffix}"));
    for (file, which) in [
        ("_tfidf.mtx", 0),
        ("_tfidf_index.tsv", 1),
        (".csv", 2),
        ("_summary.txt", 3),
    ] {
        let path = name(file);
        let shown = path.clone();
        run.write_output(&path, |w| {
            match which {
                0 => textmine::write_matrix_market(&m, w),
                1 => textmine::write_matrix_index(&m, w),
                2 => clustering.write_assignments(w),
                _ => clustering.write_summary(w),
            }
            .with_context(|| out_err(&shown))
        })?;
    }
    if let Some(t) = &tree {
        let path = name("_tree.txt");
        let shown = path.clone();
        run.write_output(&path, |w| t.write(w).with_context(|| out_err(&shown)))?;
    }
    run.note("documents", m.n_docs());
    run.note("terms", m.n_terms());
    run.note("k", args.k);
    run.note("seed", args.seed);
    run.note("sse", clustering.sse);
    run.note("cluster_sizes", clustering.cluster_sizes());
    Ok(())
}

// ---- rank ----

#[derive(Debug, Clone, Args)]
pub struct RankArgs {
    /// Indicator table with Country, Pub, Cites, CPP, Std.Dev, NCP,
    /// Max.Cites, Pub.SIS and SIS columns.
    #[arg(long)]
    pub indicators: PathBuf,
    /// `country,sis` table replacing the SIS and Pub.SIS columns.
    #[arg(long)]
    pub sis: Option<PathBuf>,
    /// Criteria file used by both methods.
    #[arg(long)]
    pub criteria: Option<PathBuf>,
    /// Criteria file for TOPSIS only.
    #[arg(long)]
    pub topsis_criteria: Option<PathBuf>,
    /// Criteria file for VIKOR only.
    #[arg(long)]
    pub vikor_criteria: Option<PathBuf>,
    /// VIKOR trade-off between group utility (1) and regret (0).
    #[arg(long, default_value_t = 0.5)]
    pub v: f64,
    #[arg(long, default_value = "vector")]
    pub normalization: Normalization,
    #[arg(long, default_value = "ranking.csv")]
    pub out: PathBuf,
    #[arg(long, default_value = "rank_compare.csv")]
    pub compare: PathBuf,
}

fn read_criteria(run: &mut Run, path: Option<&PathBuf>, fallback: CriteriaConfig) -> Result<CriteriaConfig> {
    match path {
        Some(p) => {
            run.config(p)
                .map_err(|_| InputError(format!("cannot read criteria file {}", p.display())))?;
            Ok(CriteriaConfig::parse(open(p)?)?)
        }
        None => Ok(fallback),
    }
}

fn apply_sis(rows: &mut [CountryIndicators], sis: &SisTable) {
    for r in rows {
        r.sis = sis.get(&r.country).copied();
        r.pub_per_sis = r.sis.filter(|s| *s > 0).map(|s| r.publications / s as f64);
    }
}

pub fn rank(run: &mut Run, rows: &[CountryIndicators], args: &RankArgs) -> Result<()> {
    let mut rows = rows.to_vec();
    if let Some(p) = &args.sis {
        let table = read_sis(run, Some(p))?;
        apply_sis(&mut rows, &table);
    }
    let shared = args.criteria.as_ref();
    let t_cfg = read_criteria(
        run,
        args.topsis_criteria.as_ref().or(shared),
        CriteriaConfig::topsis_default(),
    )?;
    let v_cfg = read_criteria(
        run,
        args.vikor_criteria.as_ref().or(shared),
        CriteriaConfig::vikor_default(),
    )?;

    let t_built = mcdm::build_matrix(&rows, &t_cfg)?;
    let v_built = mcdm::build_matrix(&rows, &v_cfg)?;
    let t = mcdm::topsis_with(
        &t_built.matrix,
        TopsisOptions {
            normalization: args.normalization,
            ..TopsisOptions::default()
        },
    )?;
    let v = mcdm::vikor(&v_built.matrix, args.v)?;
    let cmp = mcdm::rank_compare(&Ranking::from_topsis(&t), &Ranking::from_vikor(&v))?;

    let out = args.out.clone();
    run.write_output(&args.out, |w| {
        mcdm::write_combined_table(&rows, &t, &v, w).with_context(|| out_err(&out))
    })?;
    let cp = args.compare.clone();
    run.write_output(&args.compare, |w| {
        mcdm::write_comparison(&cmp, w).with_context(|| out_err(&cp))
    })?;

    run.note("alternatives", t.scores.len());
    run.note("unranked", rows.len() - t.scores.len());
    run.note(
        "topsis_criteria",
        t_cfg.criteria.iter().map(|c| c.name.clone()).collect::<Vec<_>>(),
    );
    run.note(
        "vikor_criteria",
        v_cfg.criteria.iter().map(|c| c.name.clone()).collect::<Vec<_>>(),
    );
    run.note(
        "normalization",
        format!("{:?}", args.normalization).to_lowercase(),
    );
    run.note("v", args.v);
    run.note("topsis_best", &t.best().alternative);
    run.note("vikor_best", &v.compromise_set[0]);
    run.note("compromise_set", &v.compromise_set);
    run.note("acceptable_advantage", v.acceptable_advantage);
    run.note("acceptable_stability", v.acceptable_stability);
    run.note("spearman_rho", cmp.spearman_rho);
    run.note("kendall_tau", cmp.kendall_tau);
    Ok(())
}

pub fn load_indicator_table(run: &mut Run, path: &Path) -> Result<Vec<CountryIndicators>> {
    run.input(path)
        .map_err(|_| InputError(format!("cannot read indicator table {}", path.display())))?;
    Ok(indicators::read_indicator_table(open(path)?)?)
}

// ---- pipeline ----

#[derive(Debug, Clone, Args)]
pub struct PipelineArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub schema: Option<PathBuf>,
    #[arg(long)]
    pub sis: PathBuf,
    #[arg(long)]
    pub rules: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.5)]
    pub v: f64,
    #[arg(long)]
    pub fractional: bool,
}

/// ingest, indicators, the four network views, clustering and ranking, in
/// that order, with default file names.
pub fn pipeline(run: &mut Run, args: &PipelineArgs) -> Result<()> {
    let corpus = ingest(
        run,
        &IngestArgs {
            input: args.input.clone(),
            schema: args.schema.clone(),
            out: "corpus.ndjson".into(),
            exclusions: "exclusions.csv".into(),
            dedupe: false,
        },
    )?;
    let sis = read_sis(run, Some(&args.sis))?;
    let rows = indicators(
        run,
        &corpus,
        &sis,
        &IndicatorsArgs {
            corpus: "corpus.ndjson".into(),
            sis: Some(args.sis.clone()),
            fractional: args.fractional,
            out: "indicators.csv".into(),
            authors: "authors.csv".into(),
            years: "years.csv".into(),
            apgr_from: None,
            apgr_to: None,
        },
    )?;
    let views = [
        (
            "cooccurrence.graphml",
            KindArg::Cooccurrence,
            UnitArg::Document,
            true,
        ),
        (
            "coupling_documents.graphml",
            KindArg::Coupling,
            UnitArg::Document,
            false,
        ),
        (
            "coupling_countries.graphml",
            KindArg::Coupling,
            UnitArg::Country,
            false,
        ),
        (
            "cocitation.graphml",
            KindArg::Cocitation,
            UnitArg::Document,
            false,
        ),
    ];
    for (out, kind, unit, association) in views {
        graph(
            run,
            &corpus,
            &GraphArgs {
                corpus: "corpus.ndjson".into(),
                kind,
                min: None,
                source: SourceArg::Author,
                unit,
                min_doc_citations: None,
                association,
                exclude_uncited: false,
                clusters: None,
                out: out.into(),
            },
        )?;
    }
    cluster(
        run,
        &corpus,
        &ClusterArgs {
            corpus: "corpus.ndjson".into(),
            k: args.k,
            seed: args.seed,
            bisecting: false,
            max_iter: textmine::DEFAULT_MAX_ITER,
            rules: args.rules.clone(),
            stopwords: None,
            idf: IdfArg::Plain,
            prefix: "clusters".into(),
        },
    )?;
    rank(
        run,
        &rows,
        &RankArgs {
            indicators: "indicators.csv".into(),
            sis: None,
            criteria: None,
            topsis_criteria: None,
            vikor_criteria: None,
            v: args.v,
            normalization: Normalization::Vector,
            out: "ranking.csv".into(),
            compare: "rank_compare.csv".into(),
        },
    )
}
