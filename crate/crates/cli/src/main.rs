use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use bibliorank_core::graphs::GraphError;
use bibliorank_core::indicators::IndicatorError;
use bibliorank_core::ingest::IngestError;
use bibliorank_core::mcdm::McdmError;
use bibliorank_core::textmine::TextError;

use bibliorank_cli::commands::{
    self, ClusterArgs, GraphArgs, IndicatorsArgs, IngestArgs, InputError, PipelineArgs, RankArgs,
};
use bibliorank_cli::manifest::{OutputFailure, Run};

#[derive(Debug, Parser)]
#[command(
    name = "bibliorank",
    version,
    about = "Bibliometric indicators, networks, text clustering and TOPSIS/VIKOR ranking"
)]
struct Cli {
    /// Directory receiving every output file and the run manifest.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// Log level (error, warn, info, debug, trace).
    #[arg(long, global = true, default_value = "warn")]
    log: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a delimited export and write the corpus plus an exclusion report.
    Ingest(IngestArgs),
    /// Per-country indicators, author production and yearly counts.
    Indicators(IndicatorsArgs),
    /// Keyword co-occurrence, bibliographic coupling or co-citation network.
    Graph(GraphArgs),
    /// tf-idf matrix and k-means clusters of the corpus text.
    Cluster(ClusterArgs),
    /// TOPSIS and VIKOR ranking of an indicator table.
    Rank(RankArgs),
    /// Every step above on one export, with default file names.
    Pipeline(PipelineArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Ingest(_) => "ingest",
            Command::Indicators(_) => "indicators",
            Command::Graph(_) => "graph",
            Command::Cluster(_) => "cluster",
            Command::Rank(_) => "rank",
            Command::Pipeline(_) => "pipeline",
        }
    }
}

fn execute(cli: &Cli) -> Result<()> {
    let argv: Vec<String> = std::env::args().collect();
    let mut run = Run::new(&cli.out_dir, cli.command.name(), argv)?;
    match &cli.command {
        Command::Ingest(a) => {
            commands::ingest(&mut run, a)?;
        }
        Command::Indicators(a) => {
            let corpus = commands::load_corpus(&mut run, &a.corpus)?;
            let sis = commands::read_sis(&mut run, a.sis.as_deref())?;
            commands::indicators(&mut run, &corpus, &sis, a)?;
        }
        Command::Graph(a) => {
            let corpus = commands::load_corpus(&mut run, &a.corpus)?;
            commands::graph(&mut run, &corpus, a)?;
        }
        Command::Cluster(a) => {
            let corpus = commands::load_corpus(&mut run, &a.corpus)?;
            commands::cluster(&mut run, &corpus, a)?;
        }
        Command::Rank(a) => {
            let rows = commands::load_indicator_table(&mut run, &a.indicators)?;
            commands::rank(&mut run, &rows, a)?;
        }
        Command::Pipeline(a) => commands::pipeline(&mut run, a)?,
    }
    run.finish()?;
    Ok(())
}

/// 2 for problems with the user's input, 1 for everything else.
fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<OutputFailure>().is_some() {
        return 1;
    }
    let input = err.chain().any(|c| {
        c.is::<InputError>()
            || c.is::<IngestError>()
            || c.is::<IndicatorError>()
            || c.is::<GraphError>()
            || c.is::<TextError>()
            || c.is::<McdmError>()
    });
    if input {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::new()
        .parse_filters(&cli.log)
        .format_timestamp(None)
        .init();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
