//! Subcommand front end: `synth`, `ingest`, `build`, `recommend`, `classify`,
//! `export` and `report`.
//!
//! Each stage reads and writes files, so any stage can be rerun on its own.
//! Exit codes: 0 on success, 1 on a domain error, 2 on a usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use thiserror::Error;

mod commands;
mod config;
pub mod pipeline;
mod report;
mod store;

pub use commands::{
    cmd_build, cmd_classify, cmd_export, cmd_ingest, cmd_recommend, cmd_report, cmd_synth, ArchArg, BaselineArg, ClsBaselineArg,
    BuildArgs, ClassifyArgs, Cli, Command, ExportArgs, FormatArg, IngestArgs, MeasureArg, RecommendArgs, ReportArgs,
    SynthArgs,
};
pub use config::{Config, EmbeddingConfig, ExtractorKind, ProviderKind, SynthConfig};
pub use report::{run_report, RunReport};
pub use store::{
    load_graph, read_entity_store, read_queries, save_graph, write_entity_store, QueryLine, StoreRecord,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{failed} of {total} documents failed; successes written, failures listed in {}", manifest.display())]
    Partial {
        failed: usize,
        total: usize,
        manifest: PathBuf,
    },
    #[error(transparent)]
    Corpus(#[from] crate::corpus::CorpusError),
    #[error(transparent)]
    Extraction(#[from] crate::extraction::ExtractionError),
    #[error(transparent)]
    Embedding(#[from] crate::embedding::EmbeddingError),
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
    #[error(transparent)]
    Recommend(#[from] crate::recommend::RecommendError),
    #[error(transparent)]
    Gnn(#[from] crate::gnn::GnnError),
}

impl CliError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

/// Runs a parsed command line, writing its primary output to `out`.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = Config::load_or_default(cli.config.as_deref())?;
    match &cli.command {
        Command::Synth(a) => cmd_synth(a, &cfg, out),
        Command::Ingest(a) => cmd_ingest(a, &cfg, out),
        Command::Build(a) => cmd_build(a, &cfg, out),
        Command::Recommend(a) => cmd_recommend(a, &cfg, out),
        Command::Classify(a) => cmd_classify(a, &cfg, out),
        Command::Export(a) => cmd_export(a, &cfg, out),
        Command::Report(a) => cmd_report(a, &cfg, out),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code().clamp(0, 255) as u8);
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(&cli, &mut lock) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = lock.flush();
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
