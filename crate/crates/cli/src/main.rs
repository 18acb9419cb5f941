use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use pmsearch_cli::commands;
use pmsearch_cli::config::{PipelineConfig, Strategy};

#[derive(Parser)]
#[command(
    name = "pmsearch",
    version,
    about = "Fielded literature search with knowledge-base query expansion and a two-stage rerank"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and persist the fielded index from the corpus file
    Index(IndexArgs),
    /// Run a retrieval strategy over the topics and write a TREC run file
    Run(RunArgs),
    /// Train the logistic reranker from relevance judgments
    Train(TrainArgs),
    /// Score a run file against the qrels
    Eval(EvalArgs),
}

#[derive(Args)]
struct IndexArgs {
    /// Pipeline configuration file (TOML)
    #[arg(long)]
    config: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    /// Pipeline configuration file (TOML)
    #[arg(long)]
    config: PathBuf,
    /// Retrieval strategy; overrides the config
    #[arg(long)]
    strategy: Option<Strategy>,
    /// Run file destination; overrides the config
    #[arg(long)]
    output: Option<PathBuf>,
    /// Retrieval depth per topic; overrides the config
    #[arg(long)]
    depth: Option<usize>,
}

#[derive(Args)]
struct TrainArgs {
    /// Pipeline configuration file (TOML)
    #[arg(long)]
    config: PathBuf,
    /// Model file destination; overrides the config
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// Pipeline configuration file (TOML)
    #[arg(long)]
    config: PathBuf,
    /// Run file to score; overrides the config
    #[arg(long)]
    run: Option<PathBuf>,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Index(args) => {
            let config = PipelineConfig::load(&args.config)?;
            commands::cmd_index(&config)
        }
        Command::Run(args) => {
            let mut config = PipelineConfig::load(&args.config)?;
            if let Some(strategy) = args.strategy {
                config.strategy = strategy;
            }
            if let Some(output) = args.output {
                config.paths.run_file = output;
            }
            if let Some(depth) = args.depth {
                anyhow::ensure!(depth > 0, "depth must be at least 1");
                config.depth = depth;
            }
            commands::cmd_run(&config)
        }
        Command::Train(args) => {
            let mut config = PipelineConfig::load(&args.config)?;
            if let Some(output) = args.output {
                config.paths.model_file = output;
            }
            commands::cmd_train(&config)
        }
        Command::Eval(args) => {
            let mut config = PipelineConfig::load(&args.config)?;
            if let Some(run) = args.run {
                config.paths.run_file = run;
            }
            commands::cmd_eval(&config)
        }
    }
}
