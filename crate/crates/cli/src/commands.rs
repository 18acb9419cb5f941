//! The four batch commands: `index`, `run`, `train`, `eval`.

use anyhow::{bail, Context, Result};

use pmsearch_core::eval::{evaluate_ranked_lists, evaluate_run, MetricsReport};
use pmsearch_core::index::FieldedIndex;
use pmsearch_core::rerank::{build_training_set, train_logistic, KeywordLists};

use crate::config::{PipelineConfig, Strategy};
use crate::formats::{corpus, index_io, kb, model, qrels, run, write_atomic};
use crate::pipeline::SearchContext;

/// Builds the index from the corpus file and persists it. Per-record
/// problems are warnings; the command fails only on I/O or config errors.
pub fn cmd_index(config: &PipelineConfig) -> Result<()> {
    let outcome = corpus::read_documents(&config.paths.corpus)?;
    for error in &outcome.line_errors {
        eprintln!(
            "warning: {}:{}: {}",
            config.paths.corpus.display(),
            error.line,
            error.message
        );
    }
    let index = FieldedIndex::build(
        outcome.store,
        config.bm25_params()?,
        config.tokenizer_config(),
    )?;
    index_io::save_index(&config.paths.index_dir, &index)?;
    println!(
        "indexed {} documents ({} duplicates discarded, {} records rejected) -> {}",
        outcome.report.kept,
        outcome.report.discarded,
        outcome.report.rejected,
        config.paths.index_dir.display()
    );
    Ok(())
}

fn load_context(config: &PipelineConfig, strategy: Strategy) -> Result<SearchContext> {
    let index = index_io::load_index(&config.paths.index_dir)
        .context("cannot load index; run the `index` command first")?;
    let (diseases, genes) = if strategy.uses_knowledge_bases() {
        (
            kb::read_disease_kb(&config.paths.disease_kb)?,
            kb::read_gene_table(&config.paths.gene_table)?,
        )
    } else {
        Default::default()
    };
    let keywords = match &config.paths.keyword_file {
        Some(path) => model::read_keywords(path)?,
        None => KeywordLists::default(),
    };
    Ok(SearchContext {
        index,
        diseases,
        genes,
        weights: config.weights,
        rerank: config.rerank_config()?,
        keywords,
        depth: config.depth,
        title_match: config.rerank.title_match,
    })
}

/// Runs the configured retrieval strategy over all topics and writes the
/// TREC run file.
pub fn cmd_run(config: &PipelineConfig) -> Result<()> {
    let strategy = config.strategy;
    let topics = crate::formats::topics::read_topics(&config.paths.topics)?;
    let mut context = load_context(config, strategy)?;
    let model = if strategy.uses_model() {
        let (model, keywords) = model::load_model(&config.paths.model_file)
            .context("strategy `full` needs a model file; run the `train` command first")?;
        // Features at rerank time use the lists the model was trained with.
        context.keywords = keywords;
        Some(model)
    } else {
        None
    };
    let lists = context.run_topics(&topics, strategy, model.as_ref())?;
    let entries = run::ranked_lists_to_entries(&lists, &config.run_tag);
    run::write_run(&config.paths.run_file, &entries)?;
    let retrieved: usize = lists.iter().map(|l| l.len()).sum();
    println!(
        "strategy {}: retrieved {} documents over {} topics (depth {}) -> {}",
        strategy.name(),
        retrieved,
        topics.len(),
        config.depth,
        config.paths.run_file.display()
    );
    Ok(())
}

/// Trains the logistic reranker from the qrels and writes the model file.
/// The expand+acronym retrieval runs first and its recall is reported, so
/// the training log shows what the reranker will sit on top of.
pub fn cmd_train(config: &PipelineConfig) -> Result<()> {
    let topics = crate::formats::topics::read_topics(&config.paths.topics)?;
    let qrels = qrels::read_qrels(&config.paths.qrels)?;
    if qrels.is_empty() {
        bail!(
            "qrels file {} holds no judgments",
            config.paths.qrels.display()
        );
    }
    let context = load_context(config, Strategy::ExpandAcronym)?;

    let lists = context.run_topics(&topics, Strategy::ExpandAcronym, None)?;
    let retrieval = evaluate_ranked_lists(lists.iter(), &qrels);
    println!(
        "training retrieval (expand+acronym): mean R@1000 {:.4}, mean P@10 {:.4} over {} topics",
        retrieval.mean_recall_at_1000,
        retrieval.mean_precision_at_10,
        retrieval.per_topic.len()
    );

    let surfaces = context.topic_surfaces(&topics)?;
    let training = build_training_set(&surfaces, &qrels, context.index.store(), &context.keywords);
    if training.skipped_missing_doc > 0 {
        eprintln!(
            "warning: {} judged documents are not in the corpus and were skipped",
            training.skipped_missing_doc
        );
    }
    if training.skipped_unknown_topic > 0 {
        eprintln!(
            "warning: {} judgments reference topics outside the topic file and were skipped",
            training.skipped_unknown_topic
        );
    }
    let positives = training.examples.iter().filter(|(_, label)| *label).count();
    let outcome = train_logistic(&training.examples, &config.train)?;
    model::save_model(&config.paths.model_file, &outcome.model, &context.keywords)?;
    println!(
        "trained on {} examples ({} relevant) in {} iterations, final loss {:.6} -> {}",
        training.examples.len(),
        positives,
        outcome.model.iterations(),
        outcome.model.final_loss(),
        config.paths.model_file.display()
    );
    Ok(())
}

/// Scores a run file against the qrels, prints the per-topic table, and
/// writes the same report as JSON beside the run file.
pub fn cmd_eval(config: &PipelineConfig) -> Result<()> {
    let entries = run::read_run(&config.paths.run_file)?;
    let qrels = qrels::read_qrels(&config.paths.qrels)?;
    let report = evaluate_run(&entries, &qrels)?;
    print_report(&report);

    let metrics_path = PipelineConfig::metrics_file_for(&config.paths.run_file);
    let mut json = serde_json::to_string_pretty(&report)?;
    json.push('\n');
    write_atomic(&metrics_path, json.as_bytes())?;
    println!("metrics written to {}", metrics_path.display());
    Ok(())
}

fn print_report(report: &MetricsReport) {
    println!(
        "{:>8}  {:>7}  {:>7}  {:>7}  {:>7}  {:>9}",
        "topic", "P@10", "R@1000", "R-prec", "judged", "unjudged"
    );
    for (topic, metrics) in &report.per_topic {
        println!(
            "{topic:>8}  {:>7.4}  {:>7.4}  {:>7.4}  {:>7}  {:>9}",
            metrics.precision_at_10,
            metrics.recall_at_1000,
            metrics.r_precision,
            metrics.judged_retrieved,
            metrics.unjudged_retrieved
        );
    }
    println!(
        "{:>8}  {:>7.4}  {:>7.4}  {:>7.4}",
        "mean", report.mean_precision_at_10, report.mean_recall_at_1000, report.mean_r_precision
    );
    if !report.qrels_topics_missing_from_run.is_empty() {
        eprintln!(
            "warning: {} judged topic(s) missing from the run and ignored: {:?}",
            report.qrels_topics_missing_from_run.len(),
            report.qrels_topics_missing_from_run
        );
    }
}
