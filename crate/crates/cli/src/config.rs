//! Pipeline configuration: one TOML file pins every knob of a batch run, so
//! the retrieval-strategy grid is reproducible. Command-line flags override
//! individual fields.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use pmsearch_core::expand::ExpansionWeights;
use pmsearch_core::index::Bm25Params;
use pmsearch_core::rerank::{RerankConfig, TrainOptions};
use pmsearch_core::tokenize::TokenizerConfig;

/// The retrieval-strategy ladder. Each step adds one stage on top of the
/// previous: expansion terms, acronyms, the title penalty, the trained
/// reranker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum Strategy {
    /// Original disease and gene terms only.
    #[serde(rename = "baseline")]
    #[value(name = "baseline")]
    Baseline,
    /// Adds preferred term, synonyms, and gene aliases.
    #[serde(rename = "expand")]
    #[value(name = "expand")]
    Expand,
    /// Adds disease acronyms (knowledge base plus corpus-mined).
    #[serde(rename = "expand+acronym")]
    #[value(name = "expand+acronym")]
    ExpandAcronym,
    /// Adds the title-penalty rerank.
    #[serde(rename = "heuristic")]
    #[value(name = "heuristic")]
    Heuristic,
    /// Adds the trained logistic reranker on top of the penalty.
    #[serde(rename = "full")]
    #[value(name = "full")]
    Full,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Baseline => "baseline",
            Strategy::Expand => "expand",
            Strategy::ExpandAcronym => "expand+acronym",
            Strategy::Heuristic => "heuristic",
            Strategy::Full => "full",
        }
    }

    /// Whether the strategy needs the disease/gene knowledge bases.
    pub fn uses_knowledge_bases(self) -> bool {
        !matches!(self, Strategy::Baseline)
    }

    /// Whether the strategy mines and applies disease acronyms.
    pub fn uses_acronyms(self) -> bool {
        matches!(
            self,
            Strategy::ExpandAcronym | Strategy::Heuristic | Strategy::Full
        )
    }

    pub fn uses_model(self) -> bool {
        matches!(self, Strategy::Full)
    }
}

/// Which disease surfaces the title tests (penalty stage and the
/// disease-in-title feature) match against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum TitleMatch {
    /// Original term plus preferred term, synonyms, and acronyms.
    #[serde(rename = "all-surfaces")]
    #[default]
    AllSurfaces,
    /// The topic's original disease term only.
    #[serde(rename = "original-only")]
    OriginalOnly,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct PathsSection {
    pub corpus: PathBuf,
    pub topics: PathBuf,
    pub disease_kb: PathBuf,
    pub gene_table: PathBuf,
    pub qrels: PathBuf,
    pub index_dir: PathBuf,
    pub model_file: PathBuf,
    pub run_file: PathBuf,
    /// Optional keyword-list override; the built-in lists apply when unset.
    pub keyword_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Bm25Section {
    pub k1: f64,
    pub b: f64,
    pub clamp_negative_idf: bool,
}

impl Default for Bm25Section {
    fn default() -> Self {
        Self {
            k1: 1.25,
            b: 0.75,
            clamp_negative_idf: true,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TokenizerSection {
    pub remove_stopwords: bool,
    /// Custom stopword list; the pinned default list applies when unset.
    pub stopwords: Option<Vec<String>>,
}

impl Default for TokenizerSection {
    fn default() -> Self {
        Self {
            remove_stopwords: true,
            stopwords: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RerankSection {
    pub penalty_factor: f64,
    pub top_k: usize,
    pub title_match: TitleMatch,
}

impl Default for RerankSection {
    fn default() -> Self {
        Self {
            penalty_factor: 0.6,
            top_k: 50,
            title_match: TitleMatch::default(),
        }
    }
}

/// The full configuration file. Every section is optional and defaults to
/// the shipped settings; only the paths a command actually touches must
/// exist.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub run_tag: String,
    pub strategy: Strategy,
    /// Retrieval depth per topic.
    pub depth: usize,
    pub paths: PathsSection,
    pub bm25: Bm25Section,
    pub tokenizer: TokenizerSection,
    pub weights: ExpansionWeights,
    pub rerank: RerankSection,
    pub train: TrainOptions,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            run_tag: "pmsearch".to_string(),
            strategy: Strategy::Full,
            depth: pmsearch_core::index::SEARCH_DEPTH,
            paths: PathsSection::default(),
            bm25: Bm25Section::default(),
            tokenizer: TokenizerSection::default(),
            weights: ExpansionWeights::default(),
            rerank: RerankSection::default(),
            train: TrainOptions::default(),
        }
    }
}

impl PipelineConfig {
    /// Loads a TOML config. Relative paths are resolved against the config
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        let mut config: PipelineConfig = toml::from_str(&text)
            .with_context(|| format!("cannot parse config file {}", path.display()))?;
        if config.depth == 0 {
            bail!("config error: depth must be at least 1");
        }
        let base = path.parent().unwrap_or(Path::new("."));
        config.paths.resolve_against(base);
        Ok(config)
    }

    pub fn bm25_params(&self) -> Result<Bm25Params> {
        Ok(Bm25Params::new(self.bm25.k1, self.bm25.b)?.with_clamp(self.bm25.clamp_negative_idf))
    }

    pub fn tokenizer_config(&self) -> TokenizerConfig {
        match (&self.tokenizer.stopwords, self.tokenizer.remove_stopwords) {
            (_, false) => TokenizerConfig::keep_stopwords(),
            (Some(words), true) => TokenizerConfig::with_stopwords(words),
            (None, true) => TokenizerConfig::default(),
        }
    }

    pub fn rerank_config(&self) -> Result<RerankConfig> {
        Ok(RerankConfig::new(
            self.rerank.penalty_factor,
            self.rerank.top_k,
        )?)
    }

    /// Where the machine-readable metrics land: beside the run file.
    pub fn metrics_file_for(run_file: &Path) -> PathBuf {
        let mut name = run_file.file_name().unwrap_or_default().to_os_string();
        name.push(".metrics.json");
        run_file.with_file_name(name)
    }
}

impl PathsSection {
    fn resolve_against(&mut self, base: &Path) {
        for path in [
            &mut self.corpus,
            &mut self.topics,
            &mut self.disease_kb,
            &mut self.gene_table,
            &mut self.qrels,
            &mut self.index_dir,
            &mut self.model_file,
            &mut self.run_file,
        ] {
            if path.is_relative() && !path.as_os_str().is_empty() {
                *path = base.join(&path);
            }
        }
        if let Some(keyword_file) = &mut self.keyword_file {
            if keyword_file.is_relative() {
                *keyword_file = base.join(&keyword_file);
            }
        }
    }
}
