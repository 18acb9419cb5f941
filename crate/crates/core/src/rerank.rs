//! Two-stage reranking of retrieved results.
//!
//! Stage one is a heuristic: any document whose title never mentions the
//! disease gets its score multiplied by a penalty factor. Stage two min-max
//! scales the scores to [0, 1] and, for the top K documents only, adds the
//! relevance probability from a trained logistic model; the tail keeps its
//! scores and order untouched.

pub mod logistic;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::corpus::CorpusStore;
use crate::eval::Qrels;
use crate::ranking::{compare_entries, RankedList, ScoredDoc};
use crate::tokenize;

pub use logistic::{
    train_logistic, LogisticModel, LogisticObjective, ModelError, Scaler, TrainOptions,
    TrainOutcome, PARAM_COUNT,
};

/// Number of features the reranker sees per document.
pub const FEATURE_COUNT: usize = 7;

/// Positive keywords shipped by default.
pub const DEFAULT_POSITIVE_KEYWORDS: [&str; 11] = [
    "treatment",
    "survival",
    "prognostic",
    "clinical",
    "prognosis",
    "therapy",
    "outcome",
    "resistance",
    "targets",
    "therapeutic",
    "immunotherapy",
];

/// Negative keywords shipped by default.
pub const DEFAULT_NEGATIVE_KEYWORDS: [&str; 11] = [
    "pathogenesis",
    "tumor",
    "development",
    "model",
    "tissue",
    "mouse",
    "specific",
    "staining",
    "dna",
    "case",
    "combinations",
];

/// Heading phrases shipped by default. "drug therapy" is listed twice
/// upstream and the duplicate is kept verbatim, so a matching heading
/// contributes two hits.
pub const DEFAULT_HEADING_KEYWORDS: [&str; 11] = [
    "humans",
    "mutation",
    "genetics",
    "drug therapy",
    "metabolism",
    "drug therapy",
    "pharmacology",
    "antagonists & inhibitors",
    "drug effects",
    "therapeutic use",
    "immunology",
];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RerankError {
    #[error("cannot min-max scale an empty score list")]
    EmptyScores,
    #[error("document `{0}` is missing from the corpus store")]
    MissingDocument(String),
    #[error("penalty factor must lie in (0, 1], got {0}")]
    InvalidPenaltyFactor(f64),
    #[error("top_k must be at least 1")]
    InvalidTopK,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Keyword lists driving the count features. Construction lowercases every
/// term; list order (and any upstream duplicates) is preserved.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KeywordLists {
    pub positive: Vec<String>,
    pub negative: Vec<String>,
    pub heading: Vec<String>,
}

impl Default for KeywordLists {
    fn default() -> Self {
        Self::new(
            DEFAULT_POSITIVE_KEYWORDS
                .iter()
                .map(|s| s.to_string())
                .collect(),
            DEFAULT_NEGATIVE_KEYWORDS
                .iter()
                .map(|s| s.to_string())
                .collect(),
            DEFAULT_HEADING_KEYWORDS
                .iter()
                .map(|s| s.to_string())
                .collect(),
        )
    }
}

impl KeywordLists {
    pub fn new(positive: Vec<String>, negative: Vec<String>, heading: Vec<String>) -> Self {
        let lower =
            |items: Vec<String>| items.into_iter().map(|s| s.trim().to_lowercase()).collect();
        Self {
            positive: lower(positive),
            negative: lower(negative),
            heading: lower(heading),
        }
    }
}

/// The reranker's per-document feature vector, in fixed order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FeatureVector {
    /// Whether any disease surface form appears in the title.
    pub disease_in_title: bool,
    /// Positive keyword occurrences in the title.
    pub positive_in_title: u32,
    /// Positive keyword occurrences in the abstract.
    pub positive_in_abstract: u32,
    /// Negative keyword occurrences in the title.
    pub negative_in_title: u32,
    /// Negative keyword occurrences in the abstract.
    pub negative_in_abstract: u32,
    /// Whether any publication type mentions a clinical trial.
    pub is_clinical_trial: bool,
    /// Heading keyword hits across the MeSH headings.
    pub heading_hits: u32,
}

impl FeatureVector {
    pub fn as_array(&self) -> [f64; FEATURE_COUNT] {
        [
            self.disease_in_title as u8 as f64,
            self.positive_in_title as f64,
            self.positive_in_abstract as f64,
            self.negative_in_title as f64,
            self.negative_in_abstract as f64,
            self.is_clinical_trial as u8 as f64,
            self.heading_hits as f64,
        ]
    }

    /// Field names in vector order.
    pub const NAMES: [&'static str; FEATURE_COUNT] = [
        "disease_in_title",
        "positive_in_title",
        "positive_in_abstract",
        "negative_in_title",
        "negative_in_abstract",
        "is_clinical_trial",
        "heading_hits",
    ];
}

/// Rerank stage settings: the title-penalty factor and how many documents
/// the trained model re-scores.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RerankConfig {
    penalty_factor: f64,
    top_k: usize,
}

impl Default for RerankConfig {
    fn default() -> Self {
        Self {
            penalty_factor: 0.6,
            top_k: 50,
        }
    }
}

impl RerankConfig {
    pub fn new(penalty_factor: f64, top_k: usize) -> Result<Self, RerankError> {
        if !(penalty_factor > 0.0 && penalty_factor <= 1.0) {
            return Err(RerankError::InvalidPenaltyFactor(penalty_factor));
        }
        if top_k == 0 {
            return Err(RerankError::InvalidTopK);
        }
        Ok(Self {
            penalty_factor,
            top_k,
        })
    }

    pub fn penalty_factor(&self) -> f64 {
        self.penalty_factor
    }

    pub fn top_k(&self) -> usize {
        self.top_k
    }
}

/// True when the tokenized needle occurs as a contiguous run inside the
/// tokenized haystack.
fn contains_token_run(haystack: &[String], needle: &[String]) -> bool {
    if needle.is_empty() || needle.len() > haystack.len() {
        return false;
    }
    haystack
        .windows(needle.len())
        .any(|window| window == needle)
}

fn count_token_runs(haystack: &[String], needle: &[String]) -> u32 {
    if needle.is_empty() || needle.len() > haystack.len() {
        return 0;
    }
    haystack
        .windows(needle.len())
        .filter(|window| *window == needle)
        .count() as u32
}

/// Whether any disease surface form occurs (as a token run) in the title.
pub fn title_mentions_disease(title: &str, disease_surfaces: &[String]) -> bool {
    let title_tokens = tokenize::tokenize(title);
    disease_surfaces.iter().any(|surface| {
        let surface_tokens = tokenize::tokenize(surface);
        contains_token_run(&title_tokens, &surface_tokens)
    })
}

fn count_keywords(tokens: &[String], keywords: &[String]) -> u32 {
    keywords
        .iter()
        .map(|keyword| {
            let keyword_tokens = tokenize::tokenize(keyword);
            count_token_runs(tokens, &keyword_tokens)
        })
        .sum()
}

/// Extracts the seven reranker features for one document.
///
/// Keyword counts are token-level with multiplicity; heading phrases match
/// as case-insensitive substrings of each MeSH heading string; the clinical
/// trial flag looks for "clinical trial" inside any publication type.
pub fn extract_features(
    doc: &crate::corpus::DocumentRecord,
    disease_surfaces: &[String],
    keywords: &KeywordLists,
) -> FeatureVector {
    let title_tokens = tokenize::tokenize(&doc.title);
    let abstract_tokens = tokenize::tokenize(&doc.abstract_text);

    let disease_in_title = disease_surfaces.iter().any(|surface| {
        let surface_tokens = tokenize::tokenize(surface);
        contains_token_run(&title_tokens, &surface_tokens)
    });

    let is_clinical_trial = doc
        .publication_types
        .iter()
        .any(|pt| pt.to_lowercase().contains("clinical trial"));

    let heading_hits = keywords
        .heading
        .iter()
        .map(|phrase| {
            doc.mesh_headings
                .iter()
                .filter(|heading| heading.to_lowercase().contains(phrase))
                .count() as u32
        })
        .sum();

    FeatureVector {
        disease_in_title,
        positive_in_title: count_keywords(&title_tokens, &keywords.positive),
        positive_in_abstract: count_keywords(&abstract_tokens, &keywords.positive),
        negative_in_title: count_keywords(&title_tokens, &keywords.negative),
        negative_in_abstract: count_keywords(&abstract_tokens, &keywords.negative),
        is_clinical_trial,
        heading_hits,
    }
}

/// Multiplies the score of every document whose title lacks all disease
/// surfaces by `factor`, then re-sorts (descending score, ties by doc id).
/// A document missing from the store is treated as having no title.
///
/// `factor` must lie in (0, 1]; validate via [`RerankConfig::new`].
pub fn apply_title_penalty(
    ranked: &RankedList,
    store: &CorpusStore,
    disease_surfaces: &[String],
    factor: f64,
) -> RankedList {
    debug_assert!(factor > 0.0 && factor <= 1.0);
    let mut entries: Vec<ScoredDoc> = ranked
        .entries
        .iter()
        .map(|entry| {
            let mentions = store
                .get(&entry.doc_id)
                .map(|doc| title_mentions_disease(&doc.title, disease_surfaces))
                .unwrap_or(false);
            let score = if mentions {
                entry.score
            } else {
                entry.score * factor
            };
            ScoredDoc::new(entry.doc_id.clone(), score)
        })
        .collect();
    entries.sort_by(compare_entries);
    RankedList::new(ranked.topic_number, entries)
}

/// Min-max transform onto [0, 1]: `(s - min) / (max - min)`. A constant
/// input maps to all zeros.
pub fn min_max_scale(scores: &[f64]) -> Result<Vec<f64>, RerankError> {
    let (Some(min), Some(max)) = (
        scores.iter().copied().reduce(f64::min),
        scores.iter().copied().reduce(f64::max),
    ) else {
        return Err(RerankError::EmptyScores);
    };
    let range = max - min;
    if range == 0.0 {
        return Ok(scores.iter().map(|_| 0.0).collect());
    }
    Ok(scores.iter().map(|s| (s - min) / range).collect())
}

/// Fuses model probabilities into the top K entries: each gets
/// `score + P(relevant)`, the K are re-sorted among themselves, and the rest
/// of the list is untouched (same ids, same scores, same order).
///
/// Expects scores already penalty-adjusted and min-max scaled.
pub fn rerank_top_k(
    ranked: &RankedList,
    model: &LogisticModel,
    store: &CorpusStore,
    disease_surfaces: &[String],
    keywords: &KeywordLists,
    config: &RerankConfig,
) -> Result<RankedList, RerankError> {
    let k = config.top_k().min(ranked.entries.len());
    let mut head: Vec<ScoredDoc> = Vec::with_capacity(k);
    for entry in &ranked.entries[..k] {
        let doc = store
            .get(&entry.doc_id)
            .ok_or_else(|| RerankError::MissingDocument(entry.doc_id.clone()))?;
        let features = extract_features(doc, disease_surfaces, keywords);
        let probability = model.predict_prob(&features)?;
        head.push(ScoredDoc::new(
            entry.doc_id.clone(),
            entry.score + probability,
        ));
    }
    head.sort_by(compare_entries);
    head.extend(ranked.entries[k..].iter().cloned());
    Ok(RankedList::new(ranked.topic_number, head))
}

/// The full rerank pipeline: title penalty, min-max scaling over the whole
/// list, then top-K score/probability fusion. An empty input passes through
/// unchanged.
pub fn rerank_pipeline(
    raw: &RankedList,
    model: &LogisticModel,
    store: &CorpusStore,
    disease_surfaces: &[String],
    keywords: &KeywordLists,
    config: &RerankConfig,
) -> Result<RankedList, RerankError> {
    if raw.is_empty() {
        return Ok(raw.clone());
    }
    let penalized = apply_title_penalty(raw, store, disease_surfaces, config.penalty_factor());
    let scores: Vec<f64> = penalized.entries.iter().map(|e| e.score).collect();
    let scaled_scores = min_max_scale(&scores)?;
    let scaled = RankedList::new(
        penalized.topic_number,
        penalized
            .entries
            .iter()
            .zip(scaled_scores)
            .map(|(entry, score)| ScoredDoc::new(entry.doc_id.clone(), score))
            .collect(),
    );
    rerank_top_k(&scaled, model, store, disease_surfaces, keywords, config)
}

/// Labeled examples for training, plus tallies of judged pairs that could
/// not be used.
#[derive(Debug, Clone, Default)]
pub struct TrainingSet {
    pub examples: Vec<(FeatureVector, bool)>,
    /// Judged documents absent from the corpus store.
    pub skipped_missing_doc: u64,
    /// Judgments for topics we have no disease surfaces for.
    pub skipped_unknown_topic: u64,
}

/// Builds one labeled example per judged (topic, document) pair present in
/// the store. Grade >= 1 counts as relevant; features are extracted against
/// that topic's disease surfaces. Iteration order (topic, then doc id) is
/// deterministic.
pub fn build_training_set(
    topic_surfaces: &BTreeMap<u32, Vec<String>>,
    qrels: &Qrels,
    store: &CorpusStore,
    keywords: &KeywordLists,
) -> TrainingSet {
    let mut set = TrainingSet::default();
    for (topic, judgments) in qrels.iter() {
        let Some(surfaces) = topic_surfaces.get(&topic) else {
            set.skipped_unknown_topic += judgments.len() as u64;
            continue;
        };
        for (doc_id, grade) in judgments {
            let Some(doc) = store.get(doc_id) else {
                set.skipped_missing_doc += 1;
                continue;
            };
            let features = extract_features(doc, surfaces, keywords);
            set.examples.push((features, *grade >= 1));
        }
    }
    set
}
