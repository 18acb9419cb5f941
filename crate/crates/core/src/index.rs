//! Fielded inverted index and Okapi BM25 scoring.
//!
//! Title and abstract are the two analyzed fields; everything else is stored
//! verbatim in the corpus store the index owns. Scoring sums weighted BM25
//! contributions over both fields, while candidacy requires at least one
//! clause token to match in the abstract (title matches alone never retrieve
//! a document).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::corpus::CorpusStore;
use crate::expand::ExpandedQuery;
use crate::math;
use crate::ranking::{compare_entries, RankedList, ScoredDoc};
use crate::tokenize::TokenizerConfig;

/// Standard retrieval depth per topic.
pub const SEARCH_DEPTH: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IndexError {
    #[error("k1 must be positive, got {0}")]
    InvalidK1(String),
    #[error("b must lie in [0, 1], got {0}")]
    InvalidB(String),
    #[error("corrupt index parts: {0}")]
    CorruptParts(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("query has no clauses")]
    EmptyQuery,
}

/// BM25 hyperparameters. The IDF clamp zeroes negative IDF values (terms in
/// more than half the collection) and can be switched off to score the
/// formula verbatim.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Bm25Params {
    k1: f64,
    b: f64,
    clamp_negative_idf: bool,
}

impl Default for Bm25Params {
    fn default() -> Self {
        Self {
            k1: 1.25,
            b: 0.75,
            clamp_negative_idf: true,
        }
    }
}

impl Bm25Params {
    pub fn new(k1: f64, b: f64) -> Result<Self, IndexError> {
        if !k1.is_finite() || k1 <= 0.0 {
            return Err(IndexError::InvalidK1(alloc::format!("{k1}")));
        }
        if !(0.0..=1.0).contains(&b) {
            return Err(IndexError::InvalidB(alloc::format!("{b}")));
        }
        Ok(Self {
            k1,
            b,
            clamp_negative_idf: true,
        })
    }

    pub fn with_clamp(mut self, clamp_negative_idf: bool) -> Self {
        self.clamp_negative_idf = clamp_negative_idf;
        self
    }

    pub fn k1(&self) -> f64 {
        self.k1
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn clamp_negative_idf(&self) -> bool {
        self.clamp_negative_idf
    }

    fn validate(&self) -> Result<(), IndexError> {
        Self::new(self.k1, self.b).map(|_| ())
    }
}

/// The two analyzed fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Field {
    Title,
    Abstract,
}

impl Field {
    pub const ALL: [Field; 2] = [Field::Title, Field::Abstract];

    fn slot(self) -> usize {
        match self {
            Field::Title => 0,
            Field::Abstract => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Field::Title => "title",
            Field::Abstract => "abstract",
        }
    }
}

/// One posting: a document (by ingestion ordinal) and its term frequency in
/// the field. Lists are sorted by the document's id string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Posting {
    pub ordinal: u32,
    pub term_frequency: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct FieldData {
    postings: BTreeMap<String, Vec<Posting>>,
    /// Token count per document, aligned with store ordinals.
    lengths: Vec<u32>,
    total_tokens: u64,
}

impl FieldData {
    fn document_frequency(&self, term: &str) -> usize {
        self.postings.get(term).map_or(0, Vec::len)
    }
}

/// Per-field collection statistics used by the scoring formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldStats {
    /// Total number of documents in the collection.
    pub doc_count: usize,
    /// Mean token count per document (zero-length fields included).
    pub avg_field_length: f64,
    pub total_tokens: u64,
}

/// Fielded index over a finalized corpus store. Immutable once built:
/// searches are read-only and safe to run concurrently.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldedIndex {
    store: CorpusStore,
    params: Bm25Params,
    tokenizer: TokenizerConfig,
    fields: [FieldData; 2],
}

impl FieldedIndex {
    /// Builds postings and statistics for the title and abstract fields.
    /// Deterministic: an identical store yields an identical index.
    pub fn build(
        store: CorpusStore,
        params: Bm25Params,
        tokenizer: TokenizerConfig,
    ) -> Result<Self, IndexError> {
        params.validate()?;
        let mut fields: [FieldData; 2] = Default::default();
        for (ordinal, doc) in store.iter().enumerate() {
            for field in Field::ALL {
                let text = match field {
                    Field::Title => &doc.title,
                    Field::Abstract => &doc.abstract_text,
                };
                let tokens = tokenizer.tokenize(text);
                let data = &mut fields[field.slot()];
                data.lengths.push(tokens.len() as u32);
                data.total_tokens += tokens.len() as u64;
                let mut frequencies: BTreeMap<String, u32> = BTreeMap::new();
                for token in tokens {
                    *frequencies.entry(token).or_insert(0) += 1;
                }
                for (term, term_frequency) in frequencies {
                    data.postings.entry(term).or_default().push(Posting {
                        ordinal: ordinal as u32,
                        term_frequency,
                    });
                }
            }
        }
        // Posting lists sort by the document id string, not ingest order.
        for data in &mut fields {
            for list in data.postings.values_mut() {
                list.sort_by(|a, b| {
                    let id_a = &store
                        .doc_at(a.ordinal as usize)
                        .expect("ordinal in range")
                        .doc_id;
                    let id_b = &store
                        .doc_at(b.ordinal as usize)
                        .expect("ordinal in range")
                        .doc_id;
                    id_a.cmp(id_b)
                });
            }
        }
        Ok(Self {
            store,
            params,
            tokenizer,
            fields,
        })
    }

    /// Reassembles an index from persisted parts, revalidating the structural
    /// invariants (lengths aligned with the store, ordinals in range, posting
    /// lists id-sorted with positive frequencies).
    pub fn from_parts(
        store: CorpusStore,
        params: Bm25Params,
        tokenizer: TokenizerConfig,
        title: (BTreeMap<String, Vec<Posting>>, Vec<u32>),
        abstract_field: (BTreeMap<String, Vec<Posting>>, Vec<u32>),
    ) -> Result<Self, IndexError> {
        params.validate()?;
        let mut fields: [FieldData; 2] = Default::default();
        for (field, (postings, lengths)) in Field::ALL.into_iter().zip([title, abstract_field]) {
            if lengths.len() != store.len() {
                return Err(IndexError::CorruptParts(alloc::format!(
                    "{} lengths cover {} documents, store has {}",
                    field.name(),
                    lengths.len(),
                    store.len()
                )));
            }
            let total_tokens = lengths.iter().map(|&l| l as u64).sum();
            for (term, list) in &postings {
                let mut previous: Option<&str> = None;
                for posting in list {
                    if posting.term_frequency == 0 {
                        return Err(IndexError::CorruptParts(alloc::format!(
                            "zero term frequency for `{term}` in {}",
                            field.name()
                        )));
                    }
                    let doc = store.doc_at(posting.ordinal as usize).ok_or_else(|| {
                        IndexError::CorruptParts(alloc::format!(
                            "posting ordinal {} out of range for `{term}`",
                            posting.ordinal
                        ))
                    })?;
                    if let Some(prev) = previous {
                        if prev >= doc.doc_id.as_str() {
                            return Err(IndexError::CorruptParts(alloc::format!(
                                "posting list for `{term}` in {} is not id-sorted",
                                field.name()
                            )));
                        }
                    }
                    previous = Some(doc.doc_id.as_str());
                }
            }
            fields[field.slot()] = FieldData {
                postings,
                lengths,
                total_tokens,
            };
        }
        Ok(Self {
            store,
            params,
            tokenizer,
            fields,
        })
    }

    pub fn store(&self) -> &CorpusStore {
        &self.store
    }

    pub fn params(&self) -> &Bm25Params {
        &self.params
    }

    pub fn tokenizer(&self) -> &TokenizerConfig {
        &self.tokenizer
    }

    pub fn postings(&self, field: Field) -> &BTreeMap<String, Vec<Posting>> {
        &self.fields[field.slot()].postings
    }

    /// Per-document token counts for a field, aligned with store ordinals.
    pub fn field_lengths(&self, field: Field) -> &[u32] {
        &self.fields[field.slot()].lengths
    }

    pub fn stats(&self, field: Field) -> FieldStats {
        let data = &self.fields[field.slot()];
        let doc_count = self.store.len();
        let avg_field_length = if doc_count == 0 {
            0.0
        } else {
            data.total_tokens as f64 / doc_count as f64
        };
        FieldStats {
            doc_count,
            avg_field_length,
            total_tokens: data.total_tokens,
        }
    }

    /// Number of documents whose field contains the term.
    pub fn document_frequency(&self, field: Field, term: &str) -> usize {
        self.fields[field.slot()].document_frequency(term)
    }

    /// Inverse document frequency of a normalized token:
    /// `ln((N - n + 0.5) / (n + 0.5))`, clamped at zero unless the clamp is
    /// disabled. Unseen terms use `n = 0`.
    pub fn idf(&self, field: Field, term: &str) -> f64 {
        let doc_count = self.store.len() as f64;
        let document_frequency = self.document_frequency(field, term) as f64;
        let raw = math::ln((doc_count - document_frequency + 0.5) / (document_frequency + 0.5));
        if self.params.clamp_negative_idf && raw < 0.0 {
            0.0
        } else {
            raw
        }
    }

    /// BM25 score of a single term against one field of one document:
    /// `idf(term) * f*(k1+1) / (f + k1*(1 - b + b*|D|/avgdl))`. Zero when the
    /// term is absent, the document is unknown, or the field collection is
    /// empty.
    pub fn bm25_term_score(&self, doc_id: &str, field: Field, term: &str) -> f64 {
        let Some(ordinal) = self.store.ordinal_of(doc_id) else {
            return 0.0;
        };
        let Some(list) = self.fields[field.slot()].postings.get(term) else {
            return 0.0;
        };
        let found = list.binary_search_by(|posting| {
            self.store
                .doc_at(posting.ordinal as usize)
                .expect("ordinal in range")
                .doc_id
                .as_str()
                .cmp(doc_id)
        });
        let Ok(pos) = found else {
            return 0.0;
        };
        self.term_score_for_posting(field, list[pos].term_frequency, ordinal)
            * self.idf(field, term)
    }

    /// Length-normalized term-frequency factor of Okapi BM25 (everything but
    /// the IDF).
    fn term_score_for_posting(&self, field: Field, term_frequency: u32, ordinal: usize) -> f64 {
        let stats = self.stats(field);
        if stats.avg_field_length == 0.0 {
            return 0.0;
        }
        let f = term_frequency as f64;
        let k1 = self.params.k1;
        let b = self.params.b;
        let doc_len = self.fields[field.slot()].lengths[ordinal] as f64;
        f * (k1 + 1.0) / (f + k1 * (1.0 - b + b * doc_len / stats.avg_field_length))
    }

    /// Runs a weighted boolean query: every clause token is OR'd, the
    /// abstract field is the required one (a document with title-only
    /// matches is never returned), and scores sum weighted per-token BM25
    /// over both fields. Results are sorted by descending score, ties by
    /// ascending doc id, and truncated to `limit`.
    pub fn search(&self, query: &ExpandedQuery, limit: usize) -> Result<RankedList, SearchError> {
        if query.clauses.is_empty() {
            return Err(SearchError::EmptyQuery);
        }
        if limit == 0 || self.store.is_empty() {
            return Ok(RankedList::new(query.topic_number, Vec::new()));
        }

        let mut scores: BTreeMap<u32, f64> = BTreeMap::new();
        let mut candidates: BTreeSet<u32> = BTreeSet::new();
        for clause in &query.clauses {
            for token in self.tokenizer.tokenize(&clause.surface) {
                for field in Field::ALL {
                    let idf = self.idf(field, &token);
                    let Some(list) = self.fields[field.slot()].postings.get(&token) else {
                        continue;
                    };
                    for posting in list {
                        let contribution = clause.weight
                            * idf
                            * self.term_score_for_posting(
                                field,
                                posting.term_frequency,
                                posting.ordinal as usize,
                            );
                        *scores.entry(posting.ordinal).or_insert(0.0) += contribution;
                        if field == Field::Abstract {
                            candidates.insert(posting.ordinal);
                        }
                    }
                }
            }
        }

        let mut entries: Vec<ScoredDoc> = candidates
            .into_iter()
            .map(|ordinal| {
                let doc_id = self
                    .store
                    .doc_at(ordinal as usize)
                    .expect("ordinal in range")
                    .doc_id
                    .clone();
                ScoredDoc::new(doc_id, scores[&ordinal])
            })
            .collect();
        entries.sort_by(compare_entries);
        entries.truncate(limit);
        Ok(RankedList::new(query.topic_number, entries))
    }
}

fn display_lengths(field: Field, got: usize, want: usize) -> String {
    let mut out = String::new();
    let _ = core::fmt::write(
        &mut out,
        format_args!(
            "{} lengths cover {got} documents, store has {want}",
            field.name()
        ),
    );
    out
}
