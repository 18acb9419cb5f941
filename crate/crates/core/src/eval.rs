//! Relevance judgments and batch retrieval metrics.
//!
//! Metrics follow the usual conventions: a grade of 1 or more counts as
//! relevant, unjudged retrieved documents count as non-relevant, and
//! per-topic scores are macro-averaged over the topics present in the run.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::ranking::RankedList;

/// Minimum grade considered relevant.
pub const RELEVANT_GRADE: u32 = 1;
/// Cutoff for the precision column of the report.
pub const PRECISION_DEPTH: usize = 10;
/// Cutoff for the recall column of the report.
pub const RECALL_DEPTH: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("duplicate judgment for topic {topic}, document `{doc_id}`")]
    DuplicateJudgment { topic: u32, doc_id: String },
    #[error("topic {topic}: run ranks are not contiguous from 1 (saw {got} after {previous})")]
    RankGap { topic: u32, previous: u32, got: u32 },
    #[error("topic {topic}: document `{doc_id}` appears twice in the run")]
    DuplicateRunDocument { topic: u32, doc_id: String },
    #[error("topic {topic}: scores increase with rank at rank {rank}")]
    ScoresOutOfOrder { topic: u32, rank: u32 },
}

/// Graded relevance judgments keyed by (topic, document).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Qrels {
    judgments: BTreeMap<u32, BTreeMap<String, u32>>,
}

impl Qrels {
    pub fn new() -> Self {
        Self::default()
    }

    /// Fails on a duplicate (topic, document) key.
    pub fn insert(&mut self, topic: u32, doc_id: String, grade: u32) -> Result<(), EvalError> {
        let per_topic = self.judgments.entry(topic).or_default();
        if per_topic.contains_key(&doc_id) {
            return Err(EvalError::DuplicateJudgment { topic, doc_id });
        }
        per_topic.insert(doc_id, grade);
        Ok(())
    }

    pub fn grade(&self, topic: u32, doc_id: &str) -> Option<u32> {
        self.judgments
            .get(&topic)
            .and_then(|m| m.get(doc_id))
            .copied()
    }

    pub fn is_relevant(&self, topic: u32, doc_id: &str) -> bool {
        self.grade(topic, doc_id)
            .is_some_and(|g| g >= RELEVANT_GRADE)
    }

    /// Number of relevant documents judged for a topic.
    pub fn relevant_count(&self, topic: u32) -> usize {
        self.judgments
            .get(&topic)
            .map_or(0, |m| m.values().filter(|&&g| g >= RELEVANT_GRADE).count())
    }

    pub fn topics(&self) -> impl Iterator<Item = u32> + '_ {
        self.judgments.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &BTreeMap<String, u32>)> {
        self.judgments.iter().map(|(t, m)| (*t, m))
    }

    pub fn len(&self) -> usize {
        self.judgments.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.judgments.is_empty()
    }
}

/// Fraction of the top `k` that is relevant; short lists still divide by `k`.
pub fn precision_at_k(ranked: &RankedList, qrels: &Qrels, k: usize) -> f64 {
    debug_assert!(k >= 1);
    let relevant = ranked
        .entries
        .iter()
        .take(k)
        .filter(|e| qrels.is_relevant(ranked.topic_number, &e.doc_id))
        .count();
    relevant as f64 / k as f64
}

/// Fraction of all relevant documents retrieved within the top `k`; zero
/// when the topic has no relevant documents.
pub fn recall_at_k(ranked: &RankedList, qrels: &Qrels, k: usize) -> f64 {
    debug_assert!(k >= 1);
    let total_relevant = qrels.relevant_count(ranked.topic_number);
    if total_relevant == 0 {
        return 0.0;
    }
    let retrieved_relevant = ranked
        .entries
        .iter()
        .take(k)
        .filter(|e| qrels.is_relevant(ranked.topic_number, &e.doc_id))
        .count();
    retrieved_relevant as f64 / total_relevant as f64
}

/// Precision at cutoff R, where R is the topic's relevant-document count.
pub fn r_precision(ranked: &RankedList, qrels: &Qrels) -> f64 {
    let r = qrels.relevant_count(ranked.topic_number);
    if r == 0 {
        return 0.0;
    }
    let relevant = ranked
        .entries
        .iter()
        .take(r)
        .filter(|e| qrels.is_relevant(ranked.topic_number, &e.doc_id))
        .count();
    relevant as f64 / r as f64
}

/// One line of a TREC-format run file.
#[derive(Debug, Clone, PartialEq)]
pub struct RunEntry {
    pub topic_number: u32,
    pub doc_id: String,
    pub rank: u32,
    pub score: f64,
    pub run_tag: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TopicMetrics {
    pub precision_at_10: f64,
    pub recall_at_1000: f64,
    pub r_precision: f64,
    pub judged_retrieved: u64,
    pub unjudged_retrieved: u64,
}

/// Per-topic metrics plus unweighted means over the topics in the run.
#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MetricsReport {
    pub per_topic: BTreeMap<u32, TopicMetrics>,
    pub mean_precision_at_10: f64,
    pub mean_recall_at_1000: f64,
    pub mean_r_precision: f64,
    /// Topics judged in the qrels but absent from the run; ignored by the
    /// means.
    pub qrels_topics_missing_from_run: Vec<u32>,
}

/// Validates run invariants (contiguous 1-based ranks, distinct documents,
/// non-increasing scores per topic) and groups entries into per-topic
/// rankings.
pub fn group_run(entries: &[RunEntry]) -> Result<BTreeMap<u32, RankedList>, EvalError> {
    let mut grouped: BTreeMap<u32, RankedList> = BTreeMap::new();
    for entry in entries {
        let list = grouped
            .entry(entry.topic_number)
            .or_insert_with(|| RankedList::new(entry.topic_number, Vec::new()));
        let expected_rank = list.entries.len() as u32 + 1;
        if entry.rank != expected_rank {
            return Err(EvalError::RankGap {
                topic: entry.topic_number,
                previous: expected_rank.saturating_sub(1),
                got: entry.rank,
            });
        }
        if list.entries.iter().any(|e| e.doc_id == entry.doc_id) {
            return Err(EvalError::DuplicateRunDocument {
                topic: entry.topic_number,
                doc_id: entry.doc_id.clone(),
            });
        }
        if let Some(last) = list.entries.last() {
            if entry.score > last.score {
                return Err(EvalError::ScoresOutOfOrder {
                    topic: entry.topic_number,
                    rank: entry.rank,
                });
            }
        }
        list.entries.push(crate::ranking::ScoredDoc::new(
            entry.doc_id.clone(),
            entry.score,
        ));
    }
    Ok(grouped)
}

/// Checks run invariants and computes the metric report.
pub fn evaluate_run(entries: &[RunEntry], qrels: &Qrels) -> Result<MetricsReport, EvalError> {
    Ok(evaluate_ranked_lists(group_run(entries)?.values(), qrels))
}

/// Computes the report directly from ranked lists (already validated).
pub fn evaluate_ranked_lists<'a, I>(lists: I, qrels: &Qrels) -> MetricsReport
where
    I: IntoIterator<Item = &'a RankedList>,
{
    let mut report = MetricsReport::default();
    let mut count = 0usize;
    for list in lists {
        let topic = list.topic_number;
        let judged = list
            .entries
            .iter()
            .filter(|e| qrels.grade(topic, &e.doc_id).is_some())
            .count() as u64;
        let metrics = TopicMetrics {
            precision_at_10: precision_at_k(list, qrels, PRECISION_DEPTH),
            recall_at_1000: recall_at_k(list, qrels, RECALL_DEPTH),
            r_precision: r_precision(list, qrels),
            judged_retrieved: judged,
            unjudged_retrieved: list.entries.len() as u64 - judged,
        };
        report.mean_precision_at_10 += metrics.precision_at_10;
        report.mean_recall_at_1000 += metrics.recall_at_1000;
        report.mean_r_precision += metrics.r_precision;
        report.per_topic.insert(topic, metrics);
        count += 1;
    }
    if count > 0 {
        report.mean_precision_at_10 /= count as f64;
        report.mean_recall_at_1000 /= count as f64;
        report.mean_r_precision /= count as f64;
    }
    report.qrels_topics_missing_from_run = qrels
        .topics()
        .filter(|t| !report.per_topic.contains_key(t))
        .collect();
    report
}
