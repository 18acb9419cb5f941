//! Scored document rankings carried between search, rerank, and evaluation.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScoredDoc {
    pub doc_id: String,
    pub score: f64,
}

impl ScoredDoc {
    pub fn new(doc_id: impl Into<String>, score: f64) -> Self {
        Self {
            doc_id: doc_id.into(),
            score,
        }
    }
}

/// A per-topic ranking: scores non-increasing, doc ids distinct. Ties are
/// always broken by ascending doc id so output order is deterministic.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RankedList {
    pub topic_number: u32,
    pub entries: Vec<ScoredDoc>,
}

impl RankedList {
    pub fn new(topic_number: u32, entries: Vec<ScoredDoc>) -> Self {
        Self {
            topic_number,
            entries,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn doc_ids(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.doc_id.as_str())
    }

    /// 1-based rank of a document, if present.
    pub fn rank_of(&self, doc_id: &str) -> Option<usize> {
        self.entries
            .iter()
            .position(|e| e.doc_id == doc_id)
            .map(|p| p + 1)
    }

    /// Sorts by descending score, ties by ascending doc id. Scores must be
    /// finite; every producer in this crate guarantees that.
    pub fn sort(&mut self) {
        self.entries.sort_by(compare_entries);
    }

    /// Checks the ranking invariant (non-increasing scores, distinct ids).
    pub fn is_valid(&self) -> bool {
        for window in self.entries.windows(2) {
            if window[0].score < window[1].score {
                return false;
            }
        }
        let mut ids: Vec<&str> = self.doc_ids().collect();
        ids.sort_unstable();
        ids.windows(2).all(|w| w[0] != w[1])
    }
}

pub(crate) fn compare_entries(a: &ScoredDoc, b: &ScoredDoc) -> Ordering {
    b.score
        .partial_cmp(&a.score)
        .unwrap_or(Ordering::Equal)
        .then_with(|| a.doc_id.cmp(&b.doc_id))
}
