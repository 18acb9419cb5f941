//! Text analysis shared by indexing, querying, and feature extraction.
//!
//! The analyzer is deliberately simple: lowercase, split on anything that is
//! not a letter or digit, drop empty tokens, and optionally remove stopwords.
//! Every stage of the pipeline that looks at text goes through this one
//! tokenizer so that index terms, query terms, and feature counts agree.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// The stopword list applied by default, pinned for reproducibility.
pub const DEFAULT_STOPWORDS: [&str; 33] = [
    "a", "an", "and", "are", "as", "at", "be", "but", "by", "for", "if", "in", "into", "is", "it",
    "no", "not", "of", "on", "or", "such", "that", "the", "their", "then", "there", "these",
    "they", "this", "to", "was", "will", "with",
];

/// Analyzer configuration. Stopword removal is on by default and uses
/// [`DEFAULT_STOPWORDS`]; both the switch and the list are overridable.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TokenizerConfig {
    pub remove_stopwords: bool,
    /// Sorted, deduplicated stopword list. Only consulted when
    /// `remove_stopwords` is true.
    pub stopwords: Vec<String>,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        Self {
            remove_stopwords: true,
            stopwords: DEFAULT_STOPWORDS.iter().map(|w| w.to_string()).collect(),
        }
    }
}

impl TokenizerConfig {
    /// Tokenization with stopword removal disabled.
    pub fn keep_stopwords() -> Self {
        Self {
            remove_stopwords: false,
            stopwords: Vec::new(),
        }
    }

    /// Replaces the stopword list. The list is lowercased, sorted, and
    /// deduplicated so lookups can binary-search.
    pub fn with_stopwords<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut stopwords: Vec<String> = words
            .into_iter()
            .map(|w| w.as_ref().to_lowercase())
            .collect();
        stopwords.sort();
        stopwords.dedup();
        Self {
            remove_stopwords: true,
            stopwords,
        }
    }

    fn is_stopword(&self, token: &str) -> bool {
        self.remove_stopwords
            && self
                .stopwords
                .binary_search_by(|w| w.as_str().cmp(token))
                .is_ok()
    }

    /// Lowercases, splits on any character that is not a letter or digit,
    /// drops empties, and removes stopwords when enabled. Duplicate tokens
    /// are preserved.
    pub fn tokenize(&self, text: &str) -> Vec<String> {
        text.split(|c: char| !c.is_alphanumeric())
            .filter(|part| !part.is_empty())
            .map(|part| part.to_lowercase())
            .filter(|token| !self.is_stopword(token))
            .collect()
    }
}

/// Tokenizes with the default configuration.
pub fn tokenize(text: &str) -> Vec<String> {
    TokenizerConfig::default().tokenize(text)
}
