//! Core retrieval engine for precision-medicine literature search.
//!
//! The crate is `no_std`-compatible (`alloc` required): it holds the pure
//! algorithmic pieces of the pipeline and knows nothing about files, the
//! network, or the command line. The companion `pmsearch-cli` crate carries
//! file formats, persistence, and the batch driver.
//!
//! Pipeline stages, in order:
//!
//! 1. [`corpus`] — document and topic records, duplicate-free corpus store
//! 2. [`index`] — fielded inverted index and Okapi BM25 search
//! 3. [`expand`] — weighted query expansion from disease/gene knowledge bases
//! 4. [`rerank`] — heuristic title penalty and the trained logistic reranker
//! 5. [`eval`] — P@10 / R@1000 / R-precision over relevance judgments

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("pmsearch-core requires either the `std` or the `libm` feature");

pub mod corpus;
pub mod eval;
pub mod expand;
pub mod index;
pub mod ranking;
pub mod rerank;
pub mod tokenize;

mod math;

pub use corpus::{CorpusBuilder, CorpusStore, DocumentRecord, Topic};
pub use index::{Bm25Params, Field, FieldedIndex};
pub use ranking::{RankedList, ScoredDoc};
