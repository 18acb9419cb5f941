//! Index persistence: a directory holding a stored-fields file
//! (`docs.jsonl`), a statistics file (`stats.json`), and a postings file
//! (`postings.json`). Serialization is deterministic, so
//! save -> load -> save reproduces identical bytes.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use pmsearch_core::corpus::{CorpusStore, DocumentRecord};
use pmsearch_core::index::{Bm25Params, Field, FieldedIndex, Posting};
use pmsearch_core::tokenize::TokenizerConfig;

use super::{corpus::format_documents, write_atomic};

const DOCS_FILE: &str = "docs.jsonl";
const STATS_FILE: &str = "stats.json";
const POSTINGS_FILE: &str = "postings.json";
const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct StatsFile {
    format_version: u32,
    params: Bm25Params,
    tokenizer: TokenizerConfig,
    /// Duplicate records dropped at ingest time.
    discarded: u64,
    title_lengths: Vec<u32>,
    abstract_lengths: Vec<u32>,
}

#[derive(Debug, Serialize, Deserialize)]
struct PostingsFile {
    title: BTreeMap<String, Vec<(u32, u32)>>,
    abstract_field: BTreeMap<String, Vec<(u32, u32)>>,
}

fn to_wire(postings: &BTreeMap<String, Vec<Posting>>) -> BTreeMap<String, Vec<(u32, u32)>> {
    postings
        .iter()
        .map(|(term, list)| {
            (
                term.clone(),
                list.iter().map(|p| (p.ordinal, p.term_frequency)).collect(),
            )
        })
        .collect()
}

fn from_wire(wire: BTreeMap<String, Vec<(u32, u32)>>) -> BTreeMap<String, Vec<Posting>> {
    wire.into_iter()
        .map(|(term, list)| {
            (
                term,
                list.into_iter()
                    .map(|(ordinal, term_frequency)| Posting {
                        ordinal,
                        term_frequency,
                    })
                    .collect(),
            )
        })
        .collect()
}

pub fn save_index(dir: &Path, index: &FieldedIndex) -> Result<()> {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("cannot create index directory {}", dir.display()))?;

    let docs = format_documents(index.store().iter())?;
    write_atomic(&dir.join(DOCS_FILE), docs.as_bytes())?;

    let stats = StatsFile {
        format_version: FORMAT_VERSION,
        params: *index.params(),
        tokenizer: index.tokenizer().clone(),
        discarded: index.store().discarded(),
        title_lengths: index.field_lengths(Field::Title).to_vec(),
        abstract_lengths: index.field_lengths(Field::Abstract).to_vec(),
    };
    let mut stats_json = serde_json::to_string_pretty(&stats)?;
    stats_json.push('\n');
    write_atomic(&dir.join(STATS_FILE), stats_json.as_bytes())?;

    let postings = PostingsFile {
        title: to_wire(index.postings(Field::Title)),
        abstract_field: to_wire(index.postings(Field::Abstract)),
    };
    let mut postings_json = serde_json::to_string(&postings)?;
    postings_json.push('\n');
    write_atomic(&dir.join(POSTINGS_FILE), postings_json.as_bytes())?;
    Ok(())
}

pub fn load_index(dir: &Path) -> Result<FieldedIndex> {
    let docs_path = dir.join(DOCS_FILE);
    let docs_text = std::fs::read_to_string(&docs_path)
        .with_context(|| format!("cannot read {}", docs_path.display()))?;
    let mut docs = Vec::new();
    for (idx, line) in docs_text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let doc: DocumentRecord = serde_json::from_str(line).with_context(|| {
            format!(
                "malformed stored document at {} line {}",
                docs_path.display(),
                idx + 1
            )
        })?;
        docs.push(doc);
    }

    let stats_path = dir.join(STATS_FILE);
    let stats_text = std::fs::read_to_string(&stats_path)
        .with_context(|| format!("cannot read {}", stats_path.display()))?;
    let stats: StatsFile = serde_json::from_str(&stats_text)
        .with_context(|| format!("malformed {}", stats_path.display()))?;
    if stats.format_version != FORMAT_VERSION {
        anyhow::bail!(
            "unsupported index format version {} in {}",
            stats.format_version,
            stats_path.display()
        );
    }

    let postings_path = dir.join(POSTINGS_FILE);
    let postings_text = std::fs::read_to_string(&postings_path)
        .with_context(|| format!("cannot read {}", postings_path.display()))?;
    let postings: PostingsFile = serde_json::from_str(&postings_text)
        .with_context(|| format!("malformed {}", postings_path.display()))?;

    let store = CorpusStore::from_parts(docs, stats.discarded)?;
    let index = FieldedIndex::from_parts(
        store,
        stats.params,
        stats.tokenizer,
        (from_wire(postings.title), stats.title_lengths),
        (from_wire(postings.abstract_field), stats.abstract_lengths),
    )
    .with_context(|| format!("corrupt index in {}", dir.display()))?;
    Ok(index)
}
