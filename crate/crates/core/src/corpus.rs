//! Document and topic records plus the deduplicating corpus store.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

/// One abstract-level article. `title` and `abstract_text` may be empty but
/// are always present; the publication-type and MeSH lists default to empty.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DocumentRecord {
    #[cfg_attr(feature = "serde", serde(rename = "id"))]
    pub doc_id: String,
    #[cfg_attr(feature = "serde", serde(default))]
    pub title: String,
    #[cfg_attr(feature = "serde", serde(rename = "abstract", default))]
    pub abstract_text: String,
    #[cfg_attr(feature = "serde", serde(rename = "pub_types", default))]
    pub publication_types: Vec<String>,
    #[cfg_attr(feature = "serde", serde(rename = "mesh", default))]
    pub mesh_headings: Vec<String>,
}

impl DocumentRecord {
    pub fn new(
        doc_id: impl Into<String>,
        title: impl Into<String>,
        abstract_text: impl Into<String>,
    ) -> Self {
        Self {
            doc_id: doc_id.into(),
            title: title.into(),
            abstract_text: abstract_text.into(),
            publication_types: Vec::new(),
            mesh_headings: Vec::new(),
        }
    }
}

/// A query topic: one patient case. The demographic text is stored verbatim
/// but never tokenized or matched.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Topic {
    pub number: u32,
    pub disease: String,
    pub gene: String,
    #[cfg_attr(feature = "serde", serde(default))]
    pub demographic: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    /// A record arrived without a document id.
    #[error("document record has an empty id")]
    MissingDocId,
    /// `CorpusStore::from_parts` saw the same id twice.
    #[error("duplicate document id `{0}` in corpus parts")]
    DuplicateDocId(String),
}

/// Ingestion tallies: `kept + discarded` equals the number of well-formed
/// records seen; `rejected` counts records dropped for a missing id.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub kept: u64,
    pub discarded: u64,
    pub rejected: u64,
}

/// Accumulates records one at a time, enforcing the first-hit duplicate
/// policy: the first record seen for an id wins, later ones are counted and
/// discarded.
#[derive(Debug, Default)]
pub struct CorpusBuilder {
    docs: Vec<DocumentRecord>,
    by_id: BTreeMap<String, usize>,
    discarded: u64,
    rejected: u64,
}

impl CorpusBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds one record. Returns `Ok(true)` when the record was kept,
    /// `Ok(false)` when it duplicated an earlier id and was discarded.
    /// A record with an empty id is rejected; the builder stays usable, so
    /// callers can report the error and keep ingesting.
    pub fn push(&mut self, record: DocumentRecord) -> Result<bool, CorpusError> {
        if record.doc_id.is_empty() {
            self.rejected += 1;
            return Err(CorpusError::MissingDocId);
        }
        if self.by_id.contains_key(&record.doc_id) {
            self.discarded += 1;
            return Ok(false);
        }
        self.by_id.insert(record.doc_id.clone(), self.docs.len());
        self.docs.push(record);
        Ok(true)
    }

    pub fn finish(self) -> CorpusStore {
        CorpusStore {
            docs: self.docs,
            by_id: self.by_id,
            discarded: self.discarded,
            rejected: self.rejected,
        }
    }
}

/// Immutable document store. Ingestion order is preserved and defines the
/// "first hit" for the duplicate policy; after `finish` the store never
/// changes, so shared references are safe across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusStore {
    docs: Vec<DocumentRecord>,
    by_id: BTreeMap<String, usize>,
    discarded: u64,
    rejected: u64,
}

impl CorpusStore {
    /// Ingests an ordered stream of records. Records with a missing id are
    /// rejected and counted; ingestion continues.
    pub fn ingest<I>(records: I) -> (Self, IngestReport)
    where
        I: IntoIterator<Item = DocumentRecord>,
    {
        let mut builder = CorpusBuilder::new();
        for record in records {
            let _ = builder.push(record);
        }
        let store = builder.finish();
        let report = store.report();
        (store, report)
    }

    /// Rebuilds a store from previously persisted parts. Fails on duplicate
    /// or empty ids: persisted data must already satisfy the store invariant.
    pub fn from_parts(docs: Vec<DocumentRecord>, discarded: u64) -> Result<Self, CorpusError> {
        let mut by_id = BTreeMap::new();
        for (pos, doc) in docs.iter().enumerate() {
            if doc.doc_id.is_empty() {
                return Err(CorpusError::MissingDocId);
            }
            if by_id.insert(doc.doc_id.clone(), pos).is_some() {
                return Err(CorpusError::DuplicateDocId(doc.doc_id.clone()));
            }
        }
        Ok(Self {
            docs,
            by_id,
            discarded,
            rejected: 0,
        })
    }

    pub fn report(&self) -> IngestReport {
        IngestReport {
            kept: self.docs.len() as u64,
            discarded: self.discarded,
            rejected: self.rejected,
        }
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn discarded(&self) -> u64 {
        self.discarded
    }

    pub fn get(&self, doc_id: &str) -> Option<&DocumentRecord> {
        self.by_id.get(doc_id).map(|&pos| &self.docs[pos])
    }

    pub fn contains(&self, doc_id: &str) -> bool {
        self.by_id.contains_key(doc_id)
    }

    /// Documents in ingestion order.
    pub fn iter(&self) -> impl Iterator<Item = &DocumentRecord> {
        self.docs.iter()
    }

    /// Document at an ingestion-order position.
    pub fn doc_at(&self, ordinal: usize) -> Option<&DocumentRecord> {
        self.docs.get(ordinal)
    }

    /// Ingestion-order position of a document id.
    pub fn ordinal_of(&self, doc_id: &str) -> Option<usize> {
        self.by_id.get(doc_id).copied()
    }

    pub fn into_docs(self) -> Vec<DocumentRecord> {
        self.docs
    }
}
