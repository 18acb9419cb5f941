//! Query expansion from disease and gene knowledge bases.
//!
//! A topic's disease term is expanded to its preferred term, synonyms, and
//! acronyms (both KB-listed and corpus-mined); the gene field is split into
//! individual genes/variants and each gene is expanded to its aliases. Every
//! clause carries a weight so expansion terms cannot drown out the originals.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::corpus::{CorpusStore, Topic};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExpandError {
    #[error("disease entry has an empty canonical term")]
    EmptyCanonical,
    #[error("duplicate canonical disease term `{0}`")]
    DuplicateCanonical(String),
    #[error("gene entry has an empty symbol")]
    EmptySymbol,
    #[error("topic {0}: disease field is empty")]
    EmptyDisease(u32),
    #[error("topic {0}: gene field is empty after splitting")]
    EmptyGeneField(u32),
    #[error("expansion weight for {0} is outside [0, 1]")]
    WeightOutOfRange(&'static str),
    #[error("acronym mining requires a non-empty disease term")]
    EmptyMiningTerm,
}

/// Where a query clause came from; fixes its weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ClauseOrigin {
    DiseaseOriginal,
    DiseasePreferred,
    DiseaseSynonym,
    DiseaseAcronym,
    GeneOriginal,
    GeneAlias,
}

impl ClauseOrigin {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::DiseaseOriginal => "disease_original",
            Self::DiseasePreferred => "disease_preferred",
            Self::DiseaseSynonym => "disease_synonym",
            Self::DiseaseAcronym => "disease_acronym",
            Self::GeneOriginal => "gene_original",
            Self::GeneAlias => "gene_alias",
        }
    }

    pub fn is_disease(self) -> bool {
        matches!(
            self,
            Self::DiseaseOriginal
                | Self::DiseasePreferred
                | Self::DiseaseSynonym
                | Self::DiseaseAcronym
        )
    }
}

/// Per-origin clause weights. Defaults are the recall-optimal settings:
/// originals stay at 1, preferred/synonyms at 0.1, acronyms at 0.5, gene
/// aliases at 0.3.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct ExpansionWeights {
    pub disease_original: f64,
    pub disease_preferred: f64,
    pub disease_synonym: f64,
    pub disease_acronym: f64,
    pub gene_original: f64,
    pub gene_alias: f64,
}

impl Default for ExpansionWeights {
    fn default() -> Self {
        Self {
            disease_original: 1.0,
            disease_preferred: 0.1,
            disease_synonym: 0.1,
            disease_acronym: 0.5,
            gene_original: 1.0,
            gene_alias: 0.3,
        }
    }
}

impl ExpansionWeights {
    pub fn weight_for(&self, origin: ClauseOrigin) -> f64 {
        match origin {
            ClauseOrigin::DiseaseOriginal => self.disease_original,
            ClauseOrigin::DiseasePreferred => self.disease_preferred,
            ClauseOrigin::DiseaseSynonym => self.disease_synonym,
            ClauseOrigin::DiseaseAcronym => self.disease_acronym,
            ClauseOrigin::GeneOriginal => self.gene_original,
            ClauseOrigin::GeneAlias => self.gene_alias,
        }
    }

    pub fn validate(&self) -> Result<(), ExpandError> {
        let named = [
            (self.disease_original, "disease_original"),
            (self.disease_preferred, "disease_preferred"),
            (self.disease_synonym, "disease_synonym"),
            (self.disease_acronym, "disease_acronym"),
            (self.gene_original, "gene_original"),
            (self.gene_alias, "gene_alias"),
        ];
        for (value, name) in named {
            if !(0.0..=1.0).contains(&value) {
                return Err(ExpandError::WeightOutOfRange(name));
            }
        }
        Ok(())
    }
}

/// One disease with its expansion surfaces. Lists are deduplicated
/// case-insensitively, first occurrence kept.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiseaseEntry {
    pub canonical: String,
    pub preferred: String,
    pub synonyms: Vec<String>,
    pub acronyms: Vec<String>,
}

impl DiseaseEntry {
    pub fn new(
        canonical: impl Into<String>,
        preferred: impl Into<String>,
        synonyms: Vec<String>,
        acronyms: Vec<String>,
    ) -> Result<Self, ExpandError> {
        let canonical = canonical.into();
        if canonical.trim().is_empty() {
            return Err(ExpandError::EmptyCanonical);
        }
        Ok(Self {
            canonical,
            preferred: preferred.into(),
            synonyms: dedup_case_insensitive(synonyms),
            acronyms: dedup_case_insensitive(acronyms),
        })
    }
}

fn dedup_case_insensitive(items: Vec<String>) -> Vec<String> {
    let mut seen = BTreeMap::new();
    let mut out = Vec::with_capacity(items.len());
    for item in items {
        let item = item.trim().to_string();
        if item.is_empty() {
            continue;
        }
        if seen.insert(item.to_lowercase(), ()).is_none() {
            out.push(item);
        }
    }
    out
}

/// Case-insensitive disease lookup keyed by canonical term.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DiseaseKb {
    entries: BTreeMap<String, DiseaseEntry>,
}

impl DiseaseKb {
    pub fn new() -> Self {
        Self::default()
    }

    /// Fails on a duplicate canonical key (case-insensitive).
    pub fn insert(&mut self, entry: DiseaseEntry) -> Result<(), ExpandError> {
        let key = entry.canonical.to_lowercase();
        if self.entries.contains_key(&key) {
            return Err(ExpandError::DuplicateCanonical(entry.canonical.clone()));
        }
        self.entries.insert(key, entry);
        Ok(())
    }

    pub fn lookup(&self, disease: &str) -> Option<&DiseaseEntry> {
        self.entries.get(&disease.trim().to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = &DiseaseEntry> {
        self.entries.values()
    }
}

/// One gene symbol with its aliases. Aliases are deduplicated
/// case-sensitively: `K-Ras` and `K-RAS` are distinct surface forms.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GeneEntry {
    pub symbol: String,
    pub aliases: Vec<String>,
}

impl GeneEntry {
    pub fn new(symbol: impl Into<String>, aliases: Vec<String>) -> Result<Self, ExpandError> {
        let symbol = symbol.into();
        if symbol.trim().is_empty() {
            return Err(ExpandError::EmptySymbol);
        }
        let mut seen = BTreeMap::new();
        let mut deduped = Vec::with_capacity(aliases.len());
        for alias in aliases {
            let alias = alias.trim().to_string();
            if alias.is_empty() {
                continue;
            }
            if seen.insert(alias.clone(), ()).is_none() {
                deduped.push(alias);
            }
        }
        Ok(Self {
            symbol,
            aliases: deduped,
        })
    }
}

/// Case-insensitive gene symbol lookup. On duplicate symbols the first
/// entry wins, mirroring the corpus first-hit policy.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GeneKb {
    entries: BTreeMap<String, GeneEntry>,
}

impl GeneKb {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns true when the entry was kept, false when an earlier entry
    /// for the same symbol already existed.
    pub fn insert(&mut self, entry: GeneEntry) -> bool {
        let key = entry.symbol.to_lowercase();
        if self.entries.contains_key(&key) {
            return false;
        }
        self.entries.insert(key, entry);
        true
    }

    pub fn lookup(&self, symbol: &str) -> Option<&GeneEntry> {
        self.entries.get(&symbol.trim().to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// One weighted query clause. The weight always equals the
/// [`ExpansionWeights`] value for its origin.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WeightedClause {
    pub surface: String,
    pub weight: f64,
    pub origin: ClauseOrigin,
}

/// The expanded form of a topic: weighted OR clauses plus the disease
/// surface forms the rerank stage tests titles against.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExpandedQuery {
    pub topic_number: u32,
    pub clauses: Vec<WeightedClause>,
    pub disease_surfaces: Vec<String>,
}

/// Expands a topic into a weighted query.
///
/// Clause emission order: disease original, preferred term, synonyms, KB
/// acronyms, top mined acronym, gene originals (split on commas and the word
/// "and"; parenthesized variant tokens become extra originals), then each
/// gene's aliases. Clauses are deduplicated by lowercased surface; a
/// duplicate keeps whichever origin carries the higher weight (first seen on
/// ties).
pub fn expand_topic(
    topic: &Topic,
    diseases: &DiseaseKb,
    genes: &GeneKb,
    mined_acronyms: &[(String, u64)],
    weights: &ExpansionWeights,
) -> Result<ExpandedQuery, ExpandError> {
    weights.validate()?;

    let disease = topic.disease.trim();
    if disease.is_empty() {
        return Err(ExpandError::EmptyDisease(topic.number));
    }

    let mut emissions: Vec<(String, ClauseOrigin)> = Vec::new();
    emissions.push((disease.to_string(), ClauseOrigin::DiseaseOriginal));
    if let Some(entry) = diseases.lookup(disease) {
        if !entry.preferred.trim().is_empty() {
            emissions.push((
                entry.preferred.trim().to_string(),
                ClauseOrigin::DiseasePreferred,
            ));
        }
        for synonym in &entry.synonyms {
            emissions.push((synonym.clone(), ClauseOrigin::DiseaseSynonym));
        }
        for acronym in &entry.acronyms {
            emissions.push((acronym.clone(), ClauseOrigin::DiseaseAcronym));
        }
    }
    if let Some((acronym, _count)) = mined_acronyms.first() {
        emissions.push((acronym.clone(), ClauseOrigin::DiseaseAcronym));
    }

    let gene_originals =
        parse_gene_field(&topic.gene).map_err(|_| ExpandError::EmptyGeneField(topic.number))?;
    for gene in &gene_originals {
        emissions.push((gene.clone(), ClauseOrigin::GeneOriginal));
    }
    for gene in &gene_originals {
        if let Some(entry) = genes.lookup(gene) {
            for alias in &entry.aliases {
                emissions.push((alias.clone(), ClauseOrigin::GeneAlias));
            }
        }
    }

    // Dedup by lowercased surface; higher-weight origin wins, first wins ties.
    let mut clauses: Vec<WeightedClause> = Vec::with_capacity(emissions.len());
    let mut by_surface: BTreeMap<String, usize> = BTreeMap::new();
    for (surface, origin) in emissions {
        let weight = weights.weight_for(origin);
        let key = surface.to_lowercase();
        match by_surface.get(&key) {
            None => {
                by_surface.insert(key, clauses.len());
                clauses.push(WeightedClause {
                    surface,
                    weight,
                    origin,
                });
            }
            Some(&pos) => {
                if weight > clauses[pos].weight {
                    clauses[pos] = WeightedClause {
                        surface,
                        weight,
                        origin,
                    };
                }
            }
        }
    }

    let disease_surfaces: Vec<String> = clauses
        .iter()
        .filter(|c| c.origin.is_disease())
        .map(|c| c.surface.clone())
        .collect();

    Ok(ExpandedQuery {
        topic_number: topic.number,
        clauses,
        disease_surfaces,
    })
}

/// Splits a topic's gene field into individual gene/variant surfaces:
/// parenthesized groups become standalone variant tokens, the rest splits on
/// commas and the standalone word "and".
pub fn parse_gene_field(text: &str) -> Result<Vec<String>, ExpandError> {
    let mut variants: Vec<String> = Vec::new();
    let mut base = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(open) = rest.find('(') {
        base.push_str(&rest[..open]);
        base.push(' ');
        match rest[open + 1..].find(')') {
            Some(close) => {
                let inner = &rest[open + 1..open + 1 + close];
                for token in inner.split(|c: char| c == ',' || c.is_whitespace()) {
                    if !token.is_empty() {
                        variants.push(token.to_string());
                    }
                }
                rest = &rest[open + 1 + close + 1..];
            }
            None => {
                // Unbalanced parenthesis: treat the remainder as plain text.
                rest = &rest[open + 1..];
                break;
            }
        }
    }
    base.push_str(rest);

    let mut originals: Vec<String> = Vec::new();
    for chunk in base.split(',') {
        for piece in split_on_word_and(chunk) {
            if !piece.is_empty() {
                originals.push(piece);
            }
        }
    }
    originals.extend(variants);
    if originals.is_empty() {
        return Err(ExpandError::EmptyGeneField(0));
    }
    Ok(originals)
}

fn split_on_word_and(chunk: &str) -> Vec<String> {
    let mut groups: Vec<String> = Vec::new();
    let mut current: Vec<&str> = Vec::new();
    for word in chunk.split_whitespace() {
        if word.eq_ignore_ascii_case("and") {
            if !current.is_empty() {
                groups.push(current.join(" "));
                current.clear();
            }
        } else {
            current.push(word);
        }
    }
    if !current.is_empty() {
        groups.push(current.join(" "));
    }
    groups
}

/// Scans every document's title and abstract for the pattern
/// `<disease> (<ACRONYM>)` — the disease surface, optional whitespace, and a
/// parenthesized run of 2..=10 uppercase letters. Returns distinct acronyms
/// with occurrence counts, most frequent first (ties by acronym).
///
/// Matching is ASCII case-insensitive on the disease surface.
pub fn mine_acronyms(
    store: &CorpusStore,
    disease: &str,
) -> Result<Vec<(String, u64)>, ExpandError> {
    let needle = disease.trim().to_ascii_lowercase();
    if needle.is_empty() {
        return Err(ExpandError::EmptyMiningTerm);
    }
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for doc in store.iter() {
        scan_for_acronyms(&doc.title, &needle, &mut counts);
        scan_for_acronyms(&doc.abstract_text, &needle, &mut counts);
    }
    let mut result: Vec<(String, u64)> = counts.into_iter().collect();
    result.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(result)
}

fn scan_for_acronyms(text: &str, needle_lower: &str, counts: &mut BTreeMap<String, u64>) {
    let hay = text.to_ascii_lowercase();
    for (pos, _) in hay.match_indices(needle_lower) {
        let after = &text[pos + needle_lower.len()..];
        if let Some(acronym) = parse_acronym_suffix(after) {
            *counts.entry(acronym).or_insert(0) += 1;
        }
    }
}

fn parse_acronym_suffix(after: &str) -> Option<String> {
    let mut chars = after.chars().peekable();
    while matches!(chars.peek(), Some(c) if c.is_whitespace()) {
        chars.next();
    }
    if chars.next() != Some('(') {
        return None;
    }
    let mut acronym = String::new();
    while let Some(&c) = chars.peek() {
        if c.is_ascii_uppercase() {
            acronym.push(c);
            chars.next();
        } else {
            break;
        }
    }
    if chars.next() == Some(')') && (2..=10).contains(&acronym.len()) {
        Some(acronym)
    } else {
        None
    }
}
