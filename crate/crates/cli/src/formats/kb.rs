//! Knowledge-base files: the disease KB (JSON lines) and the gene alias
//! table (tab-separated, NCBI-style pipe-delimited aliases).

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use pmsearch_core::expand::{DiseaseEntry, DiseaseKb, GeneEntry, GeneKb};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiseaseLine {
    canonical: String,
    #[serde(default)]
    preferred: String,
    #[serde(default)]
    synonyms: Vec<String>,
    #[serde(default)]
    acronyms: Vec<String>,
}

pub fn read_disease_kb(path: &Path) -> Result<DiseaseKb> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read disease KB {}", path.display()))?;
    parse_disease_kb(&text).with_context(|| format!("in disease KB {}", path.display()))
}

/// One JSON object per line:
/// `{"canonical": str, "preferred": str, "synonyms": [str], "acronyms": [str]}`.
pub fn parse_disease_kb(text: &str) -> Result<DiseaseKb> {
    let mut kb = DiseaseKb::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: DiseaseLine = serde_json::from_str(line)
            .with_context(|| format!("malformed disease entry at line {line_no}"))?;
        let entry = DiseaseEntry::new(
            parsed.canonical,
            parsed.preferred,
            parsed.synonyms,
            parsed.acronyms,
        )
        .with_context(|| format!("invalid disease entry at line {line_no}"))?;
        kb.insert(entry)
            .with_context(|| format!("at line {line_no}"))?;
    }
    Ok(kb)
}

pub fn read_gene_table(path: &Path) -> Result<GeneKb> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read gene table {}", path.display()))?;
    parse_gene_table(&text).with_context(|| format!("in gene table {}", path.display()))
}

/// Tab-separated `symbol<TAB>aliases` rows; aliases pipe-delimited, a lone
/// `-` meaning none. Lines starting with `#` are comments. Duplicate
/// symbols keep the first row.
pub fn parse_gene_table(text: &str) -> Result<GeneKb> {
    let mut kb = GeneKb::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let columns: Vec<&str> = line.split('\t').collect();
        let [symbol, aliases] = columns.as_slice() else {
            bail!("malformed gene row at line {line_no}: expected `symbol<TAB>aliases`, found {} column(s)", columns.len());
        };
        let aliases: Vec<String> = if aliases.trim() == "-" {
            Vec::new()
        } else {
            aliases
                .split('|')
                .map(|a| a.trim().to_string())
                .filter(|a| !a.is_empty())
                .collect()
        };
        let entry = GeneEntry::new(symbol.trim(), aliases)
            .with_context(|| format!("invalid gene entry at line {line_no}"))?;
        kb.insert(entry);
    }
    Ok(kb)
}
