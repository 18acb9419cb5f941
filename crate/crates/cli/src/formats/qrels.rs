//! Relevance judgment files: whitespace-separated
//! `topic iteration doc_id grade` lines (the iteration column is carried by
//! convention and ignored).

use std::path::Path;

use anyhow::{bail, Context, Result};

use pmsearch_core::eval::Qrels;

pub fn read_qrels(path: &Path) -> Result<Qrels> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read qrels file {}", path.display()))?;
    parse_qrels(&text).with_context(|| format!("in qrels file {}", path.display()))
}

pub fn parse_qrels(text: &str) -> Result<Qrels> {
    let mut qrels = Qrels::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [topic, _iteration, doc_id, grade] = fields.as_slice() else {
            bail!(
                "malformed qrels line {line_no}: expected 4 fields, found {}",
                fields.len()
            );
        };
        let topic: u32 = topic
            .parse()
            .with_context(|| format!("malformed topic number at line {line_no}"))?;
        let grade: u32 = grade
            .parse()
            .with_context(|| format!("malformed grade at line {line_no}"))?;
        qrels
            .insert(topic, doc_id.to_string(), grade)
            .with_context(|| format!("at line {line_no}"))?;
    }
    Ok(qrels)
}
