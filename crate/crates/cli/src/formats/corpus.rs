//! Corpus ingestion from newline-delimited JSON documents.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use anyhow::{Context, Result};

use pmsearch_core::corpus::{CorpusBuilder, CorpusStore, DocumentRecord, IngestReport};

/// A record that could not be ingested, and why.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineError {
    pub line: usize,
    pub message: String,
}

pub struct CorpusReadOutcome {
    pub store: CorpusStore,
    pub report: IngestReport,
    /// Per-record failures (malformed JSON, missing id). Ingestion continues
    /// past them.
    pub line_errors: Vec<LineError>,
}

/// Streams a documents file: one JSON object per line with keys `id`,
/// `title`, `abstract`, `pub_types`, `mesh`. Blank lines are skipped; the
/// first record wins on duplicate ids.
pub fn read_documents(path: &Path) -> Result<CorpusReadOutcome> {
    let file =
        File::open(path).with_context(|| format!("cannot open corpus file {}", path.display()))?;
    let reader = BufReader::new(file);
    let mut builder = CorpusBuilder::new();
    let mut line_errors = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line =
            line.with_context(|| format!("read error in {} at line {line_no}", path.display()))?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<DocumentRecord>(&line) {
            Ok(record) => {
                if let Err(err) = builder.push(record) {
                    line_errors.push(LineError {
                        line: line_no,
                        message: err.to_string(),
                    });
                }
            }
            Err(err) => line_errors.push(LineError {
                line: line_no,
                message: format!("malformed document record: {err}"),
            }),
        }
    }
    let store = builder.finish();
    let report = store.report();
    Ok(CorpusReadOutcome {
        store,
        report,
        line_errors,
    })
}

/// Serializes documents back to the line format, one record per line in
/// store order.
pub fn format_documents<'a>(docs: impl Iterator<Item = &'a DocumentRecord>) -> Result<String> {
    let mut out = String::new();
    for doc in docs {
        out.push_str(&serde_json::to_string(doc)?);
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(content.as_bytes()).unwrap();
        file
    }

    #[test]
    fn reads_documents_and_applies_duplicate_policy() {
        let file = write_temp(concat!(
            "{\"id\":\"a\",\"title\":\"first\",\"abstract\":\"one\",\"pub_types\":[],\"mesh\":[]}\n",
            "{\"id\":\"a\",\"title\":\"second\",\"abstract\":\"two\"}\n",
            "\n",
            "{\"id\":\"b\",\"abstract\":\"three\"}\n",
        ));
        let outcome = read_documents(file.path()).unwrap();
        assert_eq!(outcome.report.kept, 2);
        assert_eq!(outcome.report.discarded, 1);
        assert!(outcome.line_errors.is_empty());
        assert_eq!(outcome.store.get("a").unwrap().title, "first");
        assert_eq!(outcome.store.get("b").unwrap().title, "");
    }

    #[test]
    fn bad_lines_are_reported_and_skipped() {
        let file = write_temp(concat!(
            "{\"id\":\"a\",\"abstract\":\"one\"}\n",
            "not json at all\n",
            "{\"title\":\"no id\"}\n",
            "{\"id\":\"\",\"abstract\":\"empty id\"}\n",
            "{\"id\":\"b\",\"abstract\":\"fine\"}\n",
        ));
        let outcome = read_documents(file.path()).unwrap();
        assert_eq!(outcome.report.kept, 2);
        let lines: Vec<usize> = outcome.line_errors.iter().map(|e| e.line).collect();
        assert_eq!(lines, vec![2, 3, 4]);
    }

    #[test]
    fn round_trips_line_format() {
        let text = "{\"id\":\"a\",\"title\":\"t\",\"abstract\":\"x\",\"pub_types\":[\"Review\"],\"mesh\":[\"Humans\"]}\n";
        let file = write_temp(text);
        let outcome = read_documents(file.path()).unwrap();
        let formatted = format_documents(outcome.store.iter()).unwrap();
        assert_eq!(formatted, text);
    }
}
