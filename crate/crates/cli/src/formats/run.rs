//! TREC run files: `topic Q0 doc_id rank score run_tag`, one entry per
//! line, rank-ascending per topic. Scores print in shortest round-trip
//! form, so write-then-read is exact.

use std::path::Path;

use anyhow::{bail, Context, Result};

use pmsearch_core::eval::{group_run, RunEntry};
use pmsearch_core::ranking::RankedList;

use super::write_atomic;

/// Converts per-topic rankings into run entries with 1-based ranks.
pub fn ranked_lists_to_entries(lists: &[RankedList], run_tag: &str) -> Vec<RunEntry> {
    let mut entries = Vec::new();
    for list in lists {
        for (pos, scored) in list.entries.iter().enumerate() {
            entries.push(RunEntry {
                topic_number: list.topic_number,
                doc_id: scored.doc_id.clone(),
                rank: (pos + 1) as u32,
                score: scored.score,
                run_tag: run_tag.to_string(),
            });
        }
    }
    entries
}

pub fn format_run(entries: &[RunEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        out.push_str(&format!(
            "{} Q0 {} {} {} {}\n",
            e.topic_number, e.doc_id, e.rank, e.score, e.run_tag
        ));
    }
    out
}

pub fn write_run(path: &Path, entries: &[RunEntry]) -> Result<()> {
    write_atomic(path, format_run(entries).as_bytes())
}

pub fn read_run(path: &Path) -> Result<Vec<RunEntry>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read run file {}", path.display()))?;
    parse_run(&text).with_context(|| format!("in run file {}", path.display()))
}

/// Parses and validates a run file: contiguous 1-based ranks, distinct
/// documents, and non-increasing scores per topic.
pub fn parse_run(text: &str) -> Result<Vec<RunEntry>> {
    let mut entries = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [topic, q0, doc_id, rank, score, run_tag] = fields.as_slice() else {
            bail!(
                "malformed run line {line_no}: expected 6 fields, found {}",
                fields.len()
            );
        };
        if *q0 != "Q0" {
            bail!("malformed run line {line_no}: second field must be Q0");
        }
        entries.push(RunEntry {
            topic_number: topic
                .parse()
                .with_context(|| format!("malformed topic number at line {line_no}"))?,
            doc_id: doc_id.to_string(),
            rank: rank
                .parse()
                .with_context(|| format!("malformed rank at line {line_no}"))?,
            score: score
                .parse()
                .with_context(|| format!("malformed score at line {line_no}"))?,
            run_tag: run_tag.to_string(),
        });
    }
    group_run(&entries).context("invalid run structure")?;
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use pmsearch_core::ranking::ScoredDoc;

    fn entry(topic: u32, doc: &str, rank: u32, score: f64) -> RunEntry {
        RunEntry {
            topic_number: topic,
            doc_id: doc.to_string(),
            rank,
            score,
            run_tag: "pmsearch".to_string(),
        }
    }

    #[test]
    fn formats_the_six_column_line() {
        let line = format_run(&[entry(36, "14981584", 1, 12.5)]);
        assert_eq!(line, "36 Q0 14981584 1 12.5 pmsearch\n");
    }

    #[test]
    fn write_then_read_is_identity() {
        let entries = vec![
            entry(1, "a", 1, 2.25),
            entry(1, "b", 2, 1.0 / 3.0),
            entry(2, "c", 1, 0.1),
        ];
        let parsed = parse_run(&format_run(&entries)).unwrap();
        assert_eq!(parsed, entries);
    }

    #[test]
    fn rank_gap_is_a_read_error() {
        let text = "1 Q0 a 1 2.0 t\n1 Q0 b 3 1.0 t\n";
        assert!(parse_run(text).is_err());
    }

    #[test]
    fn malformed_lines_carry_line_numbers() {
        let err = parse_run("1 Q0 a 1 2.0\n").unwrap_err();
        assert!(err.to_string().contains("line 1"));
        let err = parse_run("1 Q0 a 1 2.0 t\n1 QX b 2 1.0 t\n").unwrap_err();
        assert!(err.to_string().contains("line 2"));
    }

    #[test]
    fn ranked_lists_convert_with_one_based_ranks() {
        let lists = vec![RankedList::new(
            36,
            vec![ScoredDoc::new("x", 5.0), ScoredDoc::new("y", 3.0)],
        )];
        let entries = ranked_lists_to_entries(&lists, "tag");
        assert_eq!(entries[0].rank, 1);
        assert_eq!(entries[1].rank, 2);
        assert_eq!(entries[1].doc_id, "y");
        assert_eq!(entries[0].run_tag, "tag");
    }
}
