//! Topic XML parsing.
//!
//! ```xml
//! <topics>
//!   <topic number="36">
//!     <disease>lung cancer</disease>
//!     <gene>ERBB2</gene>
//!     <demographic>55-year-old female</demographic>
//!   </topic>
//! </topics>
//! ```

use std::collections::BTreeSet;
use std::path::Path;

use anyhow::{bail, Context, Result};

use pmsearch_core::corpus::Topic;

pub fn read_topics(path: &Path) -> Result<Vec<Topic>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read topics file {}", path.display()))?;
    parse_topics(&text).with_context(|| format!("in topics file {}", path.display()))
}

/// Parses topic XML into document order, trimming field text. The
/// demographic element is optional; disease and gene are required and
/// non-empty; topic numbers must be positive and unique.
pub fn parse_topics(xml: &str) -> Result<Vec<Topic>> {
    let doc = roxmltree::Document::parse(xml).context("malformed topics XML")?;
    let root = doc.root_element();
    if root.tag_name().name() != "topics" {
        bail!(
            "topics XML root element must be <topics>, found <{}>",
            root.tag_name().name()
        );
    }
    let mut topics = Vec::new();
    let mut seen = BTreeSet::new();
    for node in root.children().filter(|n| n.is_element()) {
        if node.tag_name().name() != "topic" {
            bail!(
                "unexpected element <{}> under <topics>",
                node.tag_name().name()
            );
        }
        let number: u32 = node
            .attribute("number")
            .context("topic element is missing the number attribute")?
            .trim()
            .parse()
            .context("topic number is not a valid integer")?;
        if number == 0 {
            bail!("topic number must be positive");
        }
        if !seen.insert(number) {
            bail!("topic {number} appears more than once");
        }
        let child_text = |name: &str| -> Option<String> {
            node.children()
                .find(|c| c.is_element() && c.tag_name().name() == name)
                .map(|c| c.text().unwrap_or_default().trim().to_string())
        };
        let disease = child_text("disease").filter(|t| !t.is_empty());
        let gene = child_text("gene").filter(|t| !t.is_empty());
        let (Some(disease), Some(gene)) = (disease, gene) else {
            bail!("topic {number}: disease and gene elements are required and must be non-empty");
        };
        topics.push(Topic {
            number,
            disease,
            gene,
            demographic: child_text("demographic").unwrap_or_default(),
        });
    }
    Ok(topics)
}
