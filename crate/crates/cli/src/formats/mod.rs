//! On-disk interchange formats: corpus lines, topic XML, knowledge bases,
//! qrels, TREC run files, the model file, and index persistence.

pub mod corpus;
pub mod index_io;
pub mod kb;
pub mod model;
pub mod qrels;
pub mod run;
pub mod topics;

use std::path::Path;

use anyhow::{Context, Result};

/// Writes a file atomically: the content lands in a temporary sibling first
/// and is renamed into place, so readers never observe a partial file.
pub fn write_atomic(path: &Path, content: &[u8]) -> Result<()> {
    let directory = path.parent().filter(|p| !p.as_os_str().is_empty());
    if let Some(dir) = directory {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("cannot create directory {}", dir.display()))?;
    }
    let mut tmp = path.as_os_str().to_os_string();
    tmp.push(".tmp");
    let tmp_path = Path::new(&tmp);
    std::fs::write(tmp_path, content)
        .with_context(|| format!("cannot write {}", tmp_path.display()))?;
    std::fs::rename(tmp_path, path)
        .with_context(|| format!("cannot move {} into place", tmp_path.display()))?;
    Ok(())
}
