//! Batch driver for the literature search pipeline: file formats, pipeline
//! wiring, and the `pmsearch` command-line interface. The search engine
//! itself lives in `pmsearch-core`.

pub mod commands;
pub mod config;
pub mod formats;
pub mod pipeline;
