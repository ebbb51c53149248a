//! Dataset ingestion: parse delimited shot logs and free-throw tables into
//! validated domain types, then reshape them into per-player, per-game
//! ordered sequences.
//!
//! Sources are delimited text with a header row. Column names are resolved
//! through a [`SchemaMap`] so the analyses never see source-specific headers.
//! Parsing is single-pass; everything it returns is immutable afterward and
//! safe to share across threads.

mod freethrows;
mod schema;
mod sequences;
mod shots;

pub use freethrows::{parse_free_throws, FreeThrowParse, FreeThrowTrip};
pub use schema::{SchemaMap, FREE_THROW_COLUMNS, SHOT_LOG_COLUMNS};
pub use sequences::{
    build_sequences, filter_min_attempts, filter_min_outcomes, recode_first_shots,
    PlayerGameSequence, PlayerSequences,
};
pub use shots::{parse_shot_log, write_shot_log, PriorOutcome, ShotEvent, ShotLogParse};

use thiserror::Error;

/// A row that failed to parse; the row index is 1-based over data rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowError {
    pub row: u64,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("missing required column {column:?} (canonical name {canonical:?})")]
    MissingColumn { canonical: String, column: String },

    #[error("schema map line {line} is not `canonical=source`: {text:?}")]
    BadSchemaMap { line: usize, text: String },
}

/// Normalized player identity key: case-folded with punctuation stripped and
/// whitespace collapsed, so spelling variants like `J.R. Smith` / `JR smith`
/// match.
pub fn player_key(raw: &str) -> String {
    let cleaned: String = raw
        .to_lowercase()
        .chars()
        .map(|c| if c.is_alphanumeric() { c } else { ' ' })
        .collect();
    cleaned.split_whitespace().collect::<Vec<_>>().join(" ")
}
