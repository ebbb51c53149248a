//! Canonical column names and the user-supplied mapping onto source headers.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use super::IngestError;

/// Canonical shot-log columns.
pub const SHOT_LOG_COLUMNS: [&str; 9] = [
    "game_id",
    "player_id",
    "player_name",
    "period",
    "clock_remaining_s",
    "made",
    "shot_distance_ft",
    "dribbles",
    "defender_distance_ft",
];

/// Canonical free-throw columns.
pub const FREE_THROW_COLUMNS: [&str; 8] = [
    "game_id",
    "player_id",
    "player_name",
    "trip_id",
    "attempt_index",
    "trip_size",
    "made",
    "technical_flag",
];

/// Maps canonical column names onto the headers a source file actually uses.
///
/// Unmapped canonical names fall through to themselves, so a file that
/// already uses the canonical headers needs no mapping at all.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SchemaMap {
    overrides: BTreeMap<String, String>,
}

impl SchemaMap {
    /// Identity mapping: every canonical name is its own source header.
    pub fn identity() -> Self {
        SchemaMap::default()
    }

    /// Parse a flat `canonical=source` mapping, one pair per line. Blank
    /// lines and lines starting with `#` are ignored.
    pub fn from_reader<R: Read>(reader: R) -> Result<Self, IngestError> {
        let mut overrides = BTreeMap::new();
        for (i, line) in BufReader::new(reader).lines().enumerate() {
            let line = line?;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let (canonical, source) =
                text.split_once('=')
                    .ok_or_else(|| IngestError::BadSchemaMap {
                        line: i + 1,
                        text: text.to_string(),
                    })?;
            overrides.insert(canonical.trim().to_string(), source.trim().to_string());
        }
        Ok(SchemaMap { overrides })
    }

    pub fn from_path(path: &Path) -> Result<Self, IngestError> {
        Self::from_reader(std::fs::File::open(path)?)
    }

    pub fn set(&mut self, canonical: &str, source: &str) -> &mut Self {
        self.overrides
            .insert(canonical.to_string(), source.to_string());
        self
    }

    /// The source header to look for when resolving `canonical`.
    pub fn source_column<'a>(&'a self, canonical: &'a str) -> &'a str {
        self.overrides
            .get(canonical)
            .map(String::as_str)
            .unwrap_or(canonical)
    }
}

/// Resolves canonical names to field indices within a parsed header row.
#[derive(Debug)]
pub(crate) struct HeaderIndex {
    columns: BTreeMap<String, usize>,
}

impl HeaderIndex {
    pub(crate) fn new(headers: &csv::StringRecord) -> Self {
        let columns = headers
            .iter()
            .enumerate()
            .map(|(i, h)| (h.trim().to_string(), i))
            .collect();
        HeaderIndex { columns }
    }

    /// Index of a required canonical column, or a fatal schema error.
    pub(crate) fn required(
        &self,
        schema: &SchemaMap,
        canonical: &str,
    ) -> Result<usize, IngestError> {
        self.optional(schema, canonical)
            .ok_or_else(|| IngestError::MissingColumn {
                canonical: canonical.to_string(),
                column: schema.source_column(canonical).to_string(),
            })
    }

    pub(crate) fn optional(&self, schema: &SchemaMap, canonical: &str) -> Option<usize> {
        self.columns.get(schema.source_column(canonical)).copied()
    }
}
