//! Shot-log parsing, validation and canonical serialization.

use std::io::{Read, Write};

use super::schema::HeaderIndex;
use super::{player_key, IngestError, RowError, SchemaMap};

/// Outcome of the shot a player took immediately before this one in the same
/// game; `Unknown` marks the first attempt of a game.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriorOutcome {
    Make,
    Miss,
    Unknown,
}

/// One field-goal attempt with its context features.
#[derive(Debug, Clone, PartialEq)]
pub struct ShotEvent {
    /// Normalized player key; see [`player_key`].
    pub player_id: String,
    /// Display name as it appeared in the source.
    pub player_name: String,
    pub game_id: String,
    /// 1-4 regulation, 5-8 overtime.
    pub period: u8,
    /// Seconds left in the period.
    pub clock_remaining_s: f64,
    pub made: bool,
    pub shot_distance_ft: f64,
    pub dribbles: u32,
    pub defender_distance_ft: f64,
    pub prior_outcome: PriorOutcome,
    /// 1-based data row in the source file; the final ordering tiebreak.
    pub source_row: u64,
}

/// Events plus the per-row errors that were skipped to produce them.
#[derive(Debug, Default)]
pub struct ShotLogParse {
    pub events: Vec<ShotEvent>,
    pub row_errors: Vec<RowError>,
}

const REGULATION_SECONDS: f64 = 720.0;
const OVERTIME_SECONDS: f64 = 300.0;

pub(crate) fn period_length(period: u8) -> f64 {
    if period <= 4 {
        REGULATION_SECONDS
    } else {
        OVERTIME_SECONDS
    }
}

/// Seconds of game time elapsed before `period` starts.
pub(crate) fn period_start(period: u8) -> f64 {
    let completed = u64::from(period) - 1;
    let regulation = completed.min(4);
    let overtime = completed - regulation;
    regulation as f64 * REGULATION_SECONDS + overtime as f64 * OVERTIME_SECONDS
}

fn parse_bool(text: &str) -> Result<bool, String> {
    match text.trim().to_ascii_lowercase().as_str() {
        "1" | "true" => Ok(true),
        "0" | "false" => Ok(false),
        other => Err(format!("not a 0/1 flag: {other:?}")),
    }
}

fn parse_f64(text: &str, what: &str) -> Result<f64, String> {
    text.trim()
        .parse::<f64>()
        .map_err(|_| format!("bad {what}: {text:?}"))
        .and_then(|v| {
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("non-finite {what}: {text:?}"))
            }
        })
}

fn field<'r>(record: &'r csv::StringRecord, idx: usize, what: &str) -> Result<&'r str, String> {
    record
        .get(idx)
        .ok_or_else(|| format!("missing {what} cell"))
}

/// Parse a delimited shot log. Every data row yields exactly one event or one
/// recorded [`RowError`]; a missing required column is fatal.
///
/// Returned events are ordered by (game, period ascending, clock descending,
/// source row), so each player's within-game attempt order is chronological.
pub fn parse_shot_log<R: Read>(
    reader: R,
    schema: &SchemaMap,
    delimiter: u8,
) -> Result<ShotLogParse, IngestError> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let header = HeaderIndex::new(csv_reader.headers()?);

    let id_col = header.optional(schema, "player_id");
    let name_col = header.optional(schema, "player_name");
    if id_col.is_none() && name_col.is_none() {
        return Err(IngestError::MissingColumn {
            canonical: "player_name".into(),
            column: schema.source_column("player_name").to_string(),
        });
    }
    let game_col = header.required(schema, "game_id")?;
    let period_col = header.required(schema, "period")?;
    let clock_col = header.required(schema, "clock_remaining_s")?;
    let made_col = header.required(schema, "made")?;
    let distance_col = header.required(schema, "shot_distance_ft")?;
    let dribbles_col = header.required(schema, "dribbles")?;
    let defender_col = header.required(schema, "defender_distance_ft")?;

    let mut out = ShotLogParse::default();
    for (row, record) in (1u64..).zip(csv_reader.records()) {
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                out.row_errors.push(RowError {
                    row,
                    message: e.to_string(),
                });
                continue;
            }
        };
        match parse_row(
            &record,
            row,
            id_col,
            name_col,
            game_col,
            period_col,
            clock_col,
            made_col,
            distance_col,
            dribbles_col,
            defender_col,
        ) {
            Ok(event) => out.events.push(event),
            Err(message) => out.row_errors.push(RowError { row, message }),
        }
    }

    out.events.sort_by(|a, b| {
        (&a.game_id, a.period)
            .cmp(&(&b.game_id, b.period))
            .then(b.clock_remaining_s.total_cmp(&a.clock_remaining_s))
            .then(a.source_row.cmp(&b.source_row))
    });
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn parse_row(
    record: &csv::StringRecord,
    row: u64,
    id_col: Option<usize>,
    name_col: Option<usize>,
    game_col: usize,
    period_col: usize,
    clock_col: usize,
    made_col: usize,
    distance_col: usize,
    dribbles_col: usize,
    defender_col: usize,
) -> Result<ShotEvent, String> {
    let raw_name = match name_col {
        Some(c) => field(record, c, "player_name")?,
        None => "",
    };
    let raw_id = match id_col {
        Some(c) => field(record, c, "player_id")?,
        None => "",
    };
    let identity = if raw_name.is_empty() {
        raw_id
    } else {
        raw_name
    };
    if identity.is_empty() {
        return Err("empty player identity".into());
    }

    let period_text = field(record, period_col, "period")?;
    let period: u8 = period_text
        .parse()
        .map_err(|_| format!("bad period: {period_text:?}"))?;
    if !(1..=8).contains(&period) {
        return Err(format!("period out of range: {period}"));
    }

    let clock = parse_f64(field(record, clock_col, "clock")?, "clock")?;
    if clock < 0.0 || clock > period_length(period) {
        return Err(format!(
            "clock {clock} outside [0, {}] for period {period}",
            period_length(period)
        ));
    }

    let distance = parse_f64(
        field(record, distance_col, "shot distance")?,
        "shot distance",
    )?;
    if distance < 0.0 {
        return Err(format!("negative shot distance: {distance}"));
    }
    let defender = parse_f64(
        field(record, defender_col, "defender distance")?,
        "defender distance",
    )?;
    if defender < 0.0 {
        return Err(format!("negative defender distance: {defender}"));
    }
    let dribbles_text = field(record, dribbles_col, "dribbles")?;
    let dribbles: u32 = dribbles_text
        .parse()
        .map_err(|_| format!("bad dribbles: {dribbles_text:?}"))?;
    let made = parse_bool(field(record, made_col, "made")?)?;
    let game_id = field(record, game_col, "game_id")?;
    if game_id.is_empty() {
        return Err("empty game_id".into());
    }

    Ok(ShotEvent {
        player_id: player_key(identity),
        player_name: identity.to_string(),
        game_id: game_id.to_string(),
        period,
        clock_remaining_s: clock,
        made,
        shot_distance_ft: distance,
        dribbles,
        defender_distance_ft: defender,
        prior_outcome: PriorOutcome::Unknown,
        source_row: row,
    })
}

/// Serialize events back to the canonical schema. Floats use the shortest
/// round-trip representation, so parsing the output reproduces the events.
pub fn write_shot_log<W: Write>(writer: W, events: &[ShotEvent]) -> Result<(), IngestError> {
    let mut csv_writer = csv::Writer::from_writer(writer);
    csv_writer.write_record([
        "game_id",
        "player_id",
        "player_name",
        "period",
        "clock_remaining_s",
        "made",
        "shot_distance_ft",
        "dribbles",
        "defender_distance_ft",
    ])?;
    for e in events {
        csv_writer.write_record([
            e.game_id.as_str(),
            e.player_id.as_str(),
            e.player_name.as_str(),
            &e.period.to_string(),
            &e.clock_remaining_s.to_string(),
            if e.made { "1" } else { "0" },
            &e.shot_distance_ft.to_string(),
            &e.dribbles.to_string(),
            &e.defender_distance_ft.to_string(),
        ])?;
    }
    csv_writer.flush()?;
    Ok(())
}
