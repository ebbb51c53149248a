//! Free-throw table parsing and trip assembly.

use std::collections::HashMap;
use std::io::Read;

use super::schema::HeaderIndex;
use super::{player_key, IngestError, RowError, SchemaMap};

/// An ordered trip to the free-throw line: at least two attempts by one
/// player in one game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeThrowTrip {
    /// Normalized player key.
    pub player_id: String,
    pub player_name: String,
    pub game_id: String,
    /// Attempt outcomes in attempt order.
    pub outcomes: Vec<bool>,
}

impl FreeThrowTrip {
    pub fn trip_size(&self) -> usize {
        self.outcomes.len()
    }
}

/// Trips plus parse/filter accounting.
#[derive(Debug, Default)]
pub struct FreeThrowParse {
    pub trips: Vec<FreeThrowTrip>,
    pub row_errors: Vec<RowError>,
    /// Attempt rows that parsed.
    pub attempts_parsed: usize,
    /// Sum of trip sizes over retained trips.
    pub attempts_retained: usize,
    /// Trips rejected for structural problems (attempt index beyond the
    /// declared trip size, duplicate indices, inconsistent sizes).
    pub trips_rejected: usize,
    /// Trips dropped for having fewer than two attempts.
    pub single_attempt_trips: usize,
    /// Trips dropped because an attempt carried the technical/flagrant flag.
    pub technical_trips: usize,
}

#[derive(Debug)]
struct Attempt {
    row: u64,
    index: u32,
    declared_size: u32,
    made: bool,
    technical: bool,
}

#[derive(Debug)]
struct TripBuilder {
    player_id: String,
    player_name: String,
    game_id: String,
    first_row: u64,
    attempts: Vec<Attempt>,
}

/// Parse a delimited free-throw table into trips.
///
/// Attempts are grouped by (game, player, trip id) when a trip-id column is
/// present, otherwise a new trip starts whenever the attempt index resets.
/// Trips with fewer than two attempts are dropped, as are trips flagged
/// technical/flagrant. An attempt index exceeding the declared trip size
/// rejects the whole trip with a recorded error.
pub fn parse_free_throws<R: Read>(
    reader: R,
    schema: &SchemaMap,
    delimiter: u8,
) -> Result<FreeThrowParse, IngestError> {
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
    let index_col = header.required(schema, "attempt_index")?;
    let size_col = header.required(schema, "trip_size")?;
    let made_col = header.required(schema, "made")?;
    let trip_id_col = header.optional(schema, "trip_id");
    let technical_col = header.optional(schema, "technical_flag");

    let mut out = FreeThrowParse::default();
    // Completed trip builders in first-appearance order.
    let mut builders: Vec<TripBuilder> = Vec::new();
    // Open builder per (game, player) for reset-based grouping, or per
    // (game, player, trip id) when ids are present.
    let mut open: HashMap<(String, String, String), usize> = HashMap::new();

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
        let get = |col: usize, what: &str| -> Result<&str, String> {
            record
                .get(col)
                .ok_or_else(|| format!("missing {what} cell"))
        };
        let parsed: Result<(), String> = (|| {
            let raw_name = match name_col {
                Some(c) => get(c, "player_name")?,
                None => "",
            };
            let raw_id = match id_col {
                Some(c) => get(c, "player_id")?,
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
            let game_id = get(game_col, "game_id")?.to_string();
            if game_id.is_empty() {
                return Err("empty game_id".into());
            }
            let index_text = get(index_col, "attempt_index")?;
            let index: u32 = index_text
                .parse()
                .map_err(|_| format!("bad attempt_index: {index_text:?}"))?;
            if index == 0 {
                return Err("attempt_index must be 1-based".into());
            }
            let size_text = get(size_col, "trip_size")?;
            let declared_size: u32 = size_text
                .parse()
                .map_err(|_| format!("bad trip_size: {size_text:?}"))?;
            let made = match get(made_col, "made")?.to_ascii_lowercase().as_str() {
                "1" | "true" => true,
                "0" | "false" => false,
                other => return Err(format!("not a 0/1 flag: {other:?}")),
            };
            let technical = match technical_col {
                Some(c) => matches!(
                    get(c, "technical_flag")?.to_ascii_lowercase().as_str(),
                    "1" | "true"
                ),
                None => false,
            };

            let key = player_key(identity);
            let trip_label = match trip_id_col {
                Some(c) => format!("id:{}", get(c, "trip_id")?),
                None => String::new(),
            };
            let map_key = (game_id.clone(), key.clone(), trip_label);
            let attempt = Attempt {
                row,
                index,
                declared_size,
                made,
                technical,
            };

            let builder_idx = match open.get(&map_key) {
                // Without trip ids, an index reset closes the open trip and
                // starts a new one.
                Some(&i)
                    if trip_id_col.is_none()
                        && builders[i]
                            .attempts
                            .last()
                            .is_some_and(|last| index <= last.index) =>
                {
                    None
                }
                Some(&i) => Some(i),
                None => None,
            };
            match builder_idx {
                Some(i) => builders[i].attempts.push(attempt),
                None => {
                    builders.push(TripBuilder {
                        player_id: key,
                        player_name: identity.to_string(),
                        game_id,
                        first_row: row,
                        attempts: vec![attempt],
                    });
                    open.insert(map_key, builders.len() - 1);
                }
            }
            out.attempts_parsed += 1;
            Ok(())
        })();
        if let Err(message) = parsed {
            out.row_errors.push(RowError { row, message });
        }
    }

    builders.sort_by_key(|b| b.first_row);
    for mut builder in builders {
        builder.attempts.sort_by_key(|a| a.index);
        if let Err(message) = validate_trip(&builder) {
            out.trips_rejected += 1;
            out.row_errors.push(RowError {
                row: builder.first_row,
                message,
            });
            continue;
        }
        if builder.attempts.iter().any(|a| a.technical) {
            out.technical_trips += 1;
            continue;
        }
        if builder.attempts.len() < 2 {
            out.single_attempt_trips += 1;
            continue;
        }
        out.attempts_retained += builder.attempts.len();
        out.trips.push(FreeThrowTrip {
            player_id: builder.player_id,
            player_name: builder.player_name,
            game_id: builder.game_id,
            outcomes: builder.attempts.iter().map(|a| a.made).collect(),
        });
    }
    Ok(out)
}

fn validate_trip(builder: &TripBuilder) -> Result<(), String> {
    let declared = builder.attempts[0].declared_size;
    for attempt in &builder.attempts {
        if attempt.declared_size != declared {
            return Err(format!(
                "trip starting at row {} declares inconsistent sizes",
                builder.first_row
            ));
        }
        if attempt.index > declared {
            return Err(format!(
                "attempt index {} exceeds trip size {} (row {})",
                attempt.index, declared, attempt.row
            ));
        }
    }
    let mut seen = builder.attempts.iter().map(|a| a.index).collect::<Vec<_>>();
    seen.dedup();
    if seen.len() != builder.attempts.len() {
        return Err(format!(
            "duplicate attempt index in trip starting at row {}",
            builder.first_row
        ));
    }
    Ok(())
}
