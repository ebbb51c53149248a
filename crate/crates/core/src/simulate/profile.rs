//! Player profiles: season make probability plus a per-quarter attempt
//! schedule, extractable from real sequences or loaded from a roster file.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use super::SimError;
use crate::ingest::PlayerSequences;

/// Attempts by one player in one quarter of one game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleSlot {
    pub game_id: String,
    pub period: u8,
    pub attempts: u32,
}

/// One player's simulation inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct PlayerProfile {
    pub player_id: String,
    /// Season make probability, strictly inside (0, 1).
    pub season_fg_pct: f64,
    /// Slots ordered by (game, period); only quarters with attempts appear.
    pub schedule: Vec<ScheduleSlot>,
}

impl PlayerProfile {
    pub fn total_attempts(&self) -> u64 {
        self.schedule.iter().map(|s| u64::from(s.attempts)).sum()
    }
}

/// Profiles plus the count of players excluded for a degenerate make rate.
#[derive(Debug, Clone)]
pub struct ProfileExtraction {
    pub profiles: Vec<PlayerProfile>,
    /// Players whose season rate was exactly 0 or 1.
    pub excluded: usize,
}

/// Build a roster from real sequences: one profile per player with the
/// season make rate and the observed per-quarter attempt counts. Players who
/// never missed or never made are excluded (their simulated sequences would
/// be constant) and counted.
pub fn extract_profiles(sequences: &PlayerSequences) -> Result<ProfileExtraction, SimError> {
    if sequences.is_empty() {
        return Err(SimError::EmptyRoster);
    }
    let mut profiles = Vec::new();
    let mut excluded = 0usize;
    for (player_id, seqs) in sequences {
        let mut makes = 0u64;
        let mut attempts = 0u64;
        let mut slots: BTreeMap<(String, u8), u32> = BTreeMap::new();
        for seq in seqs {
            for event in &seq.events {
                makes += u64::from(event.made);
                attempts += 1;
                *slots
                    .entry((seq.game_id.clone(), event.period))
                    .or_default() += 1;
            }
        }
        if attempts == 0 {
            continue;
        }
        let p = makes as f64 / attempts as f64;
        if p <= 0.0 || p >= 1.0 {
            excluded += 1;
            continue;
        }
        profiles.push(PlayerProfile {
            player_id: player_id.clone(),
            season_fg_pct: p,
            schedule: slots
                .into_iter()
                .map(|((game_id, period), attempts)| ScheduleSlot {
                    game_id,
                    period,
                    attempts,
                })
                .collect(),
        });
    }
    Ok(ProfileExtraction { profiles, excluded })
}

/// Read a roster file: delimited text with columns
/// `player_id, season_fg_pct, game_id, period, attempts`, one row per
/// schedule slot.
pub fn read_roster<R: Read>(reader: R, delimiter: u8) -> Result<Vec<PlayerProfile>, SimError> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = csv_reader.headers()?.clone();
    let col = |name: &str| -> Result<usize, SimError> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| SimError::Roster(format!("missing column {name:?}")))
    };
    let id_col = col("player_id")?;
    let pct_col = col("season_fg_pct")?;
    let game_col = col("game_id")?;
    let period_col = col("period")?;
    let attempts_col = col("attempts")?;

    type SlotCounts = BTreeMap<(String, u8), u32>;
    let mut players: BTreeMap<String, (f64, SlotCounts)> = BTreeMap::new();
    for (i, record) in csv_reader.records().enumerate() {
        let record = record?;
        let row = i + 1;
        let get = |c: usize| {
            record
                .get(c)
                .ok_or_else(|| SimError::Roster(format!("row {row}: short record")))
        };
        let player_id = get(id_col)?.to_string();
        let pct: f64 = get(pct_col)?
            .parse()
            .map_err(|_| SimError::Roster(format!("row {row}: bad season_fg_pct")))?;
        if pct <= 0.0 || pct >= 1.0 {
            return Err(SimError::InvalidProbability(pct));
        }
        let game_id = get(game_col)?.to_string();
        let period: u8 = get(period_col)?
            .parse()
            .map_err(|_| SimError::Roster(format!("row {row}: bad period")))?;
        let attempts: u32 = get(attempts_col)?
            .parse()
            .map_err(|_| SimError::Roster(format!("row {row}: bad attempts")))?;
        if attempts == 0 {
            continue;
        }
        let entry = players
            .entry(player_id.clone())
            .or_insert((pct, BTreeMap::new()));
        if (entry.0 - pct).abs() > 1e-12 {
            return Err(SimError::Roster(format!(
                "row {row}: player {player_id:?} has inconsistent season_fg_pct"
            )));
        }
        *entry.1.entry((game_id, period)).or_default() += attempts;
    }
    if players.is_empty() {
        return Err(SimError::EmptyRoster);
    }
    Ok(players
        .into_iter()
        .map(|(player_id, (pct, slots))| PlayerProfile {
            player_id,
            season_fg_pct: pct,
            schedule: slots
                .into_iter()
                .map(|((game_id, period), attempts)| ScheduleSlot {
                    game_id,
                    period,
                    attempts,
                })
                .collect(),
        })
        .collect())
}

/// Serialize a roster in the format [`read_roster`] accepts.
pub fn write_roster<W: Write>(writer: W, roster: &[PlayerProfile]) -> Result<(), SimError> {
    let mut csv_writer = csv::Writer::from_writer(writer);
    csv_writer.write_record([
        "player_id",
        "season_fg_pct",
        "game_id",
        "period",
        "attempts",
    ])?;
    for profile in roster {
        for slot in &profile.schedule {
            csv_writer.write_record([
                profile.player_id.as_str(),
                &profile.season_fg_pct.to_string(),
                slot.game_id.as_str(),
                &slot.period.to_string(),
                &slot.attempts.to_string(),
            ])?;
        }
    }
    csv_writer.flush()?;
    Ok(())
}
