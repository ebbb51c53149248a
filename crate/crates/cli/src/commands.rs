//! Subcommand drivers: load data, run the analysis, emit files, print a
//! one-paragraph summary.

use std::fs::File;
use std::path::Path;

use hotstreak::analyses::{
    behavior_analysis, free_throw_analysis, global_hot_hand, halftime_analysis, runs_analysis,
    BehaviorFilters, BehaviorMetric, GlobalHotHand, HalftimeRow, HalftimeWindow,
};
use hotstreak::ingest::{
    build_sequences, parse_free_throws, parse_shot_log, recode_first_shots, FreeThrowParse,
    PlayerSequences, SchemaMap,
};
use hotstreak::simulate::{extract_profiles, power_summary, read_roster, sweep, PlayerProfile};
use hotstreak::tabular::{entry, Cell, Summary};

use crate::cli::{Cli, Command};
use crate::config::WindowChoice;
use crate::report::Reporter;
use crate::{CliError, RunConfig};

pub(crate) fn dispatch(cli: Cli) -> Result<(), CliError> {
    let config = RunConfig::resolve(&cli.command)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| CliError::Data(format!("thread pool: {e}")))?;
    pool.install(|| run(&cli.command, &config))
}

fn run(command: &Command, config: &RunConfig) -> Result<(), CliError> {
    match command {
        Command::Runs { .. } => cmd_runs(config),
        Command::Global { .. } => cmd_global(config),
        Command::Freethrow { .. } => cmd_freethrow(config),
        Command::Behavior { .. } => cmd_behavior(config),
        Command::Halftime { .. } => cmd_halftime(config),
        Command::Simulate { .. } => cmd_simulate(config),
        Command::Report { .. } => cmd_report(config),
    }
}

fn open_input(path: &Path) -> Result<File, CliError> {
    File::open(path).map_err(|e| CliError::Data(format!("cannot open {}: {e}", path.display())))
}

fn schema_map(config: &RunConfig) -> Result<SchemaMap, CliError> {
    match &config.schema_map {
        Some(path) => {
            open_input(path)?;
            Ok(SchemaMap::from_path(path)?)
        }
        None => Ok(SchemaMap::identity()),
    }
}

/// Parse the shot log into recoded per-player sequences. Returns the skipped
/// row count alongside.
fn load_sequences(config: &RunConfig) -> Result<(PlayerSequences, usize), CliError> {
    let path = config
        .shots
        .as_ref()
        .ok_or_else(|| CliError::Usage("this command needs --shots".into()))?;
    let schema = schema_map(config)?;
    let parsed = parse_shot_log(open_input(path)?, &schema, config.delimiter)?;
    let skipped = parsed.row_errors.len();
    let mut sequences = build_sequences(parsed.events);
    recode_first_shots(&mut sequences);
    Ok((sequences, skipped))
}

fn load_trips(config: &RunConfig) -> Result<FreeThrowParse, CliError> {
    let path = config
        .freethrows
        .as_ref()
        .ok_or_else(|| CliError::Usage("this command needs --freethrows".into()))?;
    let schema = schema_map(config)?;
    Ok(parse_free_throws(
        open_input(path)?,
        &schema,
        config.delimiter,
    )?)
}

/// Roster for simulation: an explicit roster file wins, otherwise profiles
/// are extracted from the shot log.
fn load_roster(config: &RunConfig) -> Result<(Vec<PlayerProfile>, usize), CliError> {
    if let Some(path) = &config.roster {
        return Ok((read_roster(open_input(path)?, config.delimiter)?, 0));
    }
    if config.shots.is_some() {
        let (sequences, _) = load_sequences(config)?;
        let extraction = extract_profiles(&sequences)?;
        return Ok((extraction.profiles, extraction.excluded));
    }
    Err(CliError::Usage("simulate needs --roster or --shots".into()))
}

fn skipped_note(skipped: usize) -> String {
    if skipped == 0 {
        String::new()
    } else {
        format!(" Skipped {skipped} malformed input rows.")
    }
}

fn cmd_runs(config: &RunConfig) -> Result<(), CliError> {
    let (sequences, skipped) = load_sequences(config)?;
    let analysis = runs_analysis(
        &sequences,
        config.alpha,
        config.alternative,
        config.intervals,
    )?;
    let mut reporter = Reporter::new(config)?;
    reporter.rows("runs_rows", &analysis.rows)?;
    reporter.summary("runs_summary", &analysis.summary)?;
    let s = &analysis.summary;
    println!(
        "Runs tests ({} alternative) over {} players ({} excluded as degenerate): \
         {} significant at alpha={}, versus a chance band of ({:.2}, {:.2}); \
         Benjamini-Hochberg rejects {}.{} Wrote {}.",
        config.alternative,
        s.n_players,
        s.n_excluded,
        s.n_significant,
        s.alpha,
        s.null_band.0,
        s.null_band.1,
        s.bh_discoveries,
        skipped_note(skipped),
        reporter.written_list()
    );
    Ok(())
}

fn cmd_global(config: &RunConfig) -> Result<(), CliError> {
    let (sequences, skipped) = load_sequences(config)?;
    let analysis = global_hot_hand(&sequences, config.permutations, config.seed)?;
    let mut reporter = Reporter::new(config)?;
    reporter.rows("global_rows", &analysis.rows)?;
    reporter.summary("global_summary", &analysis)?;
    print_global_paragraph(&analysis, skipped, &reporter.written_list());
    Ok(())
}

fn print_global_paragraph(analysis: &GlobalHotHand, skipped: usize, written: &str) {
    let perm_note = match &analysis.permutation {
        Some(perm) => format!(
            " and a {}-round shuffle calibration gives p={:.4}",
            perm.rounds, perm.p_value
        ),
        None => String::new(),
    };
    println!(
        "Pair-difference statistic T={:.4} over {} players ({} pairs; {} excluded for an \
         undefined side): mean post-make rate {:.4} versus post-miss {:.4}; the approximate \
         one-sided normal p-value is {:.4}{}.{} Wrote {}.",
        analysis.test.result.statistic,
        analysis.test.n_included,
        analysis.test.total_pairs,
        analysis.test.n_excluded,
        analysis.mean_p_hat_hit,
        analysis.mean_p_hat_miss,
        analysis.test.result.p_value,
        perm_note,
        skipped_note(skipped),
        written
    );
}

fn cmd_freethrow(config: &RunConfig) -> Result<(), CliError> {
    let parse = load_trips(config)?;
    let analysis = free_throw_analysis(&parse.trips, config.alpha, config.intervals)?;
    let mut reporter = Reporter::new(config)?;
    reporter.rows("freethrow_rows", &analysis.rows)?;
    reporter.summary("freethrow_summary", &analysis.summary)?;
    let s = &analysis.summary;
    println!(
        "Serial-correlation tests over {} players with two-attempt trips ({} retained attempts; \
         {} players under two trips, {} with constant outcomes): {} significant at alpha={}, \
         versus a chance band of ({:.2}, {:.2}); Benjamini-Hochberg rejects {}.{} Wrote {}.",
        s.n_players,
        parse.attempts_retained,
        analysis.excluded_few_trips,
        analysis.excluded_zero_variance,
        s.n_significant,
        s.alpha,
        s.null_band.0,
        s.null_band.1,
        s.bh_discoveries,
        skipped_note(parse.row_errors.len()),
        reporter.written_list()
    );
    Ok(())
}

fn behavior_filters(config: &RunConfig, metric: BehaviorMetric) -> BehaviorFilters {
    let mut filters = metric.default_filters();
    if let Some(v) = config.min_hits {
        filters.min_hits = v;
    }
    if let Some(v) = config.min_misses {
        filters.min_misses = v;
    }
    if let Some(v) = config.min_attempts {
        filters.min_attempts = v;
    }
    filters
}

fn cmd_behavior(config: &RunConfig) -> Result<(), CliError> {
    let metric = config
        .metric
        .ok_or_else(|| CliError::Usage("behavior needs --metric".into()))?;
    let (sequences, skipped) = load_sequences(config)?;
    let filters = behavior_filters(config, metric);
    let (rows, summary) =
        behavior_analysis(&sequences, metric, &filters, config.alpha, config.intervals)?;
    let mut reporter = Reporter::new(config)?;
    reporter.rows(&format!("behavior_{}_rows", metric.label()), &rows)?;
    reporter.summary(&format!("behavior_{}_summary", metric.label()), &summary)?;
    println!(
        "Behavioral {} comparison over {} players (filters: >={} makes, >={} misses, >={} \
         attempts; {} excluded for thin groups): {} larger after a make, {} after a miss; \
         {} significant at alpha={}; Benjamini-Hochberg rejects {}.{} Wrote {}.",
        metric.label(),
        summary.league.n_players,
        filters.min_hits,
        filters.min_misses,
        filters.min_attempts,
        summary.league.n_excluded,
        summary.n_higher_after_make,
        summary.n_higher_after_miss,
        summary.league.n_significant,
        summary.league.alpha,
        summary.league.bh_discoveries,
        skipped_note(skipped),
        reporter.written_list()
    );
    Ok(())
}

/// Key/value view over the emitted halftime rows.
struct HalftimeSummaryFile<'a>(&'a [HalftimeRow]);

impl Summary for HalftimeSummaryFile<'_> {
    fn entries(&self) -> Vec<(String, Cell)> {
        let mut entries = vec![entry("windows", Cell::Int(self.0.len() as i64))];
        for row in self.0 {
            entries.push(entry(
                format!("{}_player_games", row.window),
                Cell::Int(row.player_games as i64),
            ));
            entries.push(entry(format!("{}_r", row.window), Cell::Stat(row.r)));
            entries.push(entry(
                format!("{}_p_value", row.window),
                Cell::PValue(row.p_value),
            ));
        }
        entries
    }
}

fn cmd_halftime(config: &RunConfig) -> Result<(), CliError> {
    let (sequences, skipped) = load_sequences(config)?;
    let windows: Vec<HalftimeWindow> = match config.window {
        WindowChoice::One(w) => vec![w],
        WindowChoice::All => HalftimeWindow::ALL.to_vec(),
    };
    let mut rows = Vec::new();
    for window in windows {
        match halftime_analysis(&sequences, window) {
            Ok(row) => rows.push(row),
            // With every window requested, thin data may disqualify the
            // wider ones (too few player-games, or rates that never vary);
            // a single requested window still errors.
            Err(_) if config.window == WindowChoice::All => {}
            Err(e) => return Err(e.into()),
        }
    }
    if rows.is_empty() {
        return Err(CliError::Data(
            "no player-games qualify for any halftime window".into(),
        ));
    }
    let mut reporter = Reporter::new(config)?;
    reporter.rows("halftime_rows", &rows)?;
    reporter.summary("halftime_summary", &HalftimeSummaryFile(&rows))?;
    let described: Vec<String> = rows
        .iter()
        .map(|r| format!("{}: r={:.4}, p={:.4}", r.window, r.r, r.p_value))
        .collect();
    println!(
        "Halftime comparison over {} window(s) ({}).{} Wrote {}.",
        rows.len(),
        described.join("; "),
        skipped_note(skipped),
        reporter.written_list()
    );
    Ok(())
}

fn cmd_simulate(config: &RunConfig) -> Result<(), CliError> {
    let (roster, excluded) = load_roster(config)?;
    let curve = sweep(
        &roster,
        &config.deltas,
        config.replicates,
        config.seed,
        config.alpha,
        config.threshold_discoveries,
    )?;
    let summary = power_summary(&curve);
    let mut reporter = Reporter::new(config)?;
    reporter.rows("power_curve", &curve.points)?;
    reporter.rows("power_deltas", &summary.per_delta)?;
    reporter.summary("power_summary", &summary)?;
    println!(
        "Simulated {} runs ({} deltas x {} replicates) over {} players ({} excluded for a \
         degenerate season rate) at seed {}: mean discoveries first exceed {} at {}, mean T \
         first exceeds {:.3} at {}; {} quarter probabilities were clamped. Wrote {}.",
        curve.points.len(),
        config.deltas.len(),
        config.replicates,
        roster.len(),
        excluded,
        config.seed,
        curve.threshold_discoveries,
        describe_crossing(summary.first_delta_discoveries),
        summary.t_critical,
        describe_crossing(summary.first_delta_t),
        curve.points.iter().map(|p| p.clamp_count).sum::<u64>(),
        reporter.written_list()
    );
    Ok(())
}

fn describe_crossing(delta: Option<f64>) -> String {
    match delta {
        Some(d) => format!("delta={d}"),
        None => "no grid point".to_string(),
    }
}

fn cmd_report(config: &RunConfig) -> Result<(), CliError> {
    if config.shots.is_none() && config.freethrows.is_none() {
        return Err(CliError::Usage(
            "report needs --shots and/or --freethrows".into(),
        ));
    }
    let mut reporter = Reporter::new(config)?;
    let mut notes: Vec<String> = Vec::new();

    if config.shots.is_some() {
        let (sequences, skipped) = load_sequences(config)?;
        if skipped > 0 {
            notes.push(format!("skipped {skipped} malformed shot rows"));
        }
        let runs = runs_analysis(
            &sequences,
            config.alpha,
            config.alternative,
            config.intervals,
        )?;
        reporter.rows("runs_rows", &runs.rows)?;
        reporter.summary("runs_summary", &runs.summary)?;
        notes.push(format!(
            "runs: {}/{} significant",
            runs.summary.n_significant, runs.summary.n_players
        ));

        let global = global_hot_hand(&sequences, config.permutations, config.seed)?;
        reporter.rows("global_rows", &global.rows)?;
        reporter.summary("global_summary", &global)?;
        notes.push(format!("global T={:.4}", global.test.result.statistic));

        for metric in [
            BehaviorMetric::ShotDistance,
            BehaviorMetric::TimeBetweenShots,
            BehaviorMetric::Dribbles,
            BehaviorMetric::DefenderDistance,
        ] {
            let filters = behavior_filters(config, metric);
            let (rows, summary) =
                behavior_analysis(&sequences, metric, &filters, config.alpha, config.intervals)?;
            reporter.rows(&format!("behavior_{}_rows", metric.label()), &rows)?;
            reporter.summary(&format!("behavior_{}_summary", metric.label()), &summary)?;
            notes.push(format!(
                "{}: {}/{} significant, BH {}",
                metric.label(),
                summary.league.n_significant,
                summary.league.n_players,
                summary.league.bh_discoveries
            ));
        }

        let mut halftime_rows = Vec::new();
        for window in HalftimeWindow::ALL {
            if let Ok(row) = halftime_analysis(&sequences, window) {
                halftime_rows.push(row);
            }
        }
        if !halftime_rows.is_empty() {
            reporter.rows("halftime_rows", &halftime_rows)?;
            reporter.summary("halftime_summary", &HalftimeSummaryFile(&halftime_rows))?;
            notes.push(format!("halftime: {} windows", halftime_rows.len()));
        }
    }

    if config.freethrows.is_some() {
        let parse = load_trips(config)?;
        let analysis = free_throw_analysis(&parse.trips, config.alpha, config.intervals)?;
        reporter.rows("freethrow_rows", &analysis.rows)?;
        reporter.summary("freethrow_summary", &analysis.summary)?;
        notes.push(format!(
            "free throws: {}/{} significant",
            analysis.summary.n_significant, analysis.summary.n_players
        ));
    }

    println!(
        "Full report ({}). Wrote {}.",
        notes.join("; "),
        reporter.written_list()
    );
    Ok(())
}
