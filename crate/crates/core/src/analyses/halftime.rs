//! Shooting performance just before versus just after the halftime break.

use super::AnalysisError;
use crate::ingest::PlayerSequences;
use crate::stats::{corr_test, pearson_r, Alternative};
use crate::tabular::{Cell, Tabular};

/// Which slice of second- and third-quarter attempts is compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalftimeWindow {
    Last3First3,
    Last4First4,
    Last5First5,
    Last6First6,
    AllQ2Q3,
}

impl HalftimeWindow {
    pub const ALL: [HalftimeWindow; 5] = [
        HalftimeWindow::Last3First3,
        HalftimeWindow::Last4First4,
        HalftimeWindow::Last5First5,
        HalftimeWindow::Last6First6,
        HalftimeWindow::AllQ2Q3,
    ];

    /// Shots taken from each side of the break, or `None` for the full
    /// quarters.
    pub fn window_size(&self) -> Option<usize> {
        match self {
            HalftimeWindow::Last3First3 => Some(3),
            HalftimeWindow::Last4First4 => Some(4),
            HalftimeWindow::Last5First5 => Some(5),
            HalftimeWindow::Last6First6 => Some(6),
            HalftimeWindow::AllQ2Q3 => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            HalftimeWindow::Last3First3 => "last3-first3",
            HalftimeWindow::Last4First4 => "last4-first4",
            HalftimeWindow::Last5First5 => "last5-first5",
            HalftimeWindow::Last6First6 => "last6-first6",
            HalftimeWindow::AllQ2Q3 => "all-q2-q3",
        }
    }
}

/// One window's pre/post-half comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct HalftimeRow {
    pub window: &'static str,
    pub shots_pre: usize,
    pub shots_post: usize,
    /// Qualifying (player, game) units.
    pub player_games: usize,
    /// Distinct qualifying players.
    pub players: usize,
    /// Pooled field-goal percentage over all pre-half window shots.
    pub fgp_pre: f64,
    pub fgp_post: f64,
    /// Correlation between per-player-game pre and post percentages.
    pub r: f64,
    /// One-sided (less) p-value for cooling off across the break.
    pub p_value: f64,
}

/// Compare field-goal percentage over the last shots of the second quarter
/// against the first shots of the third, per qualifying player-game.
///
/// The unit of analysis is a (player, game) with at least three attempts in
/// each of the second and third quarters; windows wider than a player-game's
/// attempts disqualify it for that row.
pub fn halftime_analysis(
    sequences: &PlayerSequences,
    window: HalftimeWindow,
) -> Result<HalftimeRow, AnalysisError> {
    let mut pre_rates = Vec::new();
    let mut post_rates = Vec::new();
    let mut players = std::collections::BTreeSet::new();
    let mut shots_pre = 0usize;
    let mut shots_post = 0usize;
    let mut makes_pre = 0usize;
    let mut makes_post = 0usize;

    for (player_id, seqs) in sequences {
        for seq in seqs {
            let q2: Vec<bool> = seq
                .events
                .iter()
                .filter(|e| e.period == 2)
                .map(|e| e.made)
                .collect();
            let q3: Vec<bool> = seq
                .events
                .iter()
                .filter(|e| e.period == 3)
                .map(|e| e.made)
                .collect();
            if q2.len() < 3 || q3.len() < 3 {
                continue;
            }
            let (pre, post): (&[bool], &[bool]) = match window.window_size() {
                Some(k) => {
                    if q2.len() < k || q3.len() < k {
                        continue;
                    }
                    (&q2[q2.len() - k..], &q3[..k])
                }
                None => (&q2, &q3),
            };
            shots_pre += pre.len();
            shots_post += post.len();
            let pre_makes = pre.iter().filter(|&&m| m).count();
            let post_makes = post.iter().filter(|&&m| m).count();
            makes_pre += pre_makes;
            makes_post += post_makes;
            pre_rates.push(pre_makes as f64 / pre.len() as f64);
            post_rates.push(post_makes as f64 / post.len() as f64);
            players.insert(player_id.clone());
        }
    }

    if pre_rates.is_empty() {
        return Err(AnalysisError::NoQualifyingData(format!(
            "no player-games qualify for window {}",
            window.label()
        )));
    }
    let r = pearson_r(&pre_rates, &post_rates)?;
    let p_value = corr_test(r, pre_rates.len(), Alternative::Less)?.p_value;
    Ok(HalftimeRow {
        window: window.label(),
        shots_pre,
        shots_post,
        player_games: pre_rates.len(),
        players: players.len(),
        fgp_pre: makes_pre as f64 / shots_pre as f64,
        fgp_post: makes_post as f64 / shots_post as f64,
        r,
        p_value,
    })
}

impl Tabular for HalftimeRow {
    fn headers() -> &'static [&'static str] {
        &[
            "Window",
            "Pre-Half Shots",
            "Post-Half Shots",
            "Player-Games",
            "Players",
            "FGP Pre",
            "FGP Post",
            "r",
            "P-value",
        ]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Str(self.window.to_string()),
            Cell::Int(self.shots_pre as i64),
            Cell::Int(self.shots_post as i64),
            Cell::Int(self.player_games as i64),
            Cell::Int(self.players as i64),
            Cell::Stat(self.fgp_pre),
            Cell::Stat(self.fgp_post),
            Cell::Stat(self.r),
            Cell::PValue(self.p_value),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{build_sequences, parse_shot_log, SchemaMap};
    use approx::assert_abs_diff_eq;

    const HEADER: &str =
        "game_id,player_id,player_name,period,clock_remaining_s,made,shot_distance_ft,dribbles,defender_distance_ft";

    // A player-game with the given q2/q3 outcome lists.
    fn player_game(player: &str, game: &str, q2: &[bool], q3: &[bool]) -> String {
        let mut rows = String::new();
        for (i, &made) in q2.iter().enumerate() {
            rows.push_str(&format!(
                "{game},{player},{player},2,{},{},1,0,1\n",
                700 - i as i64,
                u8::from(made)
            ));
        }
        for (i, &made) in q3.iter().enumerate() {
            rows.push_str(&format!(
                "{game},{player},{player},3,{},{},1,0,1\n",
                700 - i as i64,
                u8::from(made)
            ));
        }
        rows
    }

    fn league(rows: &str) -> PlayerSequences {
        let text = format!("{HEADER}\n{rows}");
        let parsed = parse_shot_log(text.as_bytes(), &SchemaMap::identity(), b',').unwrap();
        build_sequences(parsed.events)
    }

    const H: bool = true;
    const M: bool = false;

    #[test]
    fn anticorrelated_player_games() {
        // Pre percentages (1, 0, 0.5) against post (0, 1, 0.5): r = -1.
        let mut rows = String::new();
        rows.push_str(&player_game("ann", "g1", &[H, H, H], &[M, M, M]));
        rows.push_str(&player_game("bob", "g1", &[M, M, M], &[H, H, H]));
        rows.push_str(&player_game("cat", "g1", &[H, M, H, M], &[M, H, M, H]));
        let row = halftime_analysis(&league(&rows), HalftimeWindow::AllQ2Q3).unwrap();
        assert_eq!(row.player_games, 3);
        assert_eq!(row.players, 3);
        assert_abs_diff_eq!(row.r, -1.0, epsilon = 1e-12);
        assert_eq!(row.shots_pre, 10);
        assert_eq!(row.shots_post, 10);
    }

    #[test]
    fn repeating_percentages_give_perfect_correlation() {
        let mut rows = String::new();
        rows.push_str(&player_game("ann", "g1", &[H, H, H], &[H, H, H]));
        rows.push_str(&player_game("bob", "g1", &[M, M, M], &[M, M, M]));
        rows.push_str(&player_game("cat", "g1", &[H, M, H], &[H, H, M]));
        let row = halftime_analysis(&league(&rows), HalftimeWindow::Last3First3).unwrap();
        assert_abs_diff_eq!(row.r, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn window_takes_last_of_q2_and_first_of_q3() {
        // Q2: miss,miss,hit,hit,hit -> last 3 are all hits.
        // Q3: hit,miss,miss,hit,hit -> first 3 are hit,miss,miss.
        let mut rows = String::new();
        rows.push_str(&player_game(
            "ann",
            "g1",
            &[M, M, H, H, H],
            &[H, M, M, H, H],
        ));
        rows.push_str(&player_game("bob", "g1", &[H, M, M], &[M, M, H]));
        rows.push_str(&player_game("cat", "g1", &[M, M, M], &[H, H, H]));
        let row = halftime_analysis(&league(&rows), HalftimeWindow::Last3First3).unwrap();
        assert_eq!(row.player_games, 3);
        // Pre: Ann 3/3, Bob 1/3, Cat 0/3; post: Ann 1/3, Bob 1/3, Cat 3/3.
        assert_abs_diff_eq!(row.fgp_pre, 4.0 / 9.0, epsilon = 1e-12);
        assert_abs_diff_eq!(row.fgp_post, 5.0 / 9.0, epsilon = 1e-12);
    }

    #[test]
    fn wider_windows_disqualify_short_player_games() {
        let mut rows = String::new();
        rows.push_str(&player_game("ann", "g1", &[H, M, H, M], &[M, H, M, H]));
        rows.push_str(&player_game("bob", "g1", &[H, M, H], &[M, H, M]));
        rows.push_str(&player_game("cat", "g1", &[M, H, M, M], &[H, H, M, M]));
        rows.push_str(&player_game("dee", "g1", &[H, H, M, M], &[M, M, M, H]));
        let row = halftime_analysis(&league(&rows), HalftimeWindow::Last4First4).unwrap();
        // Bob has only three attempts per quarter and drops out.
        assert_eq!(row.player_games, 3);
        assert_eq!(row.shots_pre, 12);
    }

    #[test]
    fn no_qualifying_games_is_an_error() {
        let rows = player_game("ann", "g1", &[H, M], &[M, H]);
        assert!(matches!(
            halftime_analysis(&league(&rows), HalftimeWindow::Last3First3),
            Err(AnalysisError::NoQualifyingData(_))
        ));
    }
}
