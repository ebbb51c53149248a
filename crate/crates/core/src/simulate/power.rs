//! Sweep the streakiness grid and summarize detector power.

use rayon::prelude::*;

use super::engine::simulate_run;
use super::profile::PlayerProfile;
use super::SimError;
use crate::stats::normal_upper_critical;
use crate::tabular::{entry, Cell, Summary, Tabular};

/// One simulation's detector outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerPoint {
    pub delta: f64,
    pub replicate: u32,
    pub seed: u64,
    /// Benjamini-Hochberg discoveries over the per-player runs tests.
    pub discoveries: usize,
    pub global_t: f64,
    /// Clamped quarter probabilities in this run.
    pub clamp_count: u64,
}

/// All sweep points plus the thresholds used to read them.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerCurve {
    /// Ordered by (delta grid position, replicate).
    pub points: Vec<PowerPoint>,
    /// Discovery count above which a point signals detection.
    pub threshold_discoveries: f64,
    pub alpha: f64,
}

/// Run `replicates` simulations at every delta in `grid` and collect both
/// detectors' outputs.
///
/// Points are computed in parallel but keyed deterministically, so the
/// result is bit-identical for a fixed `master_seed` no matter the thread
/// count.
pub fn sweep(
    roster: &[PlayerProfile],
    grid: &[f64],
    replicates: u32,
    master_seed: u64,
    alpha: f64,
    threshold_discoveries: f64,
) -> Result<PowerCurve, SimError> {
    if roster.is_empty() {
        return Err(SimError::EmptyRoster);
    }
    if grid.is_empty() {
        return Err(SimError::Roster("empty delta grid".into()));
    }
    if replicates == 0 {
        return Err(SimError::Roster("zero replicates".into()));
    }
    for &delta in grid {
        if !(0.0..1.0).contains(&delta) {
            return Err(SimError::InvalidDelta(delta));
        }
    }
    let jobs: Vec<(f64, u32)> = grid
        .iter()
        .flat_map(|&delta| (0..replicates).map(move |rep| (delta, rep)))
        .collect();
    let points = jobs
        .par_iter()
        .map(|&(delta, replicate)| {
            let run = simulate_run(roster, delta, replicate, master_seed, alpha)?;
            Ok(PowerPoint {
                delta,
                replicate,
                seed: master_seed,
                discoveries: run.detectors.bh_discoveries,
                global_t: run.detectors.global_t,
                clamp_count: run.clamp_count,
            })
        })
        .collect::<Result<Vec<_>, SimError>>()?;
    Ok(PowerCurve {
        points,
        threshold_discoveries,
        alpha,
    })
}

/// Per-delta aggregates across replicates.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaSummary {
    pub delta: f64,
    pub replicates: usize,
    pub mean_discoveries: f64,
    pub sd_discoveries: f64,
    pub mean_t: f64,
    pub sd_t: f64,
    pub clamp_count: u64,
}

/// Power summary: per-delta means and the first grid crossings.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSummary {
    /// One entry per distinct delta, in grid order.
    pub per_delta: Vec<DeltaSummary>,
    /// Smallest delta whose mean discovery count exceeds the threshold.
    pub first_delta_discoveries: Option<f64>,
    /// Smallest delta whose mean statistic exceeds the one-sided normal
    /// critical value.
    pub first_delta_t: Option<f64>,
    pub threshold_discoveries: f64,
    pub t_critical: f64,
}

/// Aggregate a sweep per delta and report where each detector first fires.
pub fn power_summary(curve: &PowerCurve) -> PowerSummary {
    let mut per_delta: Vec<DeltaSummary> = Vec::new();
    for point in &curve.points {
        if per_delta.last().map(|d| d.delta) != Some(point.delta) {
            per_delta.push(DeltaSummary {
                delta: point.delta,
                replicates: 0,
                mean_discoveries: 0.0,
                sd_discoveries: 0.0,
                mean_t: 0.0,
                sd_t: 0.0,
                clamp_count: 0,
            });
        }
        let entry = per_delta.last_mut().expect("just pushed");
        entry.replicates += 1;
        entry.mean_discoveries += point.discoveries as f64;
        entry.sd_discoveries += (point.discoveries as f64).powi(2);
        entry.mean_t += point.global_t;
        entry.sd_t += point.global_t * point.global_t;
        entry.clamp_count += point.clamp_count;
    }
    for entry in &mut per_delta {
        let n = entry.replicates as f64;
        entry.mean_discoveries /= n;
        entry.mean_t /= n;
        let var = |sum_sq: f64, mean: f64| {
            if entry.replicates < 2 {
                0.0
            } else {
                ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
            }
        };
        entry.sd_discoveries = var(entry.sd_discoveries, entry.mean_discoveries).sqrt();
        entry.sd_t = var(entry.sd_t, entry.mean_t).sqrt();
    }

    let t_critical = normal_upper_critical(curve.alpha);
    let first_delta_discoveries = per_delta
        .iter()
        .find(|d| d.mean_discoveries > curve.threshold_discoveries)
        .map(|d| d.delta);
    let first_delta_t = per_delta
        .iter()
        .find(|d| d.mean_t > t_critical)
        .map(|d| d.delta);
    PowerSummary {
        per_delta,
        first_delta_discoveries,
        first_delta_t,
        threshold_discoveries: curve.threshold_discoveries,
        t_critical,
    }
}

impl Tabular for PowerPoint {
    fn headers() -> &'static [&'static str] {
        &["delta", "replicate", "seed", "discoveries", "global_T"]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Stat(self.delta),
            Cell::UInt(u64::from(self.replicate)),
            Cell::UInt(self.seed),
            Cell::Int(self.discoveries as i64),
            Cell::Stat(self.global_t),
        ]
    }
}

impl Tabular for DeltaSummary {
    fn headers() -> &'static [&'static str] {
        &[
            "delta",
            "replicates",
            "mean_discoveries",
            "sd_discoveries",
            "mean_T",
            "sd_T",
            "clamped_quarters",
        ]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Stat(self.delta),
            Cell::Int(self.replicates as i64),
            Cell::Stat(self.mean_discoveries),
            Cell::Stat(self.sd_discoveries),
            Cell::Stat(self.mean_t),
            Cell::Stat(self.sd_t),
            Cell::UInt(self.clamp_count),
        ]
    }
}

impl Summary for PowerSummary {
    fn entries(&self) -> Vec<(String, Cell)> {
        let first = |d: Option<f64>| d.map_or(Cell::Missing, Cell::Stat);
        vec![
            entry("deltas", Cell::Int(self.per_delta.len() as i64)),
            entry(
                "threshold_discoveries",
                Cell::Stat(self.threshold_discoveries),
            ),
            entry("t_critical", Cell::Stat(self.t_critical)),
            entry(
                "first_delta_over_discovery_threshold",
                first(self.first_delta_discoveries),
            ),
            entry("first_delta_over_t_critical", first(self.first_delta_t)),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::ScheduleSlot;
    use approx::assert_abs_diff_eq;

    fn small_roster(n: usize) -> Vec<PlayerProfile> {
        (0..n)
            .map(|i| PlayerProfile {
                player_id: format!("p{i:03}"),
                season_fg_pct: 0.4 + 0.001 * i as f64,
                schedule: (0..10)
                    .flat_map(|g| {
                        (1..=4).map(move |q| ScheduleSlot {
                            game_id: format!("g{g:02}"),
                            period: q,
                            attempts: 3,
                        })
                    })
                    .collect(),
            })
            .collect()
    }

    #[test]
    fn default_grid_has_210_points() {
        let grid: Vec<f64> = (0..21).map(|i| i as f64 * 0.03).collect();
        let roster = small_roster(5);
        let curve = sweep(&roster, &grid, 10, 7, 0.05, 22.0).unwrap();
        assert_eq!(curve.points.len(), 210);
        let distinct: std::collections::BTreeSet<u64> =
            curve.points.iter().map(|p| p.delta.to_bits()).collect();
        assert_eq!(distinct.len(), 21);
    }

    #[test]
    fn sweep_is_deterministic() {
        let roster = small_roster(4);
        let grid = [0.0, 0.3];
        let a = sweep(&roster, &grid, 5, 99, 0.05, 22.0).unwrap();
        let b = sweep(&roster, &grid, 5, 99, 0.05, 22.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn summary_aggregates_per_delta() {
        let curve = PowerCurve {
            points: vec![
                PowerPoint {
                    delta: 0.0,
                    replicate: 0,
                    seed: 1,
                    discoveries: 0,
                    global_t: -0.5,
                    clamp_count: 0,
                },
                PowerPoint {
                    delta: 0.0,
                    replicate: 1,
                    seed: 1,
                    discoveries: 2,
                    global_t: 0.5,
                    clamp_count: 0,
                },
                PowerPoint {
                    delta: 0.3,
                    replicate: 0,
                    seed: 1,
                    discoveries: 30,
                    global_t: 4.0,
                    clamp_count: 1,
                },
                PowerPoint {
                    delta: 0.3,
                    replicate: 1,
                    seed: 1,
                    discoveries: 40,
                    global_t: 6.0,
                    clamp_count: 2,
                },
            ],
            threshold_discoveries: 22.0,
            alpha: 0.05,
        };
        let summary = power_summary(&curve);
        assert_eq!(summary.per_delta.len(), 2);
        assert_abs_diff_eq!(summary.per_delta[0].mean_discoveries, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(summary.per_delta[1].mean_discoveries, 35.0, epsilon = 1e-12);
        assert_abs_diff_eq!(summary.per_delta[1].mean_t, 5.0, epsilon = 1e-12);
        assert_eq!(summary.per_delta[1].clamp_count, 3);
        assert_eq!(summary.first_delta_discoveries, Some(0.3));
        assert_eq!(summary.first_delta_t, Some(0.3));
    }

    #[test]
    fn no_crossing_reported_when_flat() {
        let curve = PowerCurve {
            points: vec![PowerPoint {
                delta: 0.0,
                replicate: 0,
                seed: 1,
                discoveries: 0,
                global_t: 0.0,
                clamp_count: 0,
            }],
            threshold_discoveries: 22.0,
            alpha: 0.05,
        };
        let summary = power_summary(&curve);
        assert_eq!(summary.first_delta_discoveries, None);
        assert_eq!(summary.first_delta_t, None);
    }

    #[test]
    fn monotone_synthetic_curve_crossing() {
        let points = (0..4)
            .map(|i| PowerPoint {
                delta: i as f64 * 0.2,
                replicate: 0,
                seed: 1,
                discoveries: i * 15,
                global_t: i as f64,
                clamp_count: 0,
            })
            .collect();
        let summary = power_summary(&PowerCurve {
            points,
            threshold_discoveries: 22.0,
            alpha: 0.05,
        });
        // Discoveries 0, 15, 30, 45 cross 22 at delta 0.4; T crosses 1.645
        // at delta 0.4 as well.
        assert_eq!(summary.first_delta_discoveries, Some(0.4));
        assert_eq!(summary.first_delta_t, Some(0.4));
    }
}
