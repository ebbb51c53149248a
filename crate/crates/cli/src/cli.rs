//! Flag definitions. Every option is optional at parse time; defaults and
//! config-file values are merged in [`crate::config`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "hotstreak",
    version,
    about = "Streak-structure detection for make/miss shooting data",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-player runs tests aggregated across games.
    Runs {
        #[command(flatten)]
        common: CommonArgs,
        /// Test direction; `less` flags streaky (too few runs) players.
        #[arg(long, value_enum)]
        alternative: Option<AlternativeArg>,
    },
    /// League-wide disjoint-pair difference test.
    Global {
        #[command(flatten)]
        common: CommonArgs,
        /// Within-player shuffle rounds calibrating the statistic (0 = off).
        #[arg(long)]
        permutations: Option<usize>,
    },
    /// Serial correlation between the first two free throws of each trip.
    Freethrow {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// After-make versus after-miss behavioral difference of means.
    Behavior {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum)]
        metric: Option<MetricArg>,
        /// Minimum season makes to include a player.
        #[arg(long)]
        min_hits: Option<usize>,
        /// Minimum season misses to include a player.
        #[arg(long)]
        min_misses: Option<usize>,
        /// Minimum season attempts to include a player.
        #[arg(long)]
        min_attempts: Option<usize>,
    },
    /// Shooting percentage before versus after the halftime break.
    Halftime {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum)]
        window: Option<WindowArg>,
    },
    /// Monte Carlo power sweep over the streakiness parameter.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        /// Grid as `start:step:end` (inclusive) or a comma list of values.
        #[arg(long)]
        deltas: Option<String>,
        /// Replicates per grid value.
        #[arg(long)]
        reps: Option<u32>,
        /// Discovery count marking a detection.
        #[arg(long)]
        threshold_discoveries: Option<f64>,
    },
    /// Run every analysis the provided inputs support.
    Report {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        permutations: Option<usize>,
    },
}

impl Command {
    pub fn common(&self) -> &CommonArgs {
        match self {
            Command::Runs { common, .. }
            | Command::Global { common, .. }
            | Command::Freethrow { common }
            | Command::Behavior { common, .. }
            | Command::Halftime { common, .. }
            | Command::Simulate { common, .. }
            | Command::Report { common, .. } => common,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Flat key=value config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Shot-log file.
    #[arg(long)]
    pub shots: Option<PathBuf>,
    /// Free-throw file.
    #[arg(long)]
    pub freethrows: Option<PathBuf>,
    /// Roster file for simulation (alternative to extracting from --shots).
    #[arg(long)]
    pub roster: Option<PathBuf>,
    /// Column-name mapping file (canonical=source lines).
    #[arg(long)]
    pub schema_map: Option<PathBuf>,
    /// Input field delimiter.
    #[arg(long)]
    pub delimiter: Option<char>,
    /// Significance level.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Master seed for anything randomized.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (0 = auto).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Exact binomial intervals instead of the normal approximation.
    #[arg(long)]
    pub exact_intervals: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlternativeArg {
    Less,
    Greater,
    TwoSided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Distance,
    Time,
    Dribbles,
    Defender,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WindowArg {
    Last3,
    Last4,
    Last5,
    Last6,
    AllQ2q3,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}
