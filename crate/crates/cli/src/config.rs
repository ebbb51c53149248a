//! Resolved run configuration. Precedence: command-line flags override
//! config-file values, which override built-in defaults.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;
use std::str::FromStr;

use hotstreak::analyses::{BehaviorMetric, HalftimeWindow};
use hotstreak::simulate::DEFAULT_DISCOVERY_THRESHOLD;
use hotstreak::stats::{Alternative, IntervalMethod};

use crate::cli::{AlternativeArg, Command, CommonArgs, FormatArg, MetricArg, WindowArg};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }

    fn label(&self) -> &'static str {
        self.extension()
    }
}

/// Halftime window selection; `All` emits one row per window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowChoice {
    All,
    One(HalftimeWindow),
}

/// Everything a subcommand needs, after merging flags, config file and
/// defaults.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub shots: Option<PathBuf>,
    pub freethrows: Option<PathBuf>,
    pub roster: Option<PathBuf>,
    pub schema_map: Option<PathBuf>,
    pub delimiter: u8,
    pub alpha: f64,
    pub out: PathBuf,
    pub format: OutputFormat,
    pub seed: u64,
    pub threads: usize,
    pub intervals: IntervalMethod,
    pub alternative: Alternative,
    pub permutations: usize,
    pub metric: Option<BehaviorMetric>,
    pub min_hits: Option<usize>,
    pub min_misses: Option<usize>,
    pub min_attempts: Option<usize>,
    pub window: WindowChoice,
    pub deltas: Vec<f64>,
    pub replicates: u32,
    pub threshold_discoveries: f64,
}

/// Config-file values: normalized key -> raw string.
struct FileValues(BTreeMap<String, String>);

impl FileValues {
    fn empty() -> Self {
        FileValues(BTreeMap::new())
    }

    fn parse<R: Read>(mut reader: R) -> Result<Self, CliError> {
        let mut text = String::new();
        reader
            .read_to_string(&mut text)
            .map_err(|e| CliError::Data(format!("config file: {e}")))?;
        let mut map = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected key=value", i + 1))
            })?;
            map.insert(normalize_key(key), value.trim().to_string());
        }
        Ok(FileValues(map))
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.0.get(&normalize_key(key)) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                CliError::Usage(format!("config value for {key:?} is invalid: {raw:?}"))
            }),
        }
    }

    fn get_path(&self, key: &str) -> Option<PathBuf> {
        self.0.get(&normalize_key(key)).map(PathBuf::from)
    }
}

fn normalize_key(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('_', "-")
}

impl RunConfig {
    /// Merge a parsed command with its config file and defaults.
    pub fn resolve(command: &Command) -> Result<RunConfig, CliError> {
        let common = command.common();
        let file = match &common.config {
            Some(path) => {
                let reader = std::fs::File::open(path).map_err(|e| {
                    CliError::Data(format!("cannot open config {}: {e}", path.display()))
                })?;
                FileValues::parse(reader)?
            }
            None => FileValues::empty(),
        };
        let mut config = RunConfig::from_common(common, &file)?;
        config.apply_command(command, &file)?;
        config.validate()?;
        Ok(config)
    }

    fn from_common(common: &CommonArgs, file: &FileValues) -> Result<RunConfig, CliError> {
        let delimiter_char: char = match common.delimiter {
            Some(c) => c,
            None => file.get::<char>("delimiter")?.unwrap_or(','),
        };
        if !delimiter_char.is_ascii() {
            return Err(CliError::Usage(format!(
                "delimiter must be a single ascii character, got {delimiter_char:?}"
            )));
        }
        let format = match common.format {
            Some(FormatArg::Csv) => OutputFormat::Csv,
            Some(FormatArg::Json) => OutputFormat::Json,
            None => match file.get::<String>("format")?.as_deref() {
                None => OutputFormat::Csv,
                Some("csv") => OutputFormat::Csv,
                Some("json") => OutputFormat::Json,
                Some(other) => return Err(CliError::Usage(format!("unknown format {other:?}"))),
            },
        };
        let exact = common.exact_intervals || file.get::<bool>("exact-intervals")?.unwrap_or(false);
        Ok(RunConfig {
            shots: common.shots.clone().or_else(|| file.get_path("shots")),
            freethrows: common
                .freethrows
                .clone()
                .or_else(|| file.get_path("freethrows")),
            roster: common.roster.clone().or_else(|| file.get_path("roster")),
            schema_map: common
                .schema_map
                .clone()
                .or_else(|| file.get_path("schema-map")),
            delimiter: delimiter_char as u8,
            alpha: common
                .alpha
                .map_or_else(|| file.get("alpha"), |v| Ok(Some(v)))?
                .unwrap_or(0.05),
            out: common
                .out
                .clone()
                .or_else(|| file.get_path("out"))
                .unwrap_or_else(|| PathBuf::from("out")),
            format,
            seed: common
                .seed
                .map_or_else(|| file.get("seed"), |v| Ok(Some(v)))?
                .unwrap_or(1),
            threads: common
                .threads
                .map_or_else(|| file.get("threads"), |v| Ok(Some(v)))?
                .unwrap_or(0),
            intervals: if exact {
                IntervalMethod::ExactBinomial
            } else {
                IntervalMethod::NormalApprox
            },
            alternative: Alternative::Less,
            permutations: 0,
            metric: None,
            min_hits: None,
            min_misses: None,
            min_attempts: None,
            window: WindowChoice::All,
            deltas: parse_delta_grid("0:0.03:0.6")?,
            replicates: 10,
            threshold_discoveries: DEFAULT_DISCOVERY_THRESHOLD,
        })
    }

    fn apply_command(&mut self, command: &Command, file: &FileValues) -> Result<(), CliError> {
        match command {
            Command::Runs { alternative, .. } => {
                let arg = match alternative {
                    Some(a) => Some(*a),
                    None => match file.get::<String>("alternative")?.as_deref() {
                        None => None,
                        Some("less") => Some(AlternativeArg::Less),
                        Some("greater") => Some(AlternativeArg::Greater),
                        Some("two-sided") => Some(AlternativeArg::TwoSided),
                        Some(other) => {
                            return Err(CliError::Usage(format!("unknown alternative {other:?}")))
                        }
                    },
                };
                self.alternative = match arg.unwrap_or(AlternativeArg::Less) {
                    AlternativeArg::Less => Alternative::Less,
                    AlternativeArg::Greater => Alternative::Greater,
                    AlternativeArg::TwoSided => Alternative::TwoSided,
                };
            }
            Command::Global { permutations, .. } | Command::Report { permutations, .. } => {
                self.permutations = match permutations {
                    Some(p) => *p,
                    None => file.get("permutations")?.unwrap_or(0),
                };
            }
            Command::Freethrow { .. } => {}
            Command::Behavior {
                metric,
                min_hits,
                min_misses,
                min_attempts,
                ..
            } => {
                let arg = match metric {
                    Some(m) => Some(*m),
                    None => match file.get::<String>("metric")?.as_deref() {
                        None => None,
                        Some("distance") => Some(MetricArg::Distance),
                        Some("time") => Some(MetricArg::Time),
                        Some("dribbles") => Some(MetricArg::Dribbles),
                        Some("defender") => Some(MetricArg::Defender),
                        Some(other) => {
                            return Err(CliError::Usage(format!("unknown metric {other:?}")))
                        }
                    },
                };
                self.metric = arg.map(|m| match m {
                    MetricArg::Distance => BehaviorMetric::ShotDistance,
                    MetricArg::Time => BehaviorMetric::TimeBetweenShots,
                    MetricArg::Dribbles => BehaviorMetric::Dribbles,
                    MetricArg::Defender => BehaviorMetric::DefenderDistance,
                });
                self.min_hits = opt_or_file(*min_hits, file, "min-hits")?;
                self.min_misses = opt_or_file(*min_misses, file, "min-misses")?;
                self.min_attempts = opt_or_file(*min_attempts, file, "min-attempts")?;
            }
            Command::Halftime { window, .. } => {
                let arg = match window {
                    Some(w) => Some(*w),
                    None => match file.get::<String>("window")?.as_deref() {
                        None => None,
                        Some("last3") => Some(WindowArg::Last3),
                        Some("last4") => Some(WindowArg::Last4),
                        Some("last5") => Some(WindowArg::Last5),
                        Some("last6") => Some(WindowArg::Last6),
                        Some("all-q2q3") => Some(WindowArg::AllQ2q3),
                        Some("all") => Some(WindowArg::All),
                        Some(other) => {
                            return Err(CliError::Usage(format!("unknown window {other:?}")))
                        }
                    },
                };
                self.window = match arg.unwrap_or(WindowArg::All) {
                    WindowArg::Last3 => WindowChoice::One(HalftimeWindow::Last3First3),
                    WindowArg::Last4 => WindowChoice::One(HalftimeWindow::Last4First4),
                    WindowArg::Last5 => WindowChoice::One(HalftimeWindow::Last5First5),
                    WindowArg::Last6 => WindowChoice::One(HalftimeWindow::Last6First6),
                    WindowArg::AllQ2q3 => WindowChoice::One(HalftimeWindow::AllQ2Q3),
                    WindowArg::All => WindowChoice::All,
                };
            }
            Command::Simulate {
                deltas,
                reps,
                threshold_discoveries,
                ..
            } => {
                let spec = match deltas {
                    Some(s) => s.clone(),
                    None => file
                        .get::<String>("deltas")?
                        .unwrap_or_else(|| "0:0.03:0.6".to_string()),
                };
                self.deltas = parse_delta_grid(&spec)?;
                self.replicates = match reps {
                    Some(r) => *r,
                    None => file.get("reps")?.unwrap_or(10),
                };
                self.threshold_discoveries = match threshold_discoveries {
                    Some(t) => *t,
                    None => file
                        .get("threshold-discoveries")?
                        .unwrap_or(DEFAULT_DISCOVERY_THRESHOLD),
                };
            }
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), CliError> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(CliError::Usage(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.replicates == 0 {
            return Err(CliError::Usage("reps must be at least 1".into()));
        }
        for &d in &self.deltas {
            if !(0.0..1.0).contains(&d) {
                return Err(CliError::Usage(format!(
                    "delta {d} outside the valid range [0, 1)"
                )));
            }
        }
        if self.deltas.is_empty() {
            return Err(CliError::Usage("empty delta grid".into()));
        }
        Ok(())
    }

    /// Hash of the result-relevant configuration (excludes `out` and
    /// `threads`, which cannot change any computed value). Stamped into
    /// every output file header.
    pub fn hash(&self) -> String {
        let path = |p: &Option<PathBuf>| {
            p.as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_default()
        };
        let mut text = String::new();
        let _ = writeln!(text, "shots={}", path(&self.shots));
        let _ = writeln!(text, "freethrows={}", path(&self.freethrows));
        let _ = writeln!(text, "roster={}", path(&self.roster));
        let _ = writeln!(text, "schema-map={}", path(&self.schema_map));
        let _ = writeln!(text, "delimiter={}", self.delimiter as char);
        let _ = writeln!(text, "alpha={}", self.alpha);
        let _ = writeln!(text, "format={}", self.format.label());
        let _ = writeln!(text, "seed={}", self.seed);
        let _ = writeln!(text, "exact-intervals={:?}", self.intervals);
        let _ = writeln!(text, "alternative={}", self.alternative);
        let _ = writeln!(text, "permutations={}", self.permutations);
        let _ = writeln!(text, "metric={:?}", self.metric);
        let _ = writeln!(text, "min-hits={:?}", self.min_hits);
        let _ = writeln!(text, "min-misses={:?}", self.min_misses);
        let _ = writeln!(text, "min-attempts={:?}", self.min_attempts);
        let _ = writeln!(text, "window={:?}", self.window);
        let _ = writeln!(text, "deltas={:?}", self.deltas);
        let _ = writeln!(text, "reps={}", self.replicates);
        let _ = writeln!(text, "threshold-discoveries={}", self.threshold_discoveries);
        format!("{:016x}", fnv1a64(text.as_bytes()))
    }
}

fn opt_or_file(
    flag: Option<usize>,
    file: &FileValues,
    key: &str,
) -> Result<Option<usize>, CliError> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => file.get(key),
    }
}

/// Parse `start:step:end` (inclusive) or a comma-separated list of values.
pub fn parse_delta_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |msg: &str| CliError::Usage(format!("delta grid {spec:?}: {msg}"));
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| bad(&format!("bad number {s:?}")))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    let grid = match parts.as_slice() {
        [single] => single
            .split(',')
            .map(parse)
            .collect::<Result<Vec<f64>, CliError>>()?,
        [start, step, end] => {
            let (start, step, end) = (parse(start)?, parse(step)?, parse(end)?);
            if step <= 0.0 {
                return Err(bad("step must be positive"));
            }
            if end < start {
                return Err(bad("end below start"));
            }
            let count = ((end - start) / step + 1e-9).floor() as usize + 1;
            (0..count)
                .map(|i| round10(start + i as f64 * step))
                .collect()
        }
        _ => return Err(bad("expected start:step:end or a comma list")),
    };
    if grid.is_empty() {
        return Err(bad("empty"));
    }
    Ok(grid)
}

/// Round to 10 decimal places to keep grid values like 7 * 0.03 printable.
fn round10(x: f64) -> f64 {
    (x * 1e10).round() / 1e10
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}
