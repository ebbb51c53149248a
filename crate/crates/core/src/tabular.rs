//! Report-table cells with fixed formatting rules.
//!
//! Statistics, proportions and p-values print with 4 decimal places; metric
//! means print with 2. Emission to CSV or JSON lives in the CLI; this module
//! only fixes what each cell looks like so re-runs are byte-identical.

/// One formatted table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Str(String),
    Int(i64),
    UInt(u64),
    /// Metric mean, 2 decimal places.
    Mean(f64),
    /// Statistic or proportion, 4 decimal places.
    Stat(f64),
    /// p-value, 4 decimal places.
    PValue(f64),
    Flag(bool),
    /// Undefined value; empty in CSV, null in JSON.
    Missing,
}

impl Cell {
    /// Optional statistic: `Missing` when undefined.
    pub fn stat_opt(value: Option<f64>) -> Cell {
        value.map_or(Cell::Missing, Cell::Stat)
    }

    /// Plain-text rendering used for CSV cells.
    pub fn render(&self) -> String {
        match self {
            Cell::Str(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::UInt(i) => i.to_string(),
            Cell::Mean(v) => format!("{v:.2}"),
            Cell::Stat(v) | Cell::PValue(v) => format!("{v:.4}"),
            Cell::Flag(b) => if *b { "1" } else { "0" }.to_string(),
            Cell::Missing => String::new(),
        }
    }

    /// JSON literal rendering (numbers keep the fixed precision).
    pub fn render_json(&self) -> String {
        match self {
            Cell::Str(s) => json_string(s),
            Cell::Int(i) => i.to_string(),
            Cell::UInt(i) => i.to_string(),
            Cell::Mean(v) => render_json_number(*v, 2),
            Cell::Stat(v) | Cell::PValue(v) => render_json_number(*v, 4),
            Cell::Flag(b) => b.to_string(),
            Cell::Missing => "null".to_string(),
        }
    }
}

fn render_json_number(value: f64, places: usize) -> String {
    if value.is_finite() {
        format!("{value:.places$}")
    } else {
        "null".to_string()
    }
}

pub fn json_string(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// A report row that knows its column headers and cell values.
pub trait Tabular {
    fn headers() -> &'static [&'static str];
    fn cells(&self) -> Vec<Cell>;
}

/// A key/value summary that renders as a two-column table or a JSON object.
pub trait Summary {
    fn entries(&self) -> Vec<(String, Cell)>;
}

/// Shorthand for building one summary entry.
pub fn entry(key: impl Into<String>, cell: Cell) -> (String, Cell) {
    (key.into(), cell)
}
