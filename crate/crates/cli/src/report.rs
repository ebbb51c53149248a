//! Deterministic report emission.
//!
//! Every file starts with a header comment recording the tool version, the
//! hash of the result-relevant configuration, and the master seed. The same
//! inputs and configuration always produce byte-identical files.

use std::io::Write;
use std::path::{Path, PathBuf};

use hotstreak::tabular::{json_string, Cell, Summary, Tabular};

use crate::{CliError, RunConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Provenance stamped into every output file.
#[derive(Debug, Clone)]
pub struct FileMeta {
    pub config_hash: String,
    pub seed: u64,
}

impl FileMeta {
    pub fn from_config(config: &RunConfig) -> Self {
        FileMeta {
            config_hash: config.hash(),
            seed: config.seed,
        }
    }

    fn comment_line(&self) -> String {
        format!(
            "# hotstreak v{VERSION} config={} seed={}",
            self.config_hash, self.seed
        )
    }

    fn json_object(&self) -> String {
        format!(
            "{{\"tool\":\"hotstreak\",\"version\":{},\"config\":{},\"seed\":{}}}",
            json_string(VERSION),
            json_string(&self.config_hash),
            self.seed
        )
    }
}

/// Emitter for one command's output directory and format.
pub struct Reporter {
    out_dir: PathBuf,
    format: crate::OutputFormat,
    meta: FileMeta,
    /// Paths written so far, for the end-of-run note.
    pub written: Vec<PathBuf>,
}

impl Reporter {
    pub fn new(config: &RunConfig) -> Result<Self, CliError> {
        std::fs::create_dir_all(&config.out).map_err(|e| {
            CliError::Data(format!(
                "cannot create output directory {}: {e}",
                config.out.display()
            ))
        })?;
        Ok(Reporter {
            out_dir: config.out.clone(),
            format: config.format,
            meta: FileMeta::from_config(config),
            written: Vec::new(),
        })
    }

    fn path(&self, stem: &str) -> PathBuf {
        self.out_dir
            .join(format!("{stem}.{}", self.format.extension()))
    }

    /// Write a rows file (`<stem>.csv` or `.json`).
    pub fn rows<T: Tabular>(&mut self, stem: &str, rows: &[T]) -> Result<PathBuf, CliError> {
        let path = self.path(stem);
        let bytes = match self.format {
            crate::OutputFormat::Csv => rows_csv(&self.meta, rows)?,
            crate::OutputFormat::Json => rows_json(&self.meta, rows),
        };
        write_file(&path, &bytes)?;
        self.written.push(path.clone());
        Ok(path)
    }

    /// Write a key/value summary file.
    pub fn summary<S: Summary>(&mut self, stem: &str, summary: &S) -> Result<PathBuf, CliError> {
        let path = self.path(stem);
        let bytes = match self.format {
            crate::OutputFormat::Csv => summary_csv(&self.meta, summary)?,
            crate::OutputFormat::Json => summary_json(&self.meta, summary),
        };
        write_file(&path, &bytes)?;
        self.written.push(path.clone());
        Ok(path)
    }

    /// Space-separated list of everything written, for the stdout paragraph.
    pub fn written_list(&self) -> String {
        self.written
            .iter()
            .map(|p| p.display().to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes)
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))
}

fn rows_csv<T: Tabular>(meta: &FileMeta, rows: &[T]) -> Result<Vec<u8>, CliError> {
    let mut buffer = Vec::new();
    writeln!(buffer, "{}", meta.comment_line())?;
    let mut writer = csv::Writer::from_writer(buffer);
    writer.write_record(T::headers())?;
    for row in rows {
        writer.write_record(row.cells().iter().map(Cell::render))?;
    }
    writer
        .into_inner()
        .map_err(|e| CliError::Data(format!("csv flush: {e}")))
}

fn rows_json<T: Tabular>(meta: &FileMeta, rows: &[T]) -> Vec<u8> {
    let headers = T::headers();
    let mut out = String::new();
    out.push_str("{\"meta\":");
    out.push_str(&meta.json_object());
    out.push_str(",\"rows\":[");
    for (i, row) in rows.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push('{');
        for (j, (header, cell)) in headers.iter().zip(row.cells()).enumerate() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&json_string(header));
            out.push(':');
            out.push_str(&cell.render_json());
        }
        out.push('}');
    }
    out.push_str("]}\n");
    out.into_bytes()
}

fn summary_csv<S: Summary>(meta: &FileMeta, summary: &S) -> Result<Vec<u8>, CliError> {
    let mut buffer = Vec::new();
    writeln!(buffer, "{}", meta.comment_line())?;
    let mut writer = csv::Writer::from_writer(buffer);
    writer.write_record(["Key", "Value"])?;
    for (key, cell) in summary.entries() {
        writer.write_record([key, cell.render()])?;
    }
    writer
        .into_inner()
        .map_err(|e| CliError::Data(format!("csv flush: {e}")))
}

fn summary_json<S: Summary>(meta: &FileMeta, summary: &S) -> Vec<u8> {
    let mut out = String::new();
    out.push_str("{\"meta\":");
    out.push_str(&meta.json_object());
    out.push_str(",\"summary\":{");
    for (i, (key, cell)) in summary.entries().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&json_string(key));
        out.push(':');
        out.push_str(&cell.render_json());
    }
    out.push_str("}}\n");
    out.into_bytes()
}
