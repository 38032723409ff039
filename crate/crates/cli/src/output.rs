use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::ValueEnum;
use serde_json::{json, Map, Value};

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Provenance block written at the top of every output.
#[derive(Debug, Clone)]
pub struct Header {
    pub command: String,
    pub config: Vec<(&'static str, String)>,
    /// Run metadata decided during the command, such as a calibrated choice.
    pub notes: Vec<(String, String)>,
}

impl Header {
    pub fn new(command: String, config: &RunConfig) -> Self {
        Self { command, config: config.pairs(), notes: Vec::new() }
    }

    fn csv_lines(&self) -> String {
        let mut s = format!("# fuzzyqm {}\n# command: {}\n", env!("CARGO_PKG_VERSION"), self.command);
        for (k, v) in &self.config {
            s.push_str(&format!("# config: {k} = {v}\n"));
        }
        for (k, v) in &self.notes {
            s.push_str(&format!("# note: {k} = {v}\n"));
        }
        s
    }

    fn json(&self) -> Value {
        let config: Map<String, Value> = self.config.iter().map(|(k, v)| (k.to_string(), Value::String(v.clone()))).collect();
        let notes: Map<String, Value> = self.notes.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        json!({ "tool": "fuzzyqm", "version": env!("CARGO_PKG_VERSION"), "command": self.command, "config": config, "notes": notes })
    }
}

/// Rectangular table with unit-suffixed column names.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Primary result of a command.
#[derive(Debug, Clone)]
pub enum Document {
    Table(Table),
    Report(Value),
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn render(header: &Header, doc: &Document, format: Format) -> anyhow::Result<String> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
            match doc {
                Document::Table(t) => {
                    w.write_record(&t.columns)?;
                    for row in &t.rows {
                        w.write_record(row.iter().map(cell))?;
                    }
                }
                Document::Report(v) => {
                    w.write_record(["key", "value"])?;
                    if let Value::Object(map) = v {
                        for (k, v) in map {
                            w.write_record([k.as_str(), &cell(v)])?;
                        }
                    }
                }
            }
            let body = String::from_utf8(w.into_inner().context("flushing csv")?)?;
            Ok(header.csv_lines() + &body)
        }
        Format::Json => {
            let data = match doc {
                Document::Table(t) => Value::Array(
                    t.rows.iter().map(|row| Value::Object(t.columns.iter().cloned().zip(row.iter().cloned()).collect())).collect(),
                ),
                Document::Report(v) => v.clone(),
            };
            let mut out = header.json();
            out["data"] = data;
            Ok(serde_json::to_string_pretty(&out)? + "\n")
        }
    }
}

/// Where results go: stdout only, or files in a directory.
#[derive(Debug, Clone)]
pub struct Sink {
    pub dir: Option<PathBuf>,
    pub format: Format,
}

impl Sink {
    pub fn extension(format: Format) -> &'static str {
        match format {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }

    /// Writes the primary document to `<dir>/<stem>.<ext>` when a directory
    /// is set, else to stdout.
    pub fn primary(&self, header: &Header, stem: &str, doc: &Document) -> anyhow::Result<()> {
        let text = render(header, doc, self.format)?;
        match &self.dir {
            Some(dir) => write_file(dir, &format!("{stem}.{}", Self::extension(self.format)), &text),
            None => {
                std::io::stdout().write_all(text.as_bytes())?;
                Ok(())
            }
        }
    }

    /// Plot-data side files; written only when a directory is set.
    pub fn auxiliary(&self, header: &Header, name: &str, doc: &Document, format: Format) -> anyhow::Result<()> {
        if let Some(dir) = &self.dir {
            write_file(dir, &format!("{name}.{}", Self::extension(format)), &render(header, doc, format)?)?;
        }
        Ok(())
    }
}

fn write_file(dir: &Path, name: &str, text: &str) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
}
