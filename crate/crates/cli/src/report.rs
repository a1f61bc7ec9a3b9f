use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportKind {
    Designs,
    Graphs,
}

/// One table line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    /// `t-(v,k,lambda)` for designs, `(v,k,lambda,mu)` for graphs.
    pub parameters: String,
    pub blocks: Option<u64>,
    /// Non-isomorphic structures found.
    pub count: usize,
    /// Set when the count is only a lower bound.
    pub lower_bound: bool,
    /// Automorphism group orders of the classes, distinct and ascending.
    pub aut_orders: Vec<String>,
    /// `omega1:omega2:mask` per class for designs, `class:orbits` for graphs.
    pub provenance: Vec<String>,
}

impl ReportRow {
    pub fn count_text(&self) -> String {
        if self.lower_bound {
            format!("≥ {}", self.count)
        } else {
            self.count.to_string()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub kind: ReportKind,
    pub rows: Vec<ReportRow>,
    /// Cap exceedances and other reasons a row may be incomplete.
    pub warnings: Vec<String>,
    /// Scope limits chosen in the config; they do not make a run inexact.
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(kind: ReportKind) -> Self {
        Report {
            kind,
            rows: Vec::new(),
            warnings: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn row(&self, parameters: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.parameters == parameters)
    }

    pub fn is_exact(&self) -> bool {
        self.warnings.is_empty() && self.rows.iter().all(|r| !r.lower_bound)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Markdown,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Markdown => "md",
        }
    }
}

const CSV_HEADER: [&str; 6] = [
    "parameters",
    "blocks",
    "count",
    "lower_bound",
    "aut_orders",
    "provenance",
];

pub fn to_csv(report: &Report) -> CliResult<String> {
    let enc = |e: csv::Error| CliError::Encode(e.to_string());
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(CSV_HEADER).map_err(enc)?;
    for r in &report.rows {
        w.write_record([
            r.parameters.clone(),
            r.blocks.map(|b| b.to_string()).unwrap_or_default(),
            r.count.to_string(),
            r.lower_bound.to_string(),
            r.aut_orders.join(";"),
            r.provenance.join(";"),
        ])
        .map_err(enc)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Encode(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Encode(e.to_string()))
}

pub fn to_json(report: &Report) -> CliResult<String> {
    let mut s =
        serde_json::to_string_pretty(report).map_err(|e| CliError::Encode(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn from_json(text: &str) -> CliResult<Report> {
    serde_json::from_str(text).map_err(|e| CliError::Encode(e.to_string()))
}

/// Markdown table laid out like the printed tables.
pub fn to_markdown(report: &Report) -> String {
    let mut s = String::new();
    match report.kind {
        ReportKind::Designs => {
            s.push_str("| Parameters of designs | # of blocks | # non-isomorphic | Full automorphism group |\n");
            s.push_str("|---|---|---|---|\n");
            for r in &report.rows {
                let blocks = r.blocks.map(|b| b.to_string()).unwrap_or_default();
                let _ = writeln!(
                    s,
                    "| {} | {} | {} | {} |",
                    r.parameters,
                    blocks,
                    r.count_text(),
                    r.aut_orders.join(", ")
                );
            }
        }
        ReportKind::Graphs => {
            s.push_str("| Parameters | # non-isomorphic | Full automorphism group |\n");
            s.push_str("|---|---|---|\n");
            for r in &report.rows {
                let _ = writeln!(
                    s,
                    "| {} | {} | {} |",
                    r.parameters,
                    r.count_text(),
                    r.aut_orders.join(", ")
                );
            }
        }
    }
    for n in &report.notes {
        let _ = writeln!(s, "\nnote: {n}");
    }
    for w in &report.warnings {
        let _ = writeln!(s, "\nwarning: {w}");
    }
    s
}

/// Writes `<stem>.<ext>` for each format into `dir` and returns the paths.
pub fn emit_report(
    report: &Report,
    dir: &Path,
    stem: &str,
    formats: &[Format],
) -> CliResult<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut out = Vec::new();
    for &f in formats {
        let text = match f {
            Format::Csv => to_csv(report)?,
            Format::Json => to_json(report)?,
            Format::Markdown => to_markdown(report),
        };
        let path = dir.join(format!("{stem}.{}", f.extension()));
        fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        out.push(path);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new(ReportKind::Designs);
        r.rows.push(ReportRow {
            parameters: "3-(12,6,2)".into(),
            blocks: Some(22),
            count: 1,
            lower_bound: false,
            aut_orders: vec!["7920".into()],
            provenance: vec!["5:36:0x3".into()],
        });
        r.rows.push(ReportRow {
            parameters: "2-(55,6,40)".into(),
            blocks: Some(3960),
            count: 14,
            lower_bound: true,
            aut_orders: vec!["7920".into()],
            provenance: vec![],
        });
        r
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        assert_eq!(from_json(&to_json(&r).unwrap()).unwrap(), r);
    }

    #[test]
    fn empty_report_is_header_only() {
        let r = Report::new(ReportKind::Designs);
        assert_eq!(
            to_csv(&r).unwrap(),
            "parameters,blocks,count,lower_bound,aut_orders,provenance\n"
        );
        assert_eq!(to_markdown(&r).lines().count(), 2);
    }

    #[test]
    fn markdown_has_four_columns() {
        let md = to_markdown(&sample());
        let line = md.lines().nth(2).unwrap();
        assert_eq!(line, "| 3-(12,6,2) | 22 | 1 | 7920 |");
        assert!(md.contains("≥ 14"));
    }

    #[test]
    fn emitted_files_are_stable() {
        let dir = tempfile::tempdir().unwrap();
        let all = [Format::Csv, Format::Json, Format::Markdown];
        let a = emit_report(&sample(), dir.path(), "t", &all).unwrap();
        let first: Vec<String> = a.iter().map(|p| fs::read_to_string(p).unwrap()).collect();
        emit_report(&sample(), dir.path(), "t", &all).unwrap();
        let second: Vec<String> = a.iter().map(|p| fs::read_to_string(p).unwrap()).collect();
        assert_eq!(first, second);
    }
}
