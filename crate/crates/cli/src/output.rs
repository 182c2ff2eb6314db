//! CSV and JSON-lines writers.
//!
//! CSV files open with `#` comment lines holding the resolved scenario, then a
//! column header. Numbers are written as `{:.16e}` (17 significant digits),
//! missing values as empty cells. JSON-lines files open with a `{"config": ...}`
//! record. Line endings are LF throughout.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use memdiff::{Check, Field, VerificationReport};
use serde::Serialize;
use serde_json::json;

use crate::config::ScenarioConfig;

pub enum Cell {
    Num(f64),
    Opt(Option<f64>),
    Int(usize),
    Text(String),
}

impl Cell {
    fn render(&self, out: &mut String) {
        match self {
            Cell::Num(v) | Cell::Opt(Some(v)) => write!(out, "{v:.16e}").unwrap(),
            Cell::Opt(None) => {}
            Cell::Int(n) => write!(out, "{n}").unwrap(),
            Cell::Text(s) => out.push_str(s),
        }
    }
}

/// Collects files in memory so that nothing is written when a later step fails.
pub struct Outputs {
    header: String,
    config_json: serde_json::Value,
    files: Vec<(String, String)>,
}

impl Outputs {
    pub fn new(subcommand: &str, cfg: &ScenarioConfig) -> anyhow::Result<Self> {
        let resolved = toml::to_string(cfg)?;
        let mut header = format!("# memdiff {} {subcommand}\n", env!("CARGO_PKG_VERSION"));
        for line in resolved.lines() {
            if line.is_empty() {
                header.push_str("#\n");
            } else {
                header.push_str("# ");
                header.push_str(line);
                header.push('\n');
            }
        }
        Ok(Self {
            header,
            config_json: json!({ "subcommand": subcommand, "config": cfg }),
            files: Vec::new(),
        })
    }

    pub fn csv(&mut self, name: &str, columns: &[&str], rows: impl IntoIterator<Item = Vec<Cell>>) {
        let mut out = self.header.clone();
        out.push_str(&columns.join(","));
        out.push('\n');
        for row in rows {
            for (k, cell) in row.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                cell.render(&mut out);
            }
            out.push('\n');
        }
        self.files.push((name.to_string(), out));
    }

    pub fn jsonl<T: Serialize>(&mut self, name: &str, records: &[T]) -> anyhow::Result<()> {
        let mut out = serde_json::to_string(&self.config_json)?;
        out.push('\n');
        for r in records {
            out.push_str(&serde_json::to_string(r)?);
            out.push('\n');
        }
        self.files.push((name.to_string(), out));
        Ok(())
    }

    pub fn field(&mut self, name: &str, fields: &[(&str, &Field)]) {
        let base = fields[0].1;
        let mut cols = vec!["x", "t"];
        cols.extend(fields.iter().map(|(n, _)| *n));
        let rows = (0..=base.nt()).flat_map(|j| {
            (0..=base.nx()).map(move |i| {
                let mut row = vec![Cell::Num(base.x(i)), Cell::Num(base.t(j))];
                row.extend(fields.iter().map(|(_, f)| Cell::Num(f.get(i, j))));
                row
            })
        });
        let rows: Vec<_> = rows.collect();
        self.csv(name, &cols, rows);
    }

    /// `<stem>.csv` and `<stem>.jsonl` with one check per row or line.
    pub fn report(&mut self, stem: &str, report: &VerificationReport) -> anyhow::Result<()> {
        self.csv(
            &format!("{stem}.csv"),
            &[
                "report",
                "name",
                "t",
                "x",
                "lhs",
                "rhs",
                "margin",
                "tolerance",
                "status",
            ],
            report.checks.iter().map(|c| check_row(&report.title, c)),
        );
        let records: Vec<_> = report
            .checks
            .iter()
            .map(|c| json!({ "report": report.title, "check": c }))
            .collect();
        self.jsonl(&format!("{stem}.jsonl"), &records)
    }

    pub fn write_all(self, dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut written = Vec::new();
        for (name, body) in self.files {
            let path = dir.join(name);
            fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
            written.push(path);
        }
        Ok(written)
    }
}

fn check_row(title: &str, c: &Check) -> Vec<Cell> {
    vec![
        Cell::Text(title.replace(',', ";")),
        Cell::Text(c.name.clone()),
        Cell::Opt(c.t),
        Cell::Opt(c.x),
        Cell::Num(c.lhs),
        Cell::Num(c.rhs),
        Cell::Num(c.margin),
        Cell::Num(c.tolerance),
        Cell::Text(c.status.to_string()),
    ]
}
