//! Named tables with a fixed column order, rendered as JSON or TSV.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

#[derive(Clone, Debug)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table { name: name.to_string(), columns: columns.iter().map(|c| (*c).to_string()).collect(), rows: Vec::new() }
    }

    pub fn with_columns(name: &str, columns: Vec<String>) -> Self {
        Table { name: name.to_string(), columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len(), "table {}", self.name);
        self.rows.push(row);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

/// Everything one subcommand prints.
pub struct Output {
    pub subcommand: String,
    pub rank: usize,
    pub max_degree: usize,
    pub tables: Vec<Table>,
}

impl Output {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.json(),
            Format::Tsv => self.tsv(),
        }
    }

    fn json(&self) -> String {
        let mut tables = Map::new();
        for t in &self.tables {
            let rows: Vec<Value> = t
                .rows
                .iter()
                .map(|row| Value::Object(t.columns.iter().cloned().zip(row.iter().cloned()).collect()))
                .collect();
            tables.insert(t.name.clone(), Value::Array(rows));
        }
        let doc = json!({
            "schema": 1,
            "subcommand": self.subcommand,
            "rank": self.rank,
            "max_degree": self.max_degree,
            "tables": tables,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("values are serializable");
        s.push('\n');
        s
    }

    fn tsv(&self) -> String {
        let mut s = String::new();
        for (k, t) in self.tables.iter().enumerate() {
            if k > 0 {
                s.push('\n');
            }
            let _ = writeln!(s, "# {}", t.name);
            let _ = writeln!(s, "{}", t.columns.join("\t"));
            for row in &t.rows {
                let cells: Vec<String> = row.iter().map(cell).collect();
                let _ = writeln!(s, "{}", cells.join("\t"));
            }
        }
        s
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".to_string(),
        other => other.to_string(),
    }
}
