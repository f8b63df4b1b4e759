//! Tabular reports and their CSV / JSON renderings.

use serde_json::{Map, Value};

use crate::config::RunConfig;
use crate::CliError;

pub const NA: &str = "NA";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Bool(bool),
    Text(String),
    Na,
}

impl Cell {
    pub fn opt(value: Option<f64>) -> Cell {
        value.map_or(Cell::Na, Cell::Float)
    }

    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            // shortest representation that parses back to the same f64
            Cell::Float(v) => format!("{v:?}"),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(v) => v.clone(),
            Cell::Na => NA.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v) => Value::from(*v),
            Cell::Bool(v) => Value::from(*v),
            Cell::Text(v) => Value::from(v.clone()),
            Cell::Na => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub config: RunConfig,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Map<String, Value>,
}

impl Report {
    pub fn new(config: RunConfig, columns: Vec<String>) -> Self {
        Report {
            config,
            columns,
            rows: Vec::new(),
            summary: Map::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    fn config_json(&self) -> Result<Value, CliError> {
        serde_json::to_value(&self.config).map_err(|e| CliError::Runtime(format!("serialising config: {e}")))
    }

    /// `#` comment lines carrying the config and summary, then a header
    /// row and one line per row. Missing values are written as `NA`.
    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut out = String::new();
        out.push_str(&format!("# heavytail-cs {}\n", self.config.command));
        out.push_str(&format!("# config: {}\n", self.config_json()?));
        out.push_str(&format!("# summary: {}\n", Value::Object(self.summary.clone())));
        let mut writer = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| CliError::Runtime(format!("writing csv: {e}"));
        writer.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            writer.write_record(row.iter().map(Cell::csv)).map_err(csv_err)?;
        }
        let body = writer
            .into_inner()
            .map_err(|e| CliError::Runtime(format!("writing csv: {e}")))?;
        out.push_str(&String::from_utf8(body).expect("csv output is UTF-8"));
        Ok(out)
    }

    /// `{"config": …, "rows": […], "summary": {…}}`; missing values are `null`.
    pub fn to_json(&self) -> Result<String, CliError> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                Value::Object(obj)
            })
            .collect();
        let mut top = Map::new();
        top.insert("config".into(), self.config_json()?);
        top.insert("rows".into(), Value::Array(rows));
        top.insert("summary".into(), Value::Object(self.summary.clone()));
        let mut text = serde_json::to_string_pretty(&Value::Object(top))
            .map_err(|e| CliError::Runtime(format!("writing json: {e}")))?;
        text.push('\n');
        Ok(text)
    }
}
