use clap::ValueEnum;
use serde_json::{Map, Value};
use std::io::{self, Write};

pub const SCHEMA: &str = "diagcount/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
    Csv,
}

/// A flat result record. Keys keep insertion order.
#[derive(Clone, Debug, Default)]
pub struct Record {
    fields: Vec<(String, Value)>,
}

impl Record {
    pub fn new(command: &str) -> Self {
        let mut r = Self::default();
        r.put("schema", SCHEMA);
        r.put("command", command);
        r
    }

    pub fn put(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.push((key.to_string(), value.into()));
        self
    }

    /// Counts go out as decimal strings.
    pub fn count(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.put(key, value.to_string())
    }

    pub fn to_json(&self) -> Value {
        let map: Map<String, Value> = self.fields.iter().cloned().collect();
        Value::Object(map)
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Json => writeln!(out, "{}", self.to_json()),
            Format::Table => {
                let width = self.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in &self.fields {
                    writeln!(out, "{k:<width$}  {}", plain(v))?;
                }
                Ok(())
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(self.fields.iter().map(|(k, _)| k.as_str()))?;
                w.write_record(self.fields.iter().map(|(_, v)| plain(v)))?;
                w.flush()
            }
        }
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}
