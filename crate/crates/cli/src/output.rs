use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

use littlewood_core::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Jsonl,
}

/// Effective configuration of one run, echoed at the top of every output.
#[derive(Clone, Debug, Default)]
pub struct Echo(Map<String, Value>);

impl Echo {
    pub fn new(command: &str) -> Self {
        let mut m = Map::new();
        m.insert("program".into(), format!("littlewood {}", env!("CARGO_PKG_VERSION")).into());
        m.insert("command".into(), command.into());
        Echo(m)
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.0.insert(key.into(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }

    pub fn value(&self) -> Value {
        Value::Object(self.0.clone())
    }

    /// `# key: value` lines.
    pub fn write_comments(&self, out: &mut dyn Write) -> io::Result<()> {
        for (k, v) in &self.0 {
            match v {
                Value::String(s) => writeln!(out, "# {k}: {s}")?,
                other => writeln!(out, "# {k}: {other}")?,
            }
        }
        Ok(())
    }
}

pub fn open(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// A JSON document `{ "config": ..., "result": ... }`.
pub fn json_document<T: Serialize>(echo: &Echo, result: &T) -> Result<Value> {
    let mut m = Map::new();
    m.insert("config".into(), echo.value());
    m.insert("result".into(), serde_json::to_value(result)?);
    Ok(Value::Object(m))
}

pub fn write_json<T: Serialize>(out: &mut dyn Write, echo: &Echo, result: &T, format: Format) -> Result<()> {
    let doc = json_document(echo, result)?;
    match format {
        Format::Jsonl => serde_json::to_writer(&mut *out, &doc)?,
        _ => serde_json::to_writer_pretty(&mut *out, &doc)?,
    }
    writeln!(out)?;
    Ok(())
}
