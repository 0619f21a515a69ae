use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Csv,
    Json,
}

/// A command result: a table plus optional plain and JSON renderings that
/// replace the default ones.
#[derive(Debug, Default)]
pub struct Output {
    header: Vec<String>,
    rows: Vec<Vec<Value>>,
    plain: Option<String>,
    json: Option<Value>,
}

impl Output {
    pub fn table(header: &[&str], rows: Vec<Vec<Value>>) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows, ..Self::default() }
    }

    /// A single row; JSON renders it as one object.
    pub fn record(header: &[&str], row: Vec<Value>) -> Self {
        let mut out = Self::table(header, vec![row]);
        out.json = Some(out.objects().remove(0));
        out
    }

    pub fn with_plain(mut self, s: impl Into<String>) -> Self {
        self.plain = Some(s.into());
        self
    }

    pub fn with_json(mut self, v: Value) -> Self {
        self.json = Some(v);
        self
    }

    fn objects(&self) -> Vec<Value> {
        self.rows
            .iter()
            .map(|r| Value::Object(self.header.iter().cloned().zip(r.iter().cloned()).collect::<Map<_, _>>()))
            .collect()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut s = self.header.join(",");
                s.push('\n');
                for r in &self.rows {
                    s.push_str(&r.iter().map(cell).collect::<Vec<_>>().join(","));
                    s.push('\n');
                }
                s
            }
            Format::Json => {
                let v = self.json.clone().unwrap_or_else(|| Value::Array(self.objects()));
                let mut s = serde_json::to_string_pretty(&v).unwrap();
                s.push('\n');
                s
            }
            Format::Plain => match &self.plain {
                Some(p) => {
                    let mut s = p.clone();
                    if !s.ends_with('\n') {
                        s.push('\n');
                    }
                    s
                }
                None => {
                    let mut s = self.header.join(" ");
                    s.push('\n');
                    for r in &self.rows {
                        s.push_str(&r.iter().map(cell).collect::<Vec<_>>().join(" "));
                        s.push('\n');
                    }
                    s
                }
            },
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
