//! Rendering command results as JSON, CSV or a plain-text table.

use capacity_core::report::{Bound, CapacityReport};
use clap::ValueEnum;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// A command result: ordered scalar fields, bounds, notes and an optional
/// structured payload (which only the JSON form carries in full).
#[derive(Debug, Clone, Default)]
pub struct Document {
    pub kind: String,
    pub fields: Vec<(String, Value)>,
    pub bounds: Vec<Bound>,
    pub notes: Vec<String>,
    pub payload: Vec<(String, Value)>,
}

impl Document {
    pub fn new(kind: &str) -> Self {
        Self {
            kind: kind.to_string(),
            ..Self::default()
        }
    }

    pub fn field(mut self, name: &str, value: impl Into<Value>) -> Self {
        self.fields.push((name.to_string(), value.into()));
        self
    }

    pub fn payload(mut self, name: &str, value: Value) -> Self {
        self.payload.push((name.to_string(), value));
        self
    }

    pub fn from_report(kind: &str, report: &CapacityReport) -> Self {
        let mut doc = Self::new(kind).field("subject", report.subject.clone());
        if let Some(count) = &report.exact_count {
            doc = doc
                .field("exact_count", count.to_string())
                .field("log2_exact", report.log2_exact().map(round6).unwrap_or(0.0))
                .field("violations", report.violations().len());
        }
        doc.bounds = report.bounds.clone();
        doc.notes = report.notes.clone();
        doc
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut text = serde_json::to_string_pretty(&self.to_json()).expect("json values serialize");
                text.push('\n');
                text
            }
            Format::Csv => self.to_csv(),
            Format::Table => self.to_table(),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("kind".into(), Value::String(self.kind.clone()));
        for (k, v) in &self.fields {
            obj.insert(k.clone(), v.clone());
        }
        if !self.bounds.is_empty() {
            obj.insert("bounds".into(), Value::Array(self.bounds.iter().map(bound_json).collect()));
        }
        if !self.notes.is_empty() {
            obj.insert("notes".into(), json!(self.notes));
        }
        for (k, v) in &self.payload {
            obj.insert(k.clone(), v.clone());
        }
        Value::Object(obj)
    }

    fn to_csv(&self) -> String {
        let mut out = String::from("record,name,value,kind,log2,count,strict,hypotheses_hold,anchor\n");
        out.push_str(&csv_row(&["field", "kind", &self.kind]));
        for (k, v) in &self.fields {
            out.push_str(&csv_row(&["field", k, &scalar(v)]));
        }
        for b in &self.bounds {
            out.push_str(&csv_row(&[
                "bound",
                &b.name,
                "",
                b.kind.as_str(),
                &format_log2(b.log2),
                &b.count.as_ref().map(|c| c.to_string()).unwrap_or_default(),
                &b.strict.to_string(),
                &b.hypotheses_hold.to_string(),
                &b.anchor,
            ]));
        }
        for n in &self.notes {
            out.push_str(&csv_row(&["note", "", n]));
        }
        for (k, v) in &self.payload {
            out.push_str(&csv_row(&["payload", k, &v.to_string()]));
        }
        out
    }

    fn to_table(&self) -> String {
        let mut out = format!("{}\n", self.kind);
        let width = self.fields.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        for (k, v) in &self.fields {
            out.push_str(&format!("  {k:<width$}  {}\n", scalar(v)));
        }
        if !self.bounds.is_empty() {
            let rows: Vec<[String; 5]> = self
                .bounds
                .iter()
                .map(|b| {
                    let flag = match (b.hypotheses_hold, b.strict) {
                        (false, _) => "hypotheses fail",
                        (true, true) => "strict",
                        (true, false) => "",
                    };
                    [
                        b.name.clone(),
                        b.kind.as_str().to_string(),
                        format_log2(b.log2),
                        flag.to_string(),
                        b.anchor.clone(),
                    ]
                })
                .collect();
            let header = ["bound", "kind", "log2", "flags", "anchor"];
            let widths: Vec<usize> = (0..5)
                .map(|i| {
                    rows.iter()
                        .map(|r| r[i].chars().count())
                        .chain([header[i].len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |cells: [&str; 5]| {
                let mut s = String::from(" ");
                for (i, c) in cells.iter().enumerate() {
                    let pad = widths[i] - c.chars().count();
                    s.push(' ');
                    s.push_str(c);
                    if i + 1 < cells.len() {
                        s.push_str(&" ".repeat(pad + 1));
                    }
                }
                s.push('\n');
                s
            };
            out.push('\n');
            out.push_str(&line(header));
            for r in &rows {
                out.push_str(&line([&r[0], &r[1], &r[2], &r[3], &r[4]]));
            }
        }
        if !self.notes.is_empty() {
            out.push('\n');
            for n in &self.notes {
                out.push_str(&format!("  note: {n}\n"));
            }
        }
        for (k, v) in &self.payload {
            out.push_str(&format!("\n{k}:\n{}\n", serde_json::to_string_pretty(v).expect("json values serialize")));
        }
        out
    }
}

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

fn format_log2(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.6}")
    } else {
        "inf".into()
    }
}

fn bound_json(b: &Bound) -> Value {
    json!({
        "name": b.name,
        "kind": b.kind.as_str(),
        "log2": if b.log2.is_finite() { json!(round6(b.log2)) } else { Value::Null },
        "count": b.count.as_ref().map(|c| c.to_string()),
        "strict": b.strict,
        "hypotheses_hold": b.hypotheses_hold,
        "anchor": b.anchor,
    })
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn csv_row(cells: &[&str]) -> String {
    let mut row: Vec<String> = cells.iter().map(|c| csv_cell(c)).collect();
    row.resize(9, String::new());
    let mut s = row.join(",");
    s.push('\n');
    s
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}
