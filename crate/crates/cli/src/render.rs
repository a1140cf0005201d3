//! A small tabular model with text, CSV and JSON emitters.

use std::collections::BTreeSet;

use clap::ValueEnum;
use galimage::indexsets::DeltaSet;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    Int(u64),
    Set(BTreeSet<u64>),
    /// A divisor interval; `None` is the empty set.
    Delta(Option<DeltaSet>),
    Text(String),
    Bit(bool),
}

impl Cell {
    pub fn set(values: impl IntoIterator<Item = u64>) -> Self {
        Cell::Set(values.into_iter().collect())
    }

    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    fn plain(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Set(s) => join_set(s),
            Cell::Delta(Some(d)) => d.to_string(),
            Cell::Delta(None) => "∅".into(),
            Cell::Text(s) => s.clone(),
            Cell::Bit(b) => u8::from(*b).to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(n) => json!(n),
            Cell::Set(s) => json!(s),
            Cell::Delta(d) => json!(d),
            Cell::Text(s) => json!(s),
            Cell::Bit(b) => json!(u8::from(*b)),
        }
    }
}

/// `a,b,c`, or `∅` for the empty set.
pub fn join_set(s: &BTreeSet<u64>) -> String {
    if s.is_empty() {
        return "∅".into();
    }
    s.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

#[derive(Clone, Debug)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Column separator for the text form.
    pub separator: &'static str,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            separator: " | ",
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }

    fn text(&self) -> String {
        let mut out = self.columns.join(self.separator);
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::plain).collect();
            out.push_str(&cells.join(self.separator));
            out.push('\n');
        }
        out
    }

    fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::plain)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }

    fn json(&self) -> String {
        let rows: Vec<Vec<Value>> = self.rows.iter().map(|r| r.iter().map(Cell::json).collect()).collect();
        to_json(&json!({ "table": self.name, "columns": self.columns, "rows": rows }))
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use galimage::indexsets::delta;

    fn sample() -> Table {
        let mut t = Table::new("sample", &["ℓ", "Z", "Cs"]);
        t.push(vec![
            Cell::Int(5),
            Cell::Delta(Some(delta(&[1], &[40, 48]).unwrap().excluding([3]).unwrap())),
            Cell::set([2, 3, 7]),
        ]);
        t.push(vec![Cell::Int(17), Cell::Delta(None), Cell::set([])]);
        t
    }

    #[test]
    fn text_uses_delta_notation() {
        assert_eq!(sample().render(Format::Text), "ℓ | Z | Cs\n5 | Δ(1|40,48)∖{3} | 2,3,7\n17 | ∅ | ∅\n");
    }

    #[test]
    fn csv_quotes_sets() {
        assert_eq!(sample().render(Format::Csv), "ℓ,Z,Cs\n5,\"Δ(1|40,48)∖{3}\",\"2,3,7\"\n17,∅,∅\n");
    }

    #[test]
    fn json_delta_schema() {
        let v: Value = serde_json::from_str(&sample().render(Format::Json)).unwrap();
        assert_eq!(v["rows"][0][1], json!({"lower": [1], "upper": [40, 48], "exclude": [3]}));
        assert_eq!(v["rows"][1][1], Value::Null);
        assert_eq!(v["rows"][0][2], json!([2, 3, 7]));
    }
}
