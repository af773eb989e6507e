//! Experiment output: metadata plus typed rows, serialized as CSV with a
//! `# `-prefixed header block or as a single JSON document.

use serde_json::{json, Map, Value as Json};

use crate::config::{ExperimentConfig, Format};

/// Bumped whenever columns of any experiment change.
pub const SCHEMA_VERSION: u32 = 1;
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => fmt_float(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) if v.is_finite() => json!(v),
            Cell::Float(_) => Json::Null,
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }
}

/// Shortest round-trip representation.
pub fn fmt_float(v: f64) -> String {
    format!("{v:?}")
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}
impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.into())
    }
}
impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}
impl From<u128> for Cell {
    fn from(v: u128) -> Self {
        match i64::try_from(v) {
            Ok(i) => Cell::Int(i),
            Err(_) => Cell::Text(v.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRecord {
    pub experiment: String,
    pub seed: u64,
    pub config: Vec<(String, String)>,
    pub summary: Vec<(String, Cell)>,
    /// Verdict of check experiments; `None` for plain data runs.
    pub passed: Option<bool>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl ExperimentRecord {
    pub fn new(config: &ExperimentConfig, columns: &[&str]) -> Self {
        ExperimentRecord {
            experiment: config.experiment.name().into(),
            seed: config.seed,
            config: config.echo().into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            summary: Vec::new(),
            passed: None,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl Into<Cell>) {
        self.summary.push((key.into(), value.into()));
    }

    pub fn summary_value(&self, key: &str) -> Option<&Cell> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# experiment: {}\n", self.experiment));
        out.push_str(&format!("# schema_version: {SCHEMA_VERSION}\n"));
        out.push_str(&format!("# code_version: {CODE_VERSION}\n"));
        out.push_str(&format!("# seed: {}\n", self.seed));
        for (k, v) in &self.config {
            out.push_str(&format!("# config.{k}: {v}\n"));
        }
        if let Some(p) = self.passed {
            out.push_str(&format!("# passed: {p}\n"));
        }
        for (k, v) in &self.summary {
            out.push_str(&format!("# summary.{k}: {}\n", v.csv()));
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).expect("in-memory write");
        }
        let body = w.into_inner().expect("in-memory write");
        out.push_str(std::str::from_utf8(&body).expect("csv output is utf-8"));
        out
    }

    pub fn to_json(&self) -> String {
        let config: Map<String, Json> = self.config.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        let summary: Map<String, Json> = self.summary.iter().map(|(k, v)| (k.clone(), v.json())).collect();
        let rows: Vec<Json> = self.rows.iter().map(|r| Json::Array(r.iter().map(Cell::json).collect())).collect();
        let doc = json!({
            "experiment": self.experiment,
            "schema_version": SCHEMA_VERSION,
            "code_version": CODE_VERSION,
            "seed": self.seed,
            "config": config,
            "passed": self.passed,
            "summary": summary,
            "columns": self.columns,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("json values are serializable");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Experiment, ExperimentConfig};

    fn sample() -> ExperimentRecord {
        let c = ExperimentConfig::defaults(Experiment::Evolve);
        let mut r = ExperimentRecord::new(&c, &["t", "p", "label"]);
        r.push(vec![1u64.into(), 0.1.into(), "a,b".into()]);
        r.push(vec![2u64.into(), f64::NAN.into(), "c".into()]);
        r.note("p_final", 0.25);
        r
    }

    #[test]
    fn csv_layout() {
        let s = sample().to_csv();
        assert!(s.starts_with("# experiment: evolve\n# schema_version: 1\n"));
        assert!(s.contains("# summary.p_final: 0.25\n"));
        assert!(s.contains("t,p,label\n1,0.1,\"a,b\"\n2,NaN,c\n"));
        assert!(!s.contains('\r'));
    }

    #[test]
    fn json_layout() {
        let v: Json = serde_json::from_str(&sample().to_json()).unwrap();
        assert_eq!(v["experiment"], "evolve");
        assert_eq!(v["rows"][0][1], 0.1);
        assert!(v["rows"][1][1].is_null());
        assert_eq!(v["config"]["field"], "1/155");
        assert!(v["passed"].is_null());
    }

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 2.5e20] {
            assert_eq!(fmt_float(x).parse::<f64>().unwrap(), x);
        }
    }
}
