//! Tables, assertions and the on-disk layout of a run.

use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::Result;
use crate::grid_convex::fmt_ext;

/// A CSV table written as `<name>.csv`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    #[serde(skip)]
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Row of numbers; `+∞` is written as `inf`.
    pub fn push_nums(&mut self, row: &[f64]) {
        self.push(row.iter().map(|v| fmt_ext(*v)).collect());
    }

    pub fn file_name(&self) -> String {
        format!("{}.csv", self.name)
    }

    pub fn write_to<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header)?;
        for row in &self.rows {
            out.write_record(row)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// How `measured` is compared with `expected`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `|measured − expected| ≤ tolerance`.
    Within,
    /// `measured ≤ expected + tolerance`.
    AtMost,
    /// `measured ≥ expected − tolerance`.
    AtLeast,
}

/// One pass/fail check with the property it tests.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub claim: String,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub relation: Relation,
    pub passed: bool,
}

impl Assertion {
    pub fn new(
        name: &str,
        claim: &str,
        measured: f64,
        expected: f64,
        tolerance: f64,
        relation: Relation,
    ) -> Self {
        let passed = match relation {
            Relation::Within => (measured - expected).abs() <= tolerance,
            Relation::AtMost => measured <= expected + tolerance,
            Relation::AtLeast => measured >= expected - tolerance,
        };
        Self {
            name: name.to_string(),
            claim: claim.to_string(),
            measured,
            expected,
            tolerance,
            relation,
            passed,
        }
    }

    /// A yes/no property, recorded as measured 1 or 0 against 1.
    pub fn holds(name: &str, claim: &str, ok: bool) -> Self {
        Self::new(
            name,
            claim,
            if ok { 1.0 } else { 0.0 },
            1.0,
            0.0,
            Relation::Within,
        )
    }
}

/// Everything a run produces.
#[derive(Debug, Clone, Default)]
pub struct RunArtifact {
    pub scenario: String,
    pub tables: Vec<Table>,
    pub assertions: Vec<Assertion>,
    /// Scalar results and run metadata that go into `summary.json`.
    pub metrics: Map<String, Value>,
    /// Extra JSON files, e.g. snapshot sidecars.
    pub sidecars: Vec<(String, Value)>,
}

impl RunArtifact {
    pub fn new(scenario: &str) -> Self {
        Self {
            scenario: scenario.to_string(),
            ..Self::default()
        }
    }

    pub fn all_passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn assert(&mut self, a: Assertion) {
        self.assertions.push(a);
    }

    pub fn metric(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.metrics.insert(key.to_string(), v);
    }

    pub fn assertion(&self, name: &str) -> Option<&Assertion> {
        self.assertions.iter().find(|a| a.name == name)
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    /// `summary.json` contents; everything in it is a function of the config.
    pub fn summary(&self, config_echo: &str) -> Value {
        let mut files: Vec<String> = self.tables.iter().map(Table::file_name).collect();
        files.extend(self.sidecars.iter().map(|(n, _)| n.clone()));
        serde_json::json!({
            "scenario": self.scenario,
            "version": env!("CARGO_PKG_VERSION"),
            "config": config_echo,
            "config_file": "config.txt",
            "tables": files,
            "assertions": self.assertions,
            "all_passed": self.all_passed(),
            "metrics": self.metrics,
        })
    }

    /// Writes tables, sidecars, `config.txt` and `summary.json` into `dir`.
    pub fn write(&self, dir: &Path, config_echo: &str) -> Result<()> {
        fs::create_dir_all(dir)?;
        for t in &self.tables {
            t.write_to(fs::File::create(dir.join(t.file_name()))?)?;
        }
        for (name, v) in &self.sidecars {
            fs::write(dir.join(name), serde_json::to_string_pretty(v)? + "\n")?;
        }
        fs::write(dir.join("config.txt"), config_echo)?;
        let summary = serde_json::to_string_pretty(&self.summary(config_echo))?;
        fs::write(dir.join("summary.json"), summary + "\n")?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations() {
        assert!(Assertion::new("a", "", 1.05, 1.0, 0.1, Relation::Within).passed);
        assert!(!Assertion::new("a", "", 1.2, 1.0, 0.1, Relation::Within).passed);
        assert!(Assertion::new("a", "", 0.5, 1.0, 0.0, Relation::AtMost).passed);
        assert!(!Assertion::new("a", "", 0.5, 1.0, 0.0, Relation::AtLeast).passed);
        assert!(!Assertion::new("a", "", f64::NAN, 1.0, 1.0, Relation::AtMost).passed);
        assert!(!Assertion::holds("h", "", false).passed);
    }

    #[test]
    fn writes_tables_and_summary() {
        let dir = tempfile::tempdir().unwrap();
        let mut art = RunArtifact::new("demo");
        let mut t = Table::new("values", &["x", "value"]);
        t.push_nums(&[0.5, f64::INFINITY]);
        art.tables.push(t);
        art.assert(Assertion::holds("ok", "trivial", true));
        art.metric("answer", 42);
        art.write(dir.path(), "[run]\nseed = 1\n").unwrap();
        let csv = fs::read_to_string(dir.path().join("values.csv")).unwrap();
        assert_eq!(csv, "x,value\n0.5,inf\n");
        let s: Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap())
                .unwrap();
        assert_eq!(s["all_passed"], Value::Bool(true));
        assert_eq!(s["tables"][0], "values.csv");
        assert_eq!(s["metrics"]["answer"], 42);
        assert_eq!(
            fs::read_to_string(dir.path().join("config.txt")).unwrap(),
            "[run]\nseed = 1\n"
        );
    }
}
